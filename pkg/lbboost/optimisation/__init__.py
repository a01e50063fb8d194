from .mask import PixelLabel, TrainingMask, default_discount
from .loss import LossType, foreground_loss, background_loss, smooth_background_loss, smooth_loss, total_loss
from .partition import LossContext, LossPartition, ShiftOptState, AlphaOptState, build_partition
from .shift import shift_loss, optimize_shift, ShiftWalk, smooth_shift_loss, optimize_smooth_shift
from .alpha import alpha_loss, alpha_overestimate, optimize_alpha, optimize_alpha_flat, FlatAlphaWalk, SortedBreakpoints
from .alpha import smooth_alpha_loss, smooth_alpha_overestimate, optimize_smooth_alpha
from .sweep import SweepStep, SweepResult, IncrementalPartition, optimize_step, sweep_thresholds, sweep_image
