from dataclasses import dataclass, field, replace
from typing import Sequence
import math

import numpy as np

from .alpha import FlatAlphaWalk, SortedBreakpoints, minimize_alpha, minimize_smooth_alpha
from .alpha import optimize_alpha, optimize_alpha_flat, optimize_smooth_alpha
from .loss import LossType
from .mask import TrainingMask
from .partition import LossContext, LossPartition
from .shift import ShiftWalk, minimize_smooth_shift, optimize_shift, optimize_smooth_shift
from ..hos.hypothesis import ScoredLocation
from ..hos.kernel import CorrelationKernel, EvidenceMode
from ..hos.objectness import ObjectnessField
from ..utils.errors import ExtentError
from ..utils.sums import RunningSum

@dataclass
class SweepStep:
    theta: float
    alpha: float
    shift: float
    shift_loss: float
    alpha_bound: float

    @property
    def bound(self) -> float:
        return self.shift_loss + self.alpha_bound

@dataclass
class SweepResult:
    theta: float
    alpha: float
    shift: float
    shift_loss: float
    alpha_bound: float
    n_levels: int
    steps: list[SweepStep] = field(default_factory = list)

    @property
    def bound(self) -> float:
        return self.shift_loss + self.alpha_bound

def optimize_step(partition: LossPartition, theta: float, alpha_max: float,
                  loss: LossType = LossType.Hinge, flat: bool = False) -> SweepStep:
    """
    shift and alpha of a single threshold, for the given partition
    """
    if loss == LossType.Smooth:
        s, s_loss = optimize_smooth_shift(partition, alpha_max)
        a, a_bound = optimize_smooth_alpha(partition, alpha_max)
    else:
        s, s_loss = optimize_shift(partition)
        a, a_bound = optimize_alpha_flat(partition, alpha_max) if flat else optimize_alpha(partition, alpha_max)
    return SweepStep(theta, a, s, s_loss, a_bound)

def _kernel_targets(detections: Sequence[Sequence[ScoredLocation]], context: LossContext,
                    kernel: CorrelationKernel):
    """
    Flat target indices and kernel values of every detection, detections ordered by
    decreasing confidence (ties by image, row, column).
    Returns (confidences, offsets into the target arrays, targets, values).
    """
    rows = [(i, d.x, d.y, d.c) for i, dets in enumerate(detections) for d in dets]
    if len(rows) == 0:
        return np.zeros(0), np.zeros(1, dtype = np.int64), np.zeros(0, dtype = np.int64), np.zeros(0)
    image, xs, ys, cs = (np.asarray(col) for col in zip(*rows))
    image, xs, ys, cs = image.astype(int), xs.astype(int), ys.astype(int), cs.astype(float)
    order = np.lexsort((xs, ys, image, -cs))
    image, xs, ys, cs = image[order], xs[order], ys[order], cs[order]

    dy, dx, kvalues = kernel.offsets
    targets = np.full((len(cs), len(dy)), -1, dtype = np.int64)
    for i, index in enumerate(context.index):
        members = np.flatnonzero(image == i)
        if len(members) == 0:
            continue
        height, width = index.shape
        x, y = xs[members], ys[members]
        outside = (x < 0) | (x >= width) | (y < 0) | (y >= height)
        if np.any(outside):
            k = int(np.argmax(outside))
            raise ExtentError(f'Detection ({x[k]}, {y[k]}) is outside the image extent {width}x{height}.')
        py, px = y[:, None] + dy[None, :], x[:, None] + dx[None, :]
        inside = (py >= 0) & (py < height) & (px >= 0) & (px < width)
        targets[members] = np.where(inside, index[np.clip(py, 0, height - 1), np.clip(px, 0, width - 1)], -1)

    keep = targets >= 0
    offsets = np.concatenate([[0], np.cumsum(np.count_nonzero(keep, axis = 1))]).astype(np.int64)
    values = np.broadcast_to(kvalues, targets.shape)
    return cs, offsets, targets[keep], values[keep]

class IncrementalPartition:
    """
    The loss partition of a sweep, updated as each confidence level adds evidence.

    Pixels only move from fg0 to fg+ and from bg0 to bg+, and the evidence on a pixel only grows.
    The sums each optimiser needs are kept up to date for the touched pixels only:
    the shift walk for bg0, the foreground sums for fg+ and fg0, and for bg+ either the flat
    alpha walk, the sorted breakpoints or the two smooth sums.
    """
    def __init__(self, context: LossContext, mode: EvidenceMode, loss: LossType,
                 flat: bool, alpha_max: float) -> None:
        self.context = context
        self.mode = mode
        self.loss = loss
        self.flat = flat
        self.alpha_max = alpha_max
        self.raw = np.zeros(context.size)
        self.f = np.zeros(context.size)

        self.fg_weight   = RunningSum()   # sum over fg+ of e^-H f
        self.fg_constant = RunningSum()   # sum over fg+ of e^-H (1 - f)
        self.V = RunningSum.of(context.exp_neg_H[context.object_idx])
        self.n_fg_zero = len(context.object_idx)

        if loss == LossType.Smooth:
            self.bg_weight   = RunningSum()   # sum over bg+ of e^H f
            self.bg_constant = RunningSum()   # sum over bg+ of e^H (1 - f)
            self.bg_zero_exp = RunningSum(context.background_exp_total)
        else:
            self.shift = ShiftWalk(context)
            self.alpha = FlatAlphaWalk(context.b, alpha_max) if flat else SortedBreakpoints()

    def add(self, targets: np.ndarray, values: np.ndarray) -> bool:
        """
        add the kernel values of one confidence level; False if no evidence changed
        """
        if self.mode == EvidenceMode.Capped:
            np.add.at(self.raw, targets, values)
        else:
            np.maximum.at(self.raw, targets, values)
        idx = np.unique(targets)
        new_f = self.raw[idx]
        if self.mode == EvidenceMode.Capped:
            new_f = np.minimum(new_f, 1.0)
        old_f = self.f[idx]
        changed = new_f != old_f
        if not np.any(changed):
            return False
        idx, new_f, old_f = idx[changed], new_f[changed], old_f[changed]
        self.f[idx] = new_f

        obj = self.context.is_object[idx]
        self._add_foreground(idx[obj], new_f[obj], old_f[obj])
        self._add_background(idx[~obj], new_f[~obj], old_f[~obj])
        return True

    def _add_foreground(self, idx: np.ndarray, new_f: np.ndarray, old_f: np.ndarray) -> None:
        if len(idx) == 0:
            return
        e = self.context.exp_neg_H[idx]
        was_zero = old_f == 0
        if np.any(was_zero):
            self.V.subtract(e[was_zero])
            self.n_fg_zero -= int(np.count_nonzero(was_zero))
        self.fg_weight.add(np.concatenate([e * new_f, -e * old_f]))
        self.fg_constant.add(np.concatenate([e * (1.0 - new_f), -(e * (1.0 - old_f))[~was_zero]]))

    def _add_background(self, idx: np.ndarray, new_f: np.ndarray, old_f: np.ndarray) -> None:
        if len(idx) == 0:
            return
        new = idx[old_f == 0]
        if self.loss == LossType.Smooth:
            e = self.context.exp_H[idx]
            was_zero = old_f == 0
            self.bg_zero_exp.subtract(e[was_zero])
            self.bg_weight.add(np.concatenate([e * new_f, -e * old_f]))
            self.bg_constant.add(np.concatenate([e * (1.0 - new_f), -(e * (1.0 - old_f))[~was_zero]]))
            return
        self.shift.remove(new)
        if self.flat:
            self.alpha.add(self.context.H[new])
        else:
            self.alpha.update(idx, self.context.H[idx], new_f)

    def step(self, theta: float) -> SweepStep:
        b = self.context.b
        V = max(self.V.value, 0.0) if self.n_fg_zero > 0 else 0.0
        if self.loss == LossType.Smooth:
            s, s_loss = minimize_smooth_shift(V, max(self.bg_zero_exp.value, 0.0), b, self.alpha_max)
            a, a_bound = minimize_smooth_alpha(self.fg_weight.value, self.fg_constant.value,
                                               self.bg_weight.value, self.bg_constant.value, b, self.alpha_max)
        else:
            s, s_loss = self.shift.minimize(V)
            if self.flat:
                a, a_bound = self.alpha.minimize(self.fg_weight.value)
            else:
                state = self.alpha.state(self.fg_weight.value, self.fg_constant.value)
                a, a_bound = minimize_alpha(state, b, self.alpha_max)
        return SweepStep(theta, a, s, s_loss, a_bound)

def sweep_thresholds(detections: Sequence[Sequence[ScoredLocation]], context: LossContext,
                     kernel: CorrelationKernel, mode: EvidenceMode | str = EvidenceMode.Capped,
                     alpha_max: float = 10.0, loss: LossType | str = LossType.Hinge,
                     trace: bool = False) -> SweepResult:
    """
    Exhaustive search over the thresholds of one candidate detector, over all the images of the context
    (detections[i] are the raw detections on image i).
    Thresholds are visited from +inf (nothing kept) down through every distinct confidence,
    adding one confidence level at a time to the evidence and to the partition.
    Returns the threshold with the lowest L^s + L^a bound; on ties the higher threshold is kept.
    The bounds are closed forms of running sums; the exact losses of the chosen member are left to the caller.
    """
    if not alpha_max > 0:
        raise ValueError(f'alpha_max must be positive, got {alpha_max}.')
    if len(detections) != len(context.index):
        raise ValueError(f'Got detections for {len(detections)} images, the context has {len(context.index)}.')
    mode = EvidenceMode(mode)
    loss = LossType.parse(loss)
    flat = kernel.is_flat and loss == LossType.Hinge

    cs, offsets, targets, values = _kernel_targets(detections, context, kernel)
    partition = IncrementalPartition(context, mode, loss, flat, alpha_max)

    best = last = partition.step(math.inf)
    steps = [best] if trace else []

    # distinct confidence levels, detections are already sorted by decreasing confidence
    level_starts = np.concatenate([[0], np.flatnonzero(np.diff(cs)) + 1]) if len(cs) > 0 else np.zeros(0, dtype = int)
    level_ends = np.append(level_starts[1:], len(cs))

    for start, end in zip(level_starts, level_ends):
        lo, hi = offsets[start], offsets[end]
        theta = float(cs[start])
        if partition.add(targets[lo:hi], values[lo:hi]):
            last = partition.step(theta)
        else:
            last = replace(last, theta = theta)
        if trace:
            steps.append(last)
        if last.bound < best.bound:
            best = last

    return SweepResult(best.theta, best.alpha, best.shift, best.shift_loss, best.alpha_bound,
                       len(level_starts), steps)

def sweep_image(detections: Sequence[ScoredLocation], H: ObjectnessField | np.ndarray, mask: TrainingMask,
                kernel: CorrelationKernel, mode: EvidenceMode | str = EvidenceMode.Capped,
                alpha_max: float = 10.0, loss: LossType | str = LossType.Hinge) -> SweepResult:
    """
    threshold search on a single image with its own background discount
    """
    return sweep_thresholds([detections], LossContext.single(H, mask), kernel, mode, alpha_max, loss)
