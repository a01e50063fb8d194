from enum import Enum
import math

import numpy as np

from .mask import TrainingMask
from ..hos.objectness import ObjectnessField
from ..utils.errors import ExtentError

class LossType(str, Enum):
    Hinge  = 'Hinge'
    Smooth = 'Smooth'

    @classmethod
    def parse(cls, value: 'LossType | str') -> 'LossType':
        if isinstance(value, LossType):
            return value
        return cls(str(value).capitalize())

def _values(H: ObjectnessField | np.ndarray, mask: TrainingMask) -> np.ndarray:
    values = H.values if isinstance(H, ObjectnessField) else np.asarray(H, dtype = float)
    if values.shape != mask.labels.shape:
        raise ExtentError(f'Field shape {values.shape} does not match the mask shape {mask.labels.shape}.')
    return values

def foreground_loss(H: ObjectnessField | np.ndarray, mask: TrainingMask) -> float:
    """
    sum over the object pixels of exp(-H)
    """
    values = _values(H, mask)
    return math.fsum(np.exp(-values[mask.object_pixels]))

def background_loss(H: ObjectnessField | np.ndarray, mask: TrainingMask, b: float | None = None) -> float:
    """
    b * sum over the background pixels of max(0, exp(H) - 1); don't care pixels are ignored
    """
    values = _values(H, mask)
    b = mask.b if b is None else b
    bg = values[mask.background_pixels]
    bg = bg[bg > 0]
    return b * math.fsum(np.expm1(bg))

def smooth_background_loss(H: ObjectnessField | np.ndarray, mask: TrainingMask, b: float | None = None) -> float:
    values = _values(H, mask)
    b = mask.b if b is None else b
    return b * math.fsum(np.exp(values[mask.background_pixels]))

def smooth_loss(H: ObjectnessField | np.ndarray, mask: TrainingMask, b: float | None = None) -> float:
    """
    loss with the max replaced by an exponential: cannot ignore the background, but it is easier to optimise
    """
    return foreground_loss(H, mask) + smooth_background_loss(H, mask, b)

def total_loss(H: ObjectnessField | np.ndarray, mask: TrainingMask,
               loss: LossType | str = LossType.Hinge, b: float | None = None) -> float:
    if LossType.parse(loss) == LossType.Smooth:
        return smooth_loss(H, mask, b)
    return foreground_loss(H, mask) + background_loss(H, mask, b)
