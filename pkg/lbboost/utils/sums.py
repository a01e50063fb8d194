import math
from typing import Iterable

import numpy as np

def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """
    cumulative sum with the rounding error of every partial sum carried forward (TwoSum)
    """
    x = np.asarray(values, dtype = float)
    s = np.cumsum(x)
    if len(x) < 2:
        return s
    prev = s[:-1]
    bp = s[1:] - prev
    err = (prev - (s[1:] - bp)) + (x[1:] - bp)
    return s + np.concatenate([[0.0], np.cumsum(err)])

def compensated_suffix_sum(values: np.ndarray) -> np.ndarray:
    """
    sums over i >= j for every j, with a trailing 0
    """
    x = np.asarray(values, dtype = float)
    return np.append(compensated_cumsum(x[::-1])[::-1], 0.0)

class RunningSum:
    """
    A float total kept as an unevaluated pair hi + lo, so that long sequences of additions and
    removals do not lose the small terms.
    """
    __slots__ = ('hi', 'lo')

    def __init__(self, value: float = 0.0) -> None:
        self.hi = float(value)
        self.lo = 0.0

    @classmethod
    def of(cls, values: Iterable[float]) -> 'RunningSum':
        total = cls()
        total.add(values)
        return total

    def add(self, values: Iterable[float] | float) -> None:
        if isinstance(values, np.ndarray):
            values = values.tolist()
        elif not isinstance(values, (list, tuple)):
            values = [values]
        if len(values) == 0:
            return
        terms = [self.hi, self.lo, *values]
        self.hi = math.fsum(terms)
        self.lo = math.fsum(terms + [-self.hi])

    def subtract(self, values: Iterable[float] | float) -> None:
        if isinstance(values, np.ndarray):
            self.add(-values)
        elif isinstance(values, (list, tuple)):
            self.add([-v for v in values])
        else:
            self.add(-values)

    @property
    def value(self) -> float:
        return self.hi + self.lo

    def __float__(self) -> float:
        return self.value
