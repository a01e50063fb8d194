from enum import Enum
from functools import cached_property
from typing import Iterable

import numpy as np

from ..utils.errors import ExtentError

Location = tuple[int, int] # (x, y)

class KernelShape(str, Enum):
    FlatDisk         = 'FlatDisk'
    LinearFalloff    = 'LinearFalloff'
    QuadraticFalloff = 'QuadraticFalloff'

class EvidenceMode(str, Enum):
    Capped = 'Capped'
    Unique = 'Unique'

class CorrelationKernel:
    """
    Compact support correlation between a predicted location v and a query location x.
    All shapes are 1 at zero distance and 0 from distance r onwards.
    """
    def __init__(self, shape: KernelShape | str = KernelShape.FlatDisk, radius: float = 3.0) -> None:
        self.shape = KernelShape(shape)
        if not radius > 0 or not np.isfinite(radius):
            raise ValueError(f'Kernel radius must be positive, got {radius}.')
        self.radius = float(radius)

    def __repr__(self) -> str:
        return f'CorrelationKernel({self.shape.value}, {self.radius:g})'

    def __eq__(self, other) -> bool:
        return isinstance(other, CorrelationKernel) and (self.shape, self.radius) == (other.shape, other.radius)

    def __hash__(self) -> int:
        return hash((self.shape, self.radius))

    @property
    def is_flat(self) -> bool:
        return self.shape == KernelShape.FlatDisk

    def profile(self, distance: np.ndarray | float) -> np.ndarray | float:
        """
        kernel value as a function of the Euclidean distance
        """
        u = np.asarray(distance, dtype = float) / self.radius
        if self.shape == KernelShape.FlatDisk:
            value = np.where(u < 1, 1.0, 0.0)
        elif self.shape == KernelShape.LinearFalloff:
            value = np.maximum(0.0, 1.0 - u)
        else:
            value = np.maximum(0.0, 1.0 - u**2)
        return value if value.ndim > 0 else float(value)

    def value(self, x: Location, v: Location) -> float:
        return kernel_value(self, x, v)

    @cached_property
    def offsets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        (dy, dx, value) for every integer offset with a positive kernel value
        """
        reach = int(np.ceil(self.radius))
        dy, dx = np.mgrid[-reach:reach + 1, -reach:reach + 1]
        values = self.profile(np.hypot(dy, dx))
        keep = values > 0
        return dy[keep], dx[keep], values[keep]

    def to_dict(self) -> dict:
        return {'shape': self.shape.value, 'radius': self.radius}

    @classmethod
    def from_dict(cls, spec: dict) -> 'CorrelationKernel':
        return cls(spec['shape'], float(spec['radius']))

def kernel_value(kernel: CorrelationKernel, x: Location, v: Location) -> float:
    distance = np.hypot(x[0] - v[0], x[1] - v[1])
    return float(kernel.profile(distance))

def evidence(x: Location, locations: Iterable[Location],
             kernel: CorrelationKernel, mode: EvidenceMode | str) -> float:
    """
    evidence f(x) given the (filtered) list of predicted locations:
    capped sum of the kernel values or the value from the closest detection
    """
    mode = EvidenceMode(mode)
    values = [kernel_value(kernel, x, v) for v in locations]
    if len(values) == 0:
        return 0.0
    if mode == EvidenceMode.Capped:
        return min(1.0, float(np.sum(values)))
    return float(max(values))

class EvidenceField:
    """
    Sparse evidence over an image: only the pixels with a positive value are stored.
    """
    def __init__(self, shape: tuple[int, int], ys: np.ndarray, xs: np.ndarray, values: np.ndarray) -> None:
        self.shape  = shape
        self.ys     = ys
        self.xs     = xs
        self.values = values

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, location: Location) -> float:
        x, y = location
        hit = np.flatnonzero((self.xs == x) & (self.ys == y))
        return float(self.values[hit[0]]) if len(hit) > 0 else 0.0

    def to_dict(self) -> dict[Location, float]:
        return {(int(x), int(y)): float(v) for x, y, v in zip(self.xs, self.ys, self.values)}

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        out[self.ys, self.xs] = self.values
        return out

def evidence_field(extent: tuple[int, int], locations: Iterable[Location],
                   kernel: CorrelationKernel, mode: EvidenceMode | str) -> EvidenceField:
    """
    Evidence of a list of locations over an image of extent (width, height).
    Each location only touches the pixels within the kernel support.
    """
    mode = EvidenceMode(mode)
    width, height = extent
    locations = np.asarray(list(locations), dtype = int).reshape(-1, 2)
    if len(locations) > 0:
        outside = (locations[:, 0] < 0) | (locations[:, 0] >= width) | (locations[:, 1] < 0) | (locations[:, 1] >= height)
        if outside.any():
            x, y = locations[np.argmax(outside)]
            raise ExtentError(f'Location ({x}, {y}) is outside the image extent {width}x{height}.')

    total = np.zeros((height, width))
    dy, dx, values = kernel.offsets
    for x, y in locations:
        py, px = y + dy, x + dx
        inside = (py >= 0) & (py < height) & (px >= 0) & (px < width)
        if mode == EvidenceMode.Capped:
            np.add.at(total, (py[inside], px[inside]), values[inside])
        else:
            np.maximum.at(total, (py[inside], px[inside]), values[inside])

    if mode == EvidenceMode.Capped:
        total = np.minimum(total, 1.0)
    ys, xs = np.nonzero(total > 0)
    return EvidenceField((height, width), ys, xs, total[ys, xs])
