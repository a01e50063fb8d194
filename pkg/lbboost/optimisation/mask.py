from enum import IntEnum
from typing import Iterable, Optional

import numpy as np

from ..utils.errors import ExtentError

class PixelLabel(IntEnum):
    Background = 0
    Object     = 1
    DontCare   = 2

def default_discount(n_objects: int, n_background: int) -> float:
    """
    b = |obj| / |bg|, with empty counts replaced by 1 so that b stays positive
    """
    return max(n_objects, 1) / max(n_background, 1)

class TrainingMask:
    """
    Per-pixel labels of one training image.
    Object centres are Object pixels, the pixels closer than rho to a centre are DontCare,
    everything else is Background.
    """
    def __init__(self, width: int, height: int, objects: Iterable[tuple[int, int]],
                 rho: float = 7.0, b: Optional[float] = None) -> None:
        if rho < 0:
            raise ValueError(f'The don\'t care radius must be non-negative, got {rho}.')
        self.width  = int(width)
        self.height = int(height)
        self.rho    = float(rho)

        objects = np.asarray(list(objects), dtype = int).reshape(-1, 2)
        if len(objects) > 0:
            outside = (objects[:, 0] < 0) | (objects[:, 0] >= self.width) | (objects[:, 1] < 0) | (objects[:, 1] >= self.height)
            if outside.any():
                x, y = objects[np.argmax(outside)]
                raise ExtentError(f'Object centre ({x}, {y}) is outside the image extent {self.width}x{self.height}.')
        # the same centre labelled twice is one object pixel
        self.objects = np.unique(objects, axis = 0) if len(objects) > 0 else objects

        labels = np.full((self.height, self.width), PixelLabel.Background, dtype = np.int8)
        yy, xx = np.mgrid[0:self.height, 0:self.width]
        for x, y in self.objects:
            labels[(xx - x)**2 + (yy - y)**2 < self.rho**2] = PixelLabel.DontCare
        if len(self.objects) > 0:
            labels[self.objects[:, 1], self.objects[:, 0]] = PixelLabel.Object
        self.labels = labels

        if b is None:
            b = default_discount(self.n_objects, self.n_background)
        if not b > 0:
            raise ValueError(f'The background discount must be positive, got {b}.')
        self.b = float(b)

    @property
    def extent(self) -> tuple[int, int]:
        return self.width, self.height

    @property
    def object_pixels(self) -> np.ndarray:
        return self.labels == PixelLabel.Object

    @property
    def background_pixels(self) -> np.ndarray:
        return self.labels == PixelLabel.Background

    @property
    def n_objects(self) -> int:
        return int(np.count_nonzero(self.object_pixels))

    @property
    def n_background(self) -> int:
        return int(np.count_nonzero(self.background_pixels))
