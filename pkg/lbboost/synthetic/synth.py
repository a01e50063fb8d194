from dataclasses import dataclass, asdict
import math

import numpy as np

from ..io.dataset import Dataset, DatasetEntry, PARTITIONS
from ..utils.errors import DatasetError

@dataclass(frozen = True)
class SynthConfig:
    """
    Noisy background with bright disks at the object centres.
    Centres are at least 2 (max_radius + kernel_radius) apart.
    """
    n_train:        int   = 10
    n_validation:   int   = 5
    n_test:         int   = 10
    width:          int   = 64
    height:         int   = 64
    min_objects:    int   = 5
    max_objects:    int   = 5
    min_radius:     float = 2.0
    max_radius:     float = 3.0
    background:     float = 80.0
    object_offset:  float = 100.0
    noise:          float = 15.0
    kernel_radius:  float = 3.0
    max_attempts:   int   = 10000
    seed:           int   = 0

    def __post_init__(self):
        if min(self.n_train, self.n_validation, self.n_test) < 0:
            raise DatasetError('Image counts must be non-negative.')
        if self.width <= 0 or self.height <= 0:
            raise DatasetError(f'Invalid image extent {self.width}x{self.height}.')
        if not 0 <= self.min_objects <= self.max_objects:
            raise DatasetError(f'Invalid object count range [{self.min_objects}, {self.max_objects}].')
        if not 0 < self.min_radius <= self.max_radius:
            raise DatasetError(f'Invalid object radius range [{self.min_radius}, {self.max_radius}].')
        if self.noise < 0:
            raise DatasetError(f'Noise amplitude must be non-negative, got {self.noise}.')

    @property
    def separation(self) -> float:
        return 2 * (self.max_radius + self.kernel_radius)

    def counts(self) -> dict[str, int]:
        return dict(zip(PARTITIONS, (self.n_train, self.n_validation, self.n_test)))

    def to_dict(self) -> dict:
        return asdict(self)

def sample_centres(rng: np.random.Generator, n: int, config: SynthConfig) -> list[tuple[int, int]]:
    """
    rejection sampling of n centres, away from the border by max_radius and from each other by the separation
    """
    margin = int(math.ceil(config.max_radius))
    if n > 0 and (config.width <= 2 * margin or config.height <= 2 * margin):
        raise DatasetError(f'Objects of radius {config.max_radius} do not fit in {config.width}x{config.height}.')

    centres: list[tuple[int, int]] = []
    for _ in range(config.max_attempts):
        if len(centres) == n:
            break
        x = int(rng.integers(margin, config.width - margin))
        y = int(rng.integers(margin, config.height - margin))
        if all(math.hypot(x - cx, y - cy) >= config.separation for cx, cy in centres):
            centres.append((x, y))
    if len(centres) < n:
        raise DatasetError(f'Could not place {n} objects {config.separation:g} pixels apart in '
                           f'{config.width}x{config.height} after {config.max_attempts} attempts.')
    return centres

def render_image(rng: np.random.Generator, centres: list[tuple[int, int]], config: SynthConfig) -> np.ndarray:
    yy, xx = np.mgrid[0:config.height, 0:config.width]
    image = config.background + config.noise * rng.standard_normal((config.height, config.width))
    for x, y in centres:
        radius = rng.uniform(config.min_radius, config.max_radius)
        image[(xx - x)**2 + (yy - y)**2 <= radius**2] += config.object_offset
    return np.clip(np.rint(image), 0, 255).astype(np.uint8)

def synth(config: SynthConfig) -> Dataset:
    """
    Synthetic dataset; the same config (seed included) always gives the same images and labels.
    """
    rng = np.random.default_rng(config.seed)
    entries = []
    for partition, count in config.counts().items():
        for i in range(count):
            n = int(rng.integers(config.min_objects, config.max_objects + 1))
            centres = sample_centres(rng, n, config)
            image = render_image(rng, centres, config)
            entries.append(DatasetEntry(f'{partition}_{i:04d}', image, sorted(centres, key = lambda c: (c[1], c[0])), partition))
    return Dataset(entries)
