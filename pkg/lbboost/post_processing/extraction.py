from dataclasses import dataclass, asdict, replace
from enum import Enum
import math

import numpy as np

from .pp_functions import box_smoothing, point_density
from ..hos.hypothesis import ScoredLocation
from ..hos.objectness import ObjectnessField
from ..utils.maxima import local_maxima

class ExtractionMethod(str, Enum):
    LLM = 'LLM'
    KDE = 'KDE'

    @classmethod
    def parse(cls, value: 'ExtractionMethod | str') -> 'ExtractionMethod':
        if isinstance(value, ExtractionMethod):
            return value
        return cls(str(value).upper())

@dataclass(frozen = True)
class ExtractionParams:
    """
    How final detections are read off the master objectness field.
    The threshold is the operating point: ROC curves are obtained by sweeping it.
    """
    method:           ExtractionMethod = ExtractionMethod.LLM
    smoothing_radius: int   = 0
    kde_radius:       float = 5.0
    threshold:        float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'method', ExtractionMethod.parse(self.method))
        if self.smoothing_radius < 0 or self.kde_radius < 0:
            raise ValueError(f'Extraction radii must be non-negative: {self}.')
        if self.method == ExtractionMethod.KDE and not self.kde_radius > 0:
            raise ValueError('The KDE radius must be positive.')
        if not math.isfinite(self.threshold):
            raise ValueError(f'Extraction threshold must be finite, got {self.threshold}.')

    @property
    def radius(self) -> float:
        return self.kde_radius if self.method == ExtractionMethod.KDE else self.smoothing_radius

    def with_threshold(self, threshold: float) -> 'ExtractionParams':
        return replace(self, threshold = threshold)

    def to_dict(self) -> dict:
        out = asdict(self)
        out['method'] = self.method.value
        return out

    @classmethod
    def from_dict(cls, spec: dict) -> 'ExtractionParams':
        return cls(method = spec.get('method', 'LLM'),
                   smoothing_radius = int(spec.get('smoothing_radius', 0)),
                   kde_radius = float(spec.get('kde_radius', 5.0)),
                   threshold = float(spec.get('threshold', 0.0)))

def _values(field: ObjectnessField | np.ndarray) -> np.ndarray:
    return field.values if isinstance(field, ObjectnessField) else np.asarray(field, dtype = float)

def _to_locations(ys, xs, values, threshold) -> list[ScoredLocation]:
    return [ScoredLocation(int(x), int(y), float(c)) for x, y, c in zip(xs, ys, values) if c >= threshold]

def detect_llm(field: ObjectnessField | np.ndarray, smoothing_radius: int = 0,
               threshold: float = 0.0) -> list[ScoredLocation]:
    """
    Large local maxima: positive local maxima of the box-smoothed field with a value >= threshold.
    """
    smoothed = box_smoothing(smoothing_radius)(_values(field))
    ys, xs, values = local_maxima(smoothed, positive_only = True)
    return _to_locations(ys, xs, values, threshold)

def detect_kde(field: ObjectnessField | np.ndarray, kde_radius: float = 5.0,
               threshold: float = 0.0) -> list[ScoredLocation]:
    """
    Local maxima of a confidence-weighted density of the unsmoothed LLM detections.
    """
    values = _values(field)
    seeds = detect_llm(values, 0, 0.0)
    if len(seeds) == 0:
        return []
    xs, ys, cs = zip(*seeds)
    density = point_density(kde_radius)(values.shape, ys, xs, cs)
    ys, xs, d = local_maxima(density, positive_only = True)
    return _to_locations(ys, xs, d, threshold)

def detect(field: ObjectnessField | np.ndarray, params: ExtractionParams) -> list[ScoredLocation]:
    if params.method == ExtractionMethod.KDE:
        return detect_kde(field, params.kde_radius, params.threshold)
    return detect_llm(field, params.smoothing_radius, params.threshold)

def default_radii(method: ExtractionMethod | str) -> range:
    return range(0, 5) if ExtractionMethod.parse(method) == ExtractionMethod.LLM else range(2, 9)

def parameter_grid(method: ExtractionMethod | str, radii = None) -> list[ExtractionParams]:
    """
    one ExtractionParams per radius; threshold 0 keeps every positive maximum
    """
    method = ExtractionMethod.parse(method)
    if radii is None:
        radii = default_radii(method)
    if method == ExtractionMethod.KDE:
        return [ExtractionParams(method, kde_radius = float(r), threshold = 0.0) for r in radii]
    return [ExtractionParams(method, smoothing_radius = int(r), threshold = 0.0) for r in radii]
