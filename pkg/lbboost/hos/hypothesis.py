from typing import Any, Iterable, NamedTuple, Optional
import numpy as np

from .kernel import CorrelationKernel, EvidenceMode, EvidenceField, Location, evidence, evidence_field

class ScoredLocation(NamedTuple):
    """
    A detection: pixel column x, pixel row y and a confidence c.
    """
    x: int
    y: int
    c: float

def sort_detections(detections: Iterable[ScoredLocation]) -> list[ScoredLocation]:
    """
    confidence-descending, ties in row-major order (y, then x)
    """
    return sorted(detections, key = lambda d: (-d.c, d.y, d.x))

def filter_at_threshold(detections: Iterable[ScoredLocation], theta: float) -> list[Location]:
    """
    locations of the detections with confidence >= theta
    """
    kept = [d for d in sort_detections(detections) if d.c >= theta]
    return [(d.x, d.y) for d in kept]

class HosHypothesis:
    """
    Hit-or-Shift weak hypothesis: a confidence-rated detector filtered at theta.
    It predicts alpha * f(x) where the evidence f of the filtered detections is positive
    and -shift everywhere else.
    """
    def __init__(self, feature: Any,
                 theta: float, alpha: float, shift: float,
                 kernel: CorrelationKernel,
                 mode: EvidenceMode | str = EvidenceMode.Capped) -> None:
        if alpha < 0 or shift < 0:
            raise ValueError(f'alpha and shift must be non-negative, got alpha={alpha}, shift={shift}.')
        self.feature = feature
        self.theta   = float(theta)
        self.alpha   = float(alpha)
        self.shift   = float(shift)
        self.kernel  = kernel
        self.mode    = EvidenceMode(mode)

    def __repr__(self) -> str:
        return (f'HosHypothesis({self.feature}, theta={self.theta:.6g}, alpha={self.alpha:.6g}, '
                f'shift={self.shift:.6g}, {self.kernel}, {self.mode.value})')

    def __eq__(self, other) -> bool:
        if not isinstance(other, HosHypothesis):
            return False
        return (self.feature, self.theta, self.alpha, self.shift, self.kernel, self.mode) == \
               (other.feature, other.theta, other.alpha, other.shift, other.kernel, other.mode)

    def evidence_field(self, raw: Iterable[ScoredLocation], extent: tuple[int, int]) -> EvidenceField:
        locations = filter_at_threshold(raw, self.theta)
        return evidence_field(extent, locations, self.kernel, self.mode)

    def apply_field(self, raw: Iterable[ScoredLocation], extent: tuple[int, int],
                    field: Optional[EvidenceField] = None) -> np.ndarray:
        """
        f'(x) over the whole image
        """
        if field is None:
            field = self.evidence_field(raw, extent)
        width, height = extent
        out = np.full((height, width), -self.shift)
        out[field.ys, field.xs] = self.alpha * field.values
        return out

def hos_apply(h: HosHypothesis, raw: Iterable[ScoredLocation], x: Location) -> float:
    f = evidence(x, filter_at_threshold(raw, h.theta), h.kernel, h.mode)
    if f > 0:
        return h.alpha * f
    # 0.0 rather than -0.0 for a degenerate shift
    return -h.shift if h.shift != 0 else 0.0
