from dataclasses import dataclass, field
from typing import Iterable, Sequence
import math

import numpy as np

from ..hos.hypothesis import ScoredLocation, sort_detections
from ..hos.kernel import Location
from ..utils.errors import DatasetError

@dataclass
class MatchResult:
    """
    Verdict of the nearest neighbour metric on one image.
    is_tp[i] refers to the i-th detection in confidence order, found[j] to the j-th truth location.
    """
    detections: list[ScoredLocation]
    is_tp:      np.ndarray
    found:      np.ndarray
    delta:      float

    @property
    def n_tp(self) -> int:
        return int(np.count_nonzero(self.is_tp))

    @property
    def n_fp(self) -> int:
        return len(self.is_tp) - self.n_tp

def match(detections: Iterable[ScoredLocation], truth: Sequence[Location], delta: float = 10.0) -> MatchResult:
    """
    Greedy matching, most confident detection first: a detection closer than delta to an unmatched
    truth location claims the nearest one and is a true positive, anything else is a false positive.
    """
    detections = sort_detections(detections)
    truth = np.asarray(list(truth), dtype = float).reshape(-1, 2)
    found = np.zeros(len(truth), dtype = bool)
    is_tp = np.zeros(len(detections), dtype = bool)

    for i, d in enumerate(detections):
        if len(truth) == 0:
            break
        distance = np.hypot(truth[:, 0] - d.x, truth[:, 1] - d.y)
        distance[found] = np.inf
        nearest = int(np.argmin(distance))
        if distance[nearest] < delta:
            found[nearest] = True
            is_tp[i] = True

    return MatchResult(detections, is_tp, found, float(delta))

def _pooled_counts(detections: Sequence[Iterable[ScoredLocation]], truth: Sequence[Sequence[Location]],
                   delta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """
    Cumulative TP and FP counts when a global threshold is lowered through every distinct confidence.
    Returns (thresholds, tp, fp, number of objects).
    """
    if len(detections) != len(truth):
        raise DatasetError(f'Got detections for {len(detections)} images and labels for {len(truth)}.')
    n_objects = sum(len(t) for t in truth)
    if n_objects == 0:
        raise DatasetError('Cannot score detections without any ground truth object.')

    confidences, verdicts = [], []
    for dets, locs in zip(detections, truth):
        result = match(dets, locs, delta)
        confidences.extend(d.c for d in result.detections)
        verdicts.extend(result.is_tp)
    confidences = np.asarray(confidences, dtype = float)
    verdicts = np.asarray(verdicts, dtype = bool)

    order = np.argsort(-confidences, kind = 'stable')
    confidences, verdicts = confidences[order], verdicts[order]
    tp = np.cumsum(verdicts)
    fp = np.cumsum(~verdicts)
    # keep the last entry of each confidence level
    last = np.flatnonzero(np.append(np.diff(confidences) != 0, True)) if len(confidences) > 0 else np.zeros(0, dtype = int)
    return confidences[last], tp[last], fp[last], n_objects

@dataclass
class RocCurve:
    """
    Detection rate against false positives per object, truncated at `truncation`.
    points[0] is (0, 0) at threshold +inf.
    """
    thresholds: np.ndarray
    fpr:        np.ndarray
    detection_rate: np.ndarray
    truncation: float
    delta:      float
    area:       float = field(init = False)

    def __post_init__(self):
        self.area = self._area()

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.detection_rate.tolist()))

    def _area(self) -> float:
        x = np.append(self.fpr, self.truncation)
        y = np.append(self.detection_rate, self.detection_rate[-1])
        return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2)) / self.truncation

    def detection_rate_at(self, fpr: float) -> float:
        """
        best detection rate reached without exceeding the given false positive rate
        """
        ok = self.fpr <= fpr
        return float(self.detection_rate[ok].max()) if ok.any() else 0.0

def roc(detections: Sequence[Iterable[ScoredLocation]], truth: Sequence[Sequence[Location]],
        delta: float = 10.0, truncation: float = 2.0) -> RocCurve:
    """
    ROC curve pooled over images: a point per distinct confidence, points beyond the truncation dropped.
    """
    if not truncation > 0:
        raise ValueError(f'ROC truncation must be positive, got {truncation}.')
    thresholds, tp, fp, n_objects = _pooled_counts(detections, truth, delta)
    fpr = fp / n_objects
    rate = tp / n_objects
    keep = fpr <= truncation
    return RocCurve(np.concatenate([[math.inf], thresholds[keep]]),
                    np.concatenate([[0.0], fpr[keep]]),
                    np.concatenate([[0.0], rate[keep]]),
                    float(truncation), float(delta))

def average_precision(detections: Sequence[Iterable[ScoredLocation]], truth: Sequence[Sequence[Location]],
                      delta: float = 10.0) -> float:
    """
    sum over thresholds of (recall increase) x precision
    """
    _, tp, fp, n_objects = _pooled_counts(detections, truth, delta)
    if len(tp) == 0:
        return 0.0
    recall = tp / n_objects
    precision = tp / (tp + fp)
    return float(np.sum(np.diff(np.concatenate([[0.0], recall])) * precision))
