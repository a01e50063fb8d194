from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from ..features.descriptor import FeatureDescriptor
from ..features.response import integral_image, feature_detections
from ..hos.hypothesis import HosHypothesis, ScoredLocation
from ..hos.objectness import ObjectnessField, accumulate
from ..post_processing.extraction import ExtractionParams, detect
from ..utils.errors import FeatureError, OptionsError

@dataclass
class Ensemble:
    """
    The master detector: the ordered HoS members, the loss after each iteration,
    the options it was trained with and, once validated, the extraction parameters.
    Everything needed to run it on a new image is in here.
    """
    members:      list[HosHypothesis] = field(default_factory = list)
    trace:        list[float] = field(default_factory = list)
    options:      dict = field(default_factory = dict)
    extraction:   Optional[ExtractionParams] = None
    initial_loss: Optional[float] = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[HosHypothesis]:
        return iter(self.members)

    def append(self, member: HosHypothesis, loss: float) -> None:
        self.members.append(member)
        self.trace.append(float(loss))

    def _n_members(self, n_members: Optional[int]) -> int:
        if n_members is None:
            return len(self.members)
        if not 0 <= n_members <= len(self.members):
            raise OptionsError(f'Asked for {n_members} members of an ensemble with {len(self.members)}.')
        return n_members

    def objectness(self, image: np.ndarray, name: Optional[str] = None,
                   n_members: Optional[int] = None) -> ObjectnessField:
        """
        master hypothesis H over an image, rebuilt from the members only
        (the first n_members of them, if given)
        """
        n_members = self._n_members(n_members)
        return self.objectness_by_size(image, [n_members], name)[n_members]

    def objectness_by_size(self, image: np.ndarray, sizes: Sequence[int],
                           name: Optional[str] = None) -> dict[int, ObjectnessField]:
        """
        H of the truncated ensembles with the given numbers of members, in a single pass over the members
        """
        sizes = sorted({self._n_members(k) for k in sizes})
        if len(sizes) == 0:
            return {}
        image = np.asarray(image)
        height, width = image.shape
        H = ObjectnessField.zeros(width, height, name)
        ii = integral_image(image)
        out = {}
        if sizes[0] == 0:
            out[0] = H
        for k, member in enumerate(self.members[:sizes[-1]], start = 1):
            raw = self.member_detections(member, image, ii)
            H = accumulate(H, member, raw)
            if k in sizes:
                out[k] = H
        return out

    @staticmethod
    def member_detections(member: HosHypothesis, image: np.ndarray,
                          ii: Optional[np.ndarray] = None) -> list[ScoredLocation]:
        if not isinstance(member.feature, FeatureDescriptor):
            raise FeatureError(f'Ensemble members need a FeatureDescriptor, got {type(member.feature).__name__}.')
        return feature_detections(member.feature, image, ii)

    def detect(self, image: np.ndarray, params: Optional[ExtractionParams] = None,
               n_members: Optional[int] = None) -> list[ScoredLocation]:
        if params is None:
            params = self.extraction if self.extraction is not None else ExtractionParams()
        return detect(self.objectness(image, n_members = n_members), params)
