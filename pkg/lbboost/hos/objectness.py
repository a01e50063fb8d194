from typing import Iterable, Optional

import numpy as np
import xarray as xr

from .hypothesis import HosHypothesis, ScoredLocation
from .kernel import EvidenceField
from ..utils.errors import ExtentError
from ..utils.maxima import local_maxima

class ObjectnessField:
    """
    Master hypothesis H_t over one image: the sum of the f' values of the t members added so far.
    Values are kept in a (y, x) xarray.DataArray, so they can be written out as a raster.
    """
    def __init__(self, data: xr.DataArray, t: int = 0) -> None:
        if data.dims != ('y', 'x'):
            raise ValueError(f'Objectness data must have dims (y, x), got {data.dims}.')
        self.data = data
        self.t = t

    @classmethod
    def zeros(cls, width: int, height: int, name: Optional[str] = None) -> 'ObjectnessField':
        data = xr.DataArray(np.zeros((height, width)), dims = ('y', 'x'),
                            coords = {'y': np.arange(height), 'x': np.arange(width)},
                            name = name)
        return cls(data, 0)

    @property
    def values(self) -> np.ndarray:
        return self.data.values

    @property
    def extent(self) -> tuple[int, int]:
        height, width = self.data.shape
        return width, height

    def __getitem__(self, location: tuple[int, int]) -> float:
        x, y = location
        return float(self.data.values[y, x])

def accumulate(field: ObjectnessField, h: HosHypothesis, raw: Iterable[ScoredLocation],
               evidence: Optional[EvidenceField] = None) -> ObjectnessField:
    """
    H'(x) = H(x) + alpha * f(x) on the evidence support, H(x) - shift elsewhere
    """
    if evidence is not None and evidence.shape != field.values.shape:
        raise ExtentError(f'Evidence shape {evidence.shape} does not match the field shape {field.values.shape}.')
    for d in raw:
        if not (0 <= d.x < field.extent[0] and 0 <= d.y < field.extent[1]):
            raise ExtentError(f'Detection ({d.x}, {d.y}) is outside the field extent {field.extent}.')

    update = h.apply_field(raw, field.extent, evidence)
    new_data = field.data.copy(data = field.values + update)
    new_data.attrs['iteration'] = field.t + 1
    return ObjectnessField(new_data, field.t + 1)

def master_detections(field: ObjectnessField) -> list[ScoredLocation]:
    """
    positive local maxima of H, confidence-descending
    """
    ys, xs, values = local_maxima(field.values, positive_only = True)
    return [ScoredLocation(int(x), int(y), float(c)) for x, y, c in zip(xs, ys, values)]
