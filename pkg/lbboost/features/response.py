from typing import Optional

import numpy as np

from .descriptor import FeatureDescriptor, FeatureKind
from ..hos.hypothesis import ScoredLocation
from ..utils.errors import FeatureError
from ..utils.maxima import local_maxima

def integral_image(image: np.ndarray) -> np.ndarray:
    """
    Summed area table with a leading row and column of zeros: ii[y, x] = image[:y, :x].sum().
    Integer images are summed exactly in int64.
    """
    image = np.asarray(image)
    dtype = np.int64 if np.issubdtype(image.dtype, np.integer) or image.dtype == bool else np.float64
    ii = np.zeros((image.shape[0] + 1, image.shape[1] + 1), dtype = dtype)
    ii[1:, 1:] = image.astype(dtype).cumsum(axis = 0).cumsum(axis = 1)
    return ii

def rect_sum(ii: np.ndarray, x: int, y: int, width: int, height: int):
    """
    sum of the pixels in [x, x + width) x [y, y + height)
    """
    return ii[y + height, x + width] - ii[y, x + width] - ii[y + height, x] + ii[y, x]

def box_sums(ii: np.ndarray, width: int, height: int) -> np.ndarray:
    """
    sum of every width x height box, indexed by its top-left pixel
    """
    return ii[height:, width:] - ii[:-height, width:] - ii[height:, :-width] + ii[:-height, :-width]

def _window_response(descriptor: FeatureDescriptor, ii: np.ndarray) -> np.ndarray:
    """
    response for every window position, indexed by the window top-left pixel
    """
    height, width = ii.shape[0] - 1, ii.shape[1] - 1
    cw, ch = descriptor.cell_size
    ww, wh = descriptor.window
    ny, nx = height - wh + 1, width - ww + 1

    boxes = box_sums(ii, cw, ch)
    out = np.zeros((ny, nx), dtype = boxes.dtype)
    for (row, col), weight in np.ndenumerate(descriptor.weights):
        out += weight * boxes[row * ch:row * ch + ny, col * cw:col * cw + nx]
    if descriptor.kind in (FeatureKind.BoxSmooth, FeatureKind.GradientMagnitude):
        return out / (cw * ch)
    return out

def response_map(descriptor: FeatureDescriptor, image: np.ndarray, ii: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Feature response over the whole image, each window centred on its pixel.
    Pixels whose window does not fit in the image get the minimum of the response,
    so they never produce local maxima.
    """
    image = np.asarray(image)
    if image.ndim != 2 or image.size == 0:
        raise FeatureError(f'Expected a nonempty 2D image, got shape {image.shape}.')
    height, width = image.shape
    ww, wh = descriptor.window
    if ww > width or wh > height:
        raise FeatureError(f'Feature window {ww}x{wh} does not fit in an image of {width}x{height}.')
    if ii is None:
        ii = integral_image(image)

    inner = _window_response(descriptor, ii).astype(float)
    if descriptor.kind == FeatureKind.GradientMagnitude:
        if min(inner.shape) < 2:
            inner = np.zeros_like(inner)
        else:
            gy, gx = np.gradient(inner)
            inner = np.hypot(gx, gy)
    inner = descriptor.polarity * inner

    out = np.full((height, width), inner.min())
    y0, x0 = wh // 2, ww // 2
    out[y0:y0 + inner.shape[0], x0:x0 + inner.shape[1]] = inner
    return out

def to_detector(response: np.ndarray) -> list[ScoredLocation]:
    """
    local maxima of a response map, the response value being the confidence
    """
    ys, xs, values = local_maxima(response)
    return [ScoredLocation(int(x), int(y), float(c)) for x, y, c in zip(xs, ys, values)]

def feature_detections(descriptor: FeatureDescriptor, image: np.ndarray,
                       ii: Optional[np.ndarray] = None) -> list[ScoredLocation]:
    return to_detector(response_map(descriptor, image, ii))
