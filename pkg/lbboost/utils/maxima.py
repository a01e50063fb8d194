import numpy as np
from scipy import ndimage

# 8-neighbourhood, with and without the centre pixel
_EIGHT = np.ones((3, 3), dtype = bool)
_RING  = _EIGHT.copy()
_RING[1, 1] = False

def local_maxima(raster: np.ndarray, positive_only: bool = False) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Find the local maxima of a raster over the 8-neighbourhood.

    A pixel is a maximum if it is strictly greater than all its neighbours.
    Connected groups of equal pixels (plateaus) are a maximum if every pixel
    around the group is strictly lower: the group is then reported once,
    at its integer centroid (halves rounded towards the top-left), or at the
    member pixel closest to the centroid if the centroid falls outside the group.
    A plateau touching the image border is not reported, since it may continue outside the raster;
    a constant raster therefore has no maxima.

    Returns (ys, xs, values), sorted by value (descending), then row-major.
    """
    raster = np.asarray(raster, dtype = float)
    if raster.ndim != 2:
        raise ValueError(f'Expected a 2D raster, got shape {raster.shape}.')
    if raster.size < 2:
        return _empty()

    # NaNs never take part: they compare False with everything
    neigh_max = ndimage.maximum_filter(np.nan_to_num(raster, nan = -np.inf), footprint = _RING,
                                       mode = 'constant', cval = -np.inf)
    strict  = raster > neigh_max
    plateau = raster == neigh_max

    ys, xs = np.nonzero(strict)
    values = raster[ys, xs]

    if plateau.any():
        p_ys, p_xs, p_values = _plateau_maxima(raster, plateau)
        ys     = np.concatenate([ys, p_ys])
        xs     = np.concatenate([xs, p_xs])
        values = np.concatenate([values, p_values])

    if positive_only:
        keep = values > 0
        ys, xs, values = ys[keep], xs[keep], values[keep]

    order = np.lexsort((xs, ys, -values))
    return ys[order].astype(int), xs[order].astype(int), values[order]

def _plateau_maxima(raster: np.ndarray, plateau: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    labels, n_labels = ndimage.label(plateau, structure = _EIGHT)

    # a plateau pixel with an equal neighbour outside the plateau mask means the
    # component continues into pixels that have a higher neighbour: not a maximum
    height, width = raster.shape
    padded_values  = np.pad(raster, 1, mode = 'constant', constant_values = np.nan)
    padded_plateau = np.pad(plateau, 1, mode = 'constant', constant_values = False)
    leak = np.zeros_like(plateau)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            shifted_values  = padded_values[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
            shifted_plateau = padded_plateau[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
            leak |= plateau & (shifted_values == raster) & ~shifted_plateau

    rejected = set(np.unique(labels[leak]).tolist())
    border = np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])
    rejected.update(np.unique(border[border > 0]).tolist())

    ys, xs, values = [], [], []
    for label in range(1, n_labels + 1):
        if label in rejected:
            continue
        member_ys, member_xs = np.nonzero(labels == label)
        cy = int(np.ceil(member_ys.mean() - 0.5))
        cx = int(np.ceil(member_xs.mean() - 0.5))
        if labels[cy, cx] != label:
            # non-convex plateau, fall back to the closest member (first in row-major order on ties)
            closest = np.argmin((member_ys - member_ys.mean())**2 + (member_xs - member_xs.mean())**2)
            cy, cx = member_ys[closest], member_xs[closest]
        ys.append(cy)
        xs.append(cx)
        values.append(raster[cy, cx])

    return np.array(ys, dtype = int), np.array(xs, dtype = int), np.array(values, dtype = float)

def _empty() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.zeros(0, dtype = int), np.zeros(0, dtype = int), np.zeros(0, dtype = float)
