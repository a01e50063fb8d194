from astropy.convolution import convolve, Box2DKernel, CustomKernel
import warnings
from functools import partial
import numpy as np

def box_smoothing(radius):
    """
    normalised (2 radius + 1) box filter, pixels outside the raster count as 0; radius 0 is the identity
    """

    def _box_smoothing(data, _radius):
        if _radius == 0:
            return np.array(data, dtype = float)
        kernel = Box2DKernel(2 * _radius + 1, mode = 'center')
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            return convolve(data, kernel, boundary = 'fill', fill_value = 0.0, normalize_kernel = False)

    if radius < 0:
        raise ValueError(f'Smoothing radius must be non-negative, got {radius}.')
    return partial(_box_smoothing, _radius = int(radius))

def epanechnikov_kernel(radius):
    """
    max(0, 1 - (d / radius)^2) on an odd square grid
    """
    reach = int(np.ceil(radius))
    dy, dx = np.mgrid[-reach:reach + 1, -reach:reach + 1]
    u2 = (dy**2 + dx**2) / radius**2
    return CustomKernel(np.maximum(0.0, 1.0 - u2))

def point_density(radius):
    """
    density of weighted points: D(x) = sum_i c_i K(|x - x_i| / radius), K the Epanechnikov profile
    """

    def _point_density(shape, ys, xs, weights, _radius):
        points = np.zeros(shape)
        np.add.at(points, (np.asarray(ys, dtype = int), np.asarray(xs, dtype = int)), np.asarray(weights, dtype = float))
        kernel = epanechnikov_kernel(_radius)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            return convolve(points, kernel, boundary = 'fill', fill_value = 0.0,
                            normalize_kernel = False, nan_treatment = 'fill')

    if not radius > 0:
        raise ValueError(f'KDE radius must be positive, got {radius}.')
    return partial(_point_density, _radius = float(radius))
