import numpy as np
import xarray as xr

class IOHandler:
    """
    Raster storage addressed by tags (e.g. image_id) substituted into a path template.
    """
    def get_data(self, **kwargs) -> xr.DataArray:
        """
        Get the raster identified by the tags in kwargs.
        """
        raise NotImplementedError

    def write_data(self, data: xr.DataArray | np.ndarray, **kwargs):
        """
        Write a raster to the location identified by the tags in kwargs.
        """
        raise NotImplementedError

    def check_data(self, **kwargs) -> bool:
        """
        Check if data is available for the given tags.
        """
        raise NotImplementedError

    @staticmethod
    def as_raster(values: np.ndarray, name: str = None) -> xr.DataArray:
        """
        wrap a (height, width) array in a (y, x) DataArray with pixel coordinates
        """
        height, width = values.shape
        return xr.DataArray(values, dims = ('y', 'x'),
                            coords = {'y': np.arange(height), 'x': np.arange(width)}, name = name)
