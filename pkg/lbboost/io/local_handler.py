from typing import Optional
from datetime import datetime
from methodtools import lru_cache
import os
import rioxarray
import numpy as np
import xarray as xr

from .io_handler import IOHandler
from .pgm import read_pgm, write_pgm

from ..utils.errors import DatasetError
from ..utils.parse import substitute_string

class LocalIOHandler(IOHandler):
    """
    Rasters on the local file system. The file name can hold {tags} (e.g. {image_id})
    filled in from the keyword arguments of each call.
    """
    type = 'local'

    def __init__(self,
                 path: str,
                 file: str,
                 name: Optional[str] = None,
                 format: Optional[str] = None) -> None:

        self.dir  = path
        self.file = file
        self.path_pattern = os.path.join(self.dir, file)
        self.name = name if name is not None else os.path.basename(file).split('.')[0]
        self.format = format if format is not None else file.split('.')[-1]
        if self.format.lower() in ['tif', 'tiff', 'geotiff']:
            self.format = 'GeoTIFF'
        elif self.format.lower() in ['pgm', 'graymap']:
            self.format = 'PGM'
        elif self.format.lower() in ['txt', 'asc', 'ascii']:
            self.format = 'ASCII'
        else:
            raise DatasetError(f'Format {self.format} not supported.')

    @classmethod
    def from_file(cls, file_path: str, name: Optional[str] = None) -> 'LocalIOHandler':
        return cls(os.path.dirname(file_path), os.path.basename(file_path), name)

    def path(self, **kwargs) -> str:
        return substitute_string(self.path_pattern, kwargs)

    def check_data(self, **kwargs) -> bool:
        this_path = self.path(**kwargs)
        return os.path.exists(this_path)

    @lru_cache(maxsize = 256)
    def get_data(self, **kwargs) -> xr.DataArray:
        """
        the raster as a (y, x) DataArray
        """
        if not self.check_data(**kwargs):
            raise DatasetError(f'File {self.path(**kwargs)} does not exist.')

        this_path = self.path(**kwargs)
        if self.format == 'GeoTIFF':
            data = rioxarray.open_rasterio(this_path)
            if 'band' in data.dims:
                data = data.isel(band = 0, drop = True)
        elif self.format == 'PGM':
            data = self.as_raster(read_pgm(this_path), self.name)
        else:
            data = self.as_raster(np.loadtxt(this_path, ndmin = 2), self.name)

        return data

    def get_values(self, **kwargs) -> np.ndarray:
        return np.asarray(self.get_data(**kwargs).values)

    def write_data(self, data: xr.DataArray | np.ndarray, **kwargs):

        if isinstance(data, xr.DataArray):
            output = data
        else:
            output = self.as_raster(np.asarray(data), self.name)

        output_file = self.path(**kwargs)

        # create the directory if it does not exist
        directory = os.path.dirname(output_file)
        if directory:
            os.makedirs(directory, exist_ok = True)

        if self.format == 'PGM':
            write_pgm(output_file, np.asarray(output.values))
            return
        if self.format == 'ASCII':
            np.savetxt(output_file, np.asarray(output.values), fmt = '%.17g')
            return

        # add metadata
        metadata = {'name': self.name,
                    'time_produced': datetime.now().strftime('%Y-%m-%d %H:%M:%S')}
        metadata.update({k: str(v) for k, v in kwargs.items()})
        output = output.copy()
        output.attrs.update(metadata)

        output.name = self.name

        # save the data to a geotiff
        output.rio.to_raster(output_file, compress = 'lzw')
