import os

import numpy as np

from ..utils.errors import DatasetError

def _tokens(data: bytes, start: int, count: int) -> tuple[list[bytes], int]:
    """
    read `count` whitespace separated header tokens, skipping # comments; returns the tokens and the offset after them
    """
    tokens, i = [], start
    while len(tokens) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if i >= len(data):
            break
        if data[i:i + 1] == b'#':
            while i < len(data) and data[i:i + 1] not in (b'\n', b'\r'):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        tokens.append(data[i:j])
        i = j
    return tokens, i

def read_pgm(path: str) -> np.ndarray:
    """
    Binary (P5) portable graymap, 8 or 16 bit. Returns a (height, width) array.
    """
    with open(path, 'rb') as f:
        data = f.read()
    if data[:2] != b'P5':
        raise DatasetError(f'{path} is not a binary PGM file.')
    tokens, offset = _tokens(data, 2, 3)
    if len(tokens) < 3:
        raise DatasetError(f'{path}: truncated PGM header.')
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise DatasetError(f'{path}: malformed PGM header.')
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise DatasetError(f'{path}: invalid PGM size {width}x{height} or maxval {maxval}.')

    # a single whitespace byte separates the header from the raster
    offset += 1
    dtype = np.dtype('u1') if maxval < 256 else np.dtype('>u2')
    n_bytes = width * height * dtype.itemsize
    if len(data) - offset < n_bytes:
        raise DatasetError(f'{path}: truncated PGM raster.')
    raster = np.frombuffer(data, dtype = dtype, count = width * height, offset = offset)
    return raster.reshape(height, width).astype(np.uint8 if maxval < 256 else np.uint16)

def write_pgm(path: str, image: np.ndarray) -> None:
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f'Expected a 2D image, got shape {image.shape}.')
    if image.dtype == np.uint16 or image.max(initial = 0) > 255:
        maxval, raster = 65535, image.astype('>u2')
    else:
        maxval, raster = 255, image.astype(np.uint8)
    height, width = image.shape

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok = True)
    with open(path, 'wb') as f:
        f.write(f'P5\n{width} {height}\n{maxval}\n'.encode('ascii'))
        f.write(raster.tobytes())
