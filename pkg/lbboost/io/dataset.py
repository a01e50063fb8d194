from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence
import os

import numpy as np

from .local_handler import LocalIOHandler
from ..hos.kernel import Location
from ..utils.errors import DatasetError

PARTITIONS = ('train', 'validation', 'test')

@dataclass
class DatasetEntry:
    image_id:   str
    image:      np.ndarray
    labels:     list[Location]
    partition:  str = 'train'
    image_path: Optional[str] = None
    label_path: Optional[str] = None

    @property
    def extent(self) -> tuple[int, int]:
        height, width = self.image.shape
        return width, height

@dataclass
class Dataset:
    """
    Grayscale images with the object centres annotated on each, split in train/validation/test.
    """
    entries: list[DatasetEntry] = field(default_factory = list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def partition(self, name: str) -> 'Dataset':
        if name not in PARTITIONS:
            raise DatasetError(f'Unknown partition {name}, use one of {", ".join(PARTITIONS)}.')
        return Dataset([e for e in self.entries if e.partition == name])

    @property
    def images(self) -> list[np.ndarray]:
        return [e.image for e in self.entries]

    @property
    def labels(self) -> list[list[Location]]:
        return [e.labels for e in self.entries]

    @property
    def image_ids(self) -> list[str]:
        return [e.image_id for e in self.entries]

    @property
    def n_objects(self) -> int:
        return sum(len(e.labels) for e in self.entries)

def read_labels(path: str, extent: Optional[tuple[int, int]] = None) -> list[Location]:
    """
    one `x y` pair per line; blank lines and # comments are skipped
    """
    if not os.path.exists(path):
        raise DatasetError(f'Label file {path} does not exist.')
    labels = []
    with open(path, 'r') as f:
        for n, line in enumerate(f, start = 1):
            line = line.split('#')[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                x, y = (int(p) for p in parts)
            except ValueError:
                raise DatasetError(f'{path}, line {n}: expected two integers, got "{line}".')
            if extent is not None and not (0 <= x < extent[0] and 0 <= y < extent[1]):
                raise DatasetError(f'{path}, line {n}: label ({x}, {y}) is outside the image extent {extent[0]}x{extent[1]}.')
            labels.append((x, y))
    return labels

def write_labels(path: str, labels: Iterable[Location]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok = True)
    with open(path, 'w') as f:
        for x, y in labels:
            f.write(f'{int(x)} {int(y)}\n')

def read_manifest(path: str) -> list[tuple[str, str, str]]:
    """
    `image_path label_path partition` per line; relative paths are taken from the manifest directory
    """
    if not os.path.exists(path):
        raise DatasetError(f'Manifest {path} does not exist.')
    root = os.path.dirname(os.path.abspath(path))
    rows, seen = [], set()
    with open(path, 'r') as f:
        for n, line in enumerate(f, start = 1):
            line = line.split('#')[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DatasetError(f'{path}, line {n}: expected "image label partition", got "{line}".')
            image_path, label_path, partition = parts
            if partition not in PARTITIONS:
                raise DatasetError(f'{path}, line {n}: unknown partition {partition}.')
            image_path = os.path.normpath(os.path.join(root, image_path))
            label_path = os.path.normpath(os.path.join(root, label_path))
            if image_path in seen:
                raise DatasetError(f'{path}, line {n}: image {image_path} is listed twice.')
            seen.add(image_path)
            rows.append((image_path, label_path, partition))
    return rows

def load_dataset(manifest: str, partitions: Optional[Sequence[str]] = None) -> Dataset:
    entries = []
    for image_path, label_path, partition in read_manifest(manifest):
        if partitions is not None and partition not in partitions:
            continue
        handler = LocalIOHandler.from_file(image_path)
        image = handler.get_values()
        height, width = image.shape
        labels = read_labels(label_path, (width, height))
        image_id = os.path.splitext(os.path.basename(image_path))[0]
        entries.append(DatasetEntry(image_id, image, labels, partition, image_path, label_path))
    return Dataset(entries)

def save_dataset(dataset: Dataset, directory: str, manifest_name: str = 'manifest.txt') -> str:
    """
    Write images (PGM), label files and the manifest under directory; returns the manifest path.
    """
    os.makedirs(directory, exist_ok = True)
    lines = []
    for entry in dataset:
        image_file = os.path.join('images', f'{entry.image_id}.pgm')
        label_file = os.path.join('labels', f'{entry.image_id}.txt')
        LocalIOHandler.from_file(os.path.join(directory, image_file)).write_data(entry.image)
        write_labels(os.path.join(directory, label_file), entry.labels)
        lines.append(f'{image_file} {label_file} {entry.partition}\n')

    manifest = os.path.join(directory, manifest_name)
    with open(manifest, 'w') as f:
        f.writelines(lines)
    return manifest
