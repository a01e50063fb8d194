from typing import Mapping, Optional, Sequence
import os

from ..evaluation.metrics import RocCurve
from ..hos.hypothesis import ScoredLocation
from ..utils.errors import DatasetError

def _makedirs_for(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok = True)

def write_detections(path: str, detections: Mapping[str, Sequence[ScoredLocation]]) -> None:
    """
    one `image_id x y confidence` line per detection, confidence-descending
    (ties by image in mapping order, then row, then column)
    """
    rows = []
    for order, (image_id, dets) in enumerate(detections.items()):
        rows.extend((-d.c, order, d.y, d.x, image_id) for d in dets)
    rows.sort(key = lambda r: r[:4])

    _makedirs_for(path)
    with open(path, 'w') as f:
        for neg_c, _, y, x, image_id in rows:
            f.write(f'{image_id} {int(x)} {int(y)} {-neg_c:.17g}\n')

def read_detections(path: str) -> dict[str, list[ScoredLocation]]:
    if not os.path.exists(path):
        raise DatasetError(f'Detection file {path} does not exist.')
    out: dict[str, list[ScoredLocation]] = {}
    with open(path, 'r') as f:
        for n, line in enumerate(f, start = 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise DatasetError(f'{path}, line {n}: expected "image_id x y confidence", got "{line}".')
            try:
                d = ScoredLocation(int(parts[1]), int(parts[2]), float(parts[3]))
            except ValueError:
                raise DatasetError(f'{path}, line {n}: malformed detection "{line}".')
            out.setdefault(parts[0], []).append(d)
    return out

def write_roc(path: str, curve: RocCurve, average_precision: Optional[float] = None) -> None:
    """
    header with delta and truncation, then whitespace separated `threshold fpr detection_rate` rows
    """
    _makedirs_for(path)
    with open(path, 'w') as f:
        f.write(f'# delta {curve.delta:g} truncation {curve.truncation:g}\n')
        f.write(f'# aroc {curve.area:.17g}\n')
        if average_precision is not None:
            f.write(f'# ap {average_precision:.17g}\n')
        f.write('# threshold fpr detection_rate\n')
        for theta, fpr, rate in zip(curve.thresholds, curve.fpr, curve.detection_rate):
            f.write(f'{theta:.17g} {fpr:.17g} {rate:.17g}\n')
