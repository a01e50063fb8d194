from .io_handler import IOHandler
from .local_handler import LocalIOHandler
from .pgm import read_pgm, write_pgm
from .dataset import Dataset, DatasetEntry, PARTITIONS, read_labels, write_labels, read_manifest, load_dataset, save_dataset
from .results import write_detections, read_detections, write_roc
from .model_file import save_model, load_model
