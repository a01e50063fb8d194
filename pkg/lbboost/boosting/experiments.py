from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence
import json

from .ensemble import Ensemble
from .lbboost import LBBoost
from ..evaluation.metrics import RocCurve, roc, average_precision
from ..io.dataset import Dataset
from ..post_processing.extraction import ExtractionMethod, ExtractionParams, detect, parameter_grid
from ..utils.errors import DatasetError, OptionsError
from ..utils.log import setup_logging

@dataclass(frozen = True)
class Variant:
    """
    One arm of a comparison: train options applied on top of the shared ones,
    and the extraction method validated and scored for it.
    """
    name:          str
    train_options: dict = field(default_factory = dict)
    method:        ExtractionMethod = ExtractionMethod.LLM

    @classmethod
    def from_dict(cls, name: str, spec: Mapping) -> 'Variant':
        spec = dict(spec)
        try:
            method = ExtractionMethod.parse(spec.pop('method', 'LLM'))
        except ValueError as e:
            raise OptionsError(f'Variant {name}: {e}')
        return cls(name, spec, method)

# the loss, the feature family and the extraction method, each changed alone
DEFAULT_VARIANTS = (Variant('hinge', {'loss': 'hinge'}),
                    Variant('smooth', {'loss': 'smooth'}),
                    Variant('haar', {'grammar': 'haar'}),
                    Variant('kde', {'loss': 'hinge'}, ExtractionMethod.KDE))

@dataclass
class Score:
    curve: RocCurve
    ap:    float

def score(detections: Sequence[Sequence], dataset: Dataset, delta: float = 10.0, truncation: float = 2.0) -> Score:
    return Score(roc(detections, dataset.labels, delta, truncation),
                 average_precision(detections, dataset.labels, delta))

def score_by_members(ensemble: Ensemble, dataset: Dataset, sizes: Sequence[int],
                     params: Optional[ExtractionParams] = None,
                     delta: float = 10.0, truncation: float = 2.0) -> dict[int, Score]:
    """
    ROC and AP of the ensemble truncated to each of the given numbers of members
    """
    if params is None:
        params = ensemble.extraction if ensemble.extraction is not None else ExtractionParams()
    fields_ = [ensemble.objectness_by_size(image, sizes) for image in dataset.images]
    out = {}
    for k in sorted({int(k) for k in sizes}):
        detections = [detect(by_size[k], params) for by_size in fields_]
        out[k] = score(detections, dataset, delta, truncation)
    return out

class Comparison:
    """
    Train, validate and score several variants on the same dataset.
    Variants whose train options end up the same share one trained ensemble.
    """
    def __init__(self, train_options: Optional[dict] = None, variants: Sequence[Variant] = DEFAULT_VARIANTS,
                 delta: float = 10.0, truncation: float = 2.0, radii: Optional[Mapping[str, Sequence[float]]] = None,
                 log_file: Optional[str] = None) -> None:

        if len(variants) == 0:
            raise OptionsError('No variant to compare.')
        names = [v.name for v in variants]
        if len(set(names)) != len(names):
            raise OptionsError(f'Variant names must be unique, got {names}.')

        self.log = setup_logging(log_file)
        self.log_file = log_file
        self.train_options = dict(train_options or {})
        self.variants = list(variants)
        self.delta = delta
        self.truncation = truncation
        self.radii = dict(radii or {})
        self.ensembles: dict[str, Ensemble] = {}

    def options_for(self, variant: Variant) -> dict:
        return {**self.train_options, **variant.train_options}

    def train(self, dataset: Dataset) -> dict[str, Ensemble]:
        """
        one ensemble per variant, trained on the train partition
        """
        train_set = dataset.partition('train')
        trained: dict[str, Ensemble] = {}
        self.ensembles = {}
        for variant in self.variants:
            options = self.options_for(variant)
            key = json.dumps(options, sort_keys = True, default = str)
            if key not in trained:
                self.log.info(f'compare: training {variant.name} with {options}')
                trained[key] = LBBoost(options, self.log_file).train(train_set)
            self.ensembles[variant.name] = trained[key]
        return self.ensembles

    def extraction_for(self, variant: Variant, ensemble: Ensemble, validation: Dataset) -> ExtractionParams:
        grid = parameter_grid(variant.method, self.radii.get(variant.method.value))
        if len(validation) == 0 or validation.n_objects == 0:
            self.log.info(f'compare: no labelled validation images, {variant.name} uses {grid[0]}')
            return grid[0]
        booster = LBBoost(ensemble.options, self.log_file)
        return booster.validate(ensemble, validation, grid, self.delta)

    def run(self, dataset: Dataset, sizes: Sequence[int] = (),
            partition: str = 'test') -> dict[str, dict[Optional[int], Score]]:
        """
        Score every variant on the given partition, with its own validated extraction parameters.
        For each variant the full ensemble is under the key None, the truncated ones under their size
        (sizes larger than the ensemble are left out).
        """
        test = dataset.partition(partition)
        if len(test) == 0 or test.n_objects == 0:
            raise DatasetError(f'The {partition} partition has no labelled object to score against.')
        validation = dataset.partition('validation')
        if not self.ensembles:
            self.train(dataset)

        results = {}
        for variant in self.variants:
            ensemble = self.ensembles[variant.name]
            params = self.extraction_for(variant, ensemble, validation)
            wanted = [k for k in sizes if 0 <= k <= len(ensemble)]
            by_size = score_by_members(ensemble, test, [*wanted, len(ensemble)], params, self.delta, self.truncation)
            results[variant.name] = {None: by_size[len(ensemble)], **{k: by_size[k] for k in wanted}}
            full = results[variant.name][None]
            self.log.info(f'compare: {variant.name} ({len(ensemble)} members, {params.method.value}) '
                          f'AROC = {full.curve.area:.6g}, AP = {full.ap:.6g}')
        return results
