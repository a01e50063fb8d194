from dataclasses import dataclass, asdict, fields
from typing import Optional, Sequence

import numpy as np

from .ensemble import Ensemble
from ..evaluation.metrics import average_precision
from ..features.descriptor import FeatureBounds, FeatureDescriptor, Grammar, sample_feature
from ..features.response import integral_image, feature_detections
from ..hos.hypothesis import HosHypothesis, ScoredLocation
from ..hos.kernel import CorrelationKernel, EvidenceMode, KernelShape, Location
from ..hos.objectness import ObjectnessField, accumulate
from ..io.dataset import Dataset
from ..optimisation.alpha import alpha_loss, smooth_alpha_loss
from ..optimisation.loss import LossType, foreground_loss, background_loss, smooth_background_loss
from ..optimisation.mask import TrainingMask, default_discount
from ..optimisation.partition import LossContext
from ..optimisation.shift import shift_loss, smooth_shift_loss
from ..optimisation.sweep import SweepResult, sweep_thresholds
from ..post_processing.extraction import ExtractionMethod, ExtractionParams, detect, parameter_grid
from ..utils.errors import DatasetError, FeatureError, OptionsError
from ..utils.log import setup_logging

# the best candidate must beat the current loss by this relative margin
_MIN_IMPROVEMENT = 1e-10

@dataclass(frozen = True)
class TrainConfig:
    iterations:    int   = 100
    candidates:    int   = 100
    grammar:       str   = 'rich'
    max_cell:      int   = 4
    max_scale:     int   = 3
    kernel:        str   = 'FlatDisk'
    kernel_radius: float = 3.0
    mode:          str   = 'Capped'
    rho:           float = 7.0
    alpha_max:     float = 10.0
    b:             Optional[float] = None
    loss:          str   = 'hinge'
    seed:          int   = 0

    def __post_init__(self):
        if self.iterations < 0 or self.candidates < 1:
            raise OptionsError(f'iterations must be >= 0 and candidates >= 1, got {self.iterations} and {self.candidates}.')
        if not self.alpha_max > 0:
            raise OptionsError(f'alpha_max must be positive, got {self.alpha_max}.')
        if self.rho < 0:
            raise OptionsError(f'rho must be non-negative, got {self.rho}.')
        if self.b is not None and not self.b > 0:
            raise OptionsError(f'b must be positive, got {self.b}.')
        try:
            Grammar.parse(self.grammar)
            KernelShape(self.kernel)
            EvidenceMode(self.mode)
            LossType.parse(self.loss)
        except ValueError as e:
            raise OptionsError(str(e))

    @classmethod
    def from_dict(cls, options: dict) -> 'TrainConfig':
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in options.items() if k in known})

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def kernel_spec(self) -> CorrelationKernel:
        return CorrelationKernel(self.kernel, self.kernel_radius)

    @property
    def bounds(self) -> FeatureBounds:
        return FeatureBounds(self.max_cell, self.max_scale)

@dataclass
class IterationRecord:
    """
    What happened in one training iteration: the chosen member, the sweep bound it was selected with,
    the exact loss the sweep predicts for it and the losses recomputed from the updated fields.
    """
    iteration:      int
    feature:        FeatureDescriptor
    theta:          float
    alpha:          float
    shift:          float
    bound:          float
    predicted:      float
    loss_fg:        float
    loss_bg:        float
    smooth_bg:      float
    total:          float

    def __str__(self) -> str:
        return (f'iteration {self.iteration}: {self.feature} theta={self.theta:.6g} alpha={self.alpha:.6g} '
                f'shift={self.shift:.6g} L_fg={self.loss_fg:.6g} L_bg={self.loss_bg:.6g} '
                f'(smooth bg {self.smooth_bg:.6g}) total={self.total:.6g}')

class LBBoost:
    """
    Location based boosting: at each iteration a batch of random features is drawn, each one is turned
    into a Hit-or-Shift hypothesis by the threshold sweep, and the one with the lowest loss bound
    is added to the master detector.
    """
    default_options = TrainConfig().to_dict()

    def __init__(self, train_options: Optional[dict] = None, log_file: Optional[str] = None) -> None:

        # set the logging
        self.log = setup_logging(log_file)

        self._check_options(train_options or {})
        self.records: list[IterationRecord] = []

    def _check_options(self, options: dict) -> None:
        these_options = self.default_options.copy()
        for k in these_options.keys():
            if k in options:
                these_options[k] = options[k]
            else:
                self.log.info(f'No option {k} specified, using default value: {these_options[k]}.')
        for k in options.keys():
            if k not in these_options:
                self.log.warning(f'Unknown option {k} ignored.')

        self.config = TrainConfig.from_dict(these_options)
        self.options = self.config.to_dict()
        self.kernel = self.config.kernel_spec
        self.mode = EvidenceMode(self.config.mode)
        self.loss = LossType.parse(self.config.loss)
        self.grammar = Grammar.parse(self.config.grammar)

    def make_masks(self, images: Sequence[np.ndarray], labels: Sequence[Sequence[Location]]) -> list[TrainingMask]:
        """
        one mask per image, all sharing the background discount of the whole set
        """
        masks = [TrainingMask(img.shape[1], img.shape[0], lab, self.config.rho, 1.0) for img, lab in zip(images, labels)]
        b = self.config.b
        if b is None:
            b = default_discount(sum(m.n_objects for m in masks), sum(m.n_background for m in masks))
        for mask in masks:
            mask.b = float(b)
        return masks

    def losses(self, fields_: Sequence[ObjectnessField], masks: Sequence[TrainingMask]) -> tuple[float, float, float]:
        """
        (L_fg, L_bg, smooth background term) summed over the training set
        """
        fg = sum(foreground_loss(H, m) for H, m in zip(fields_, masks))
        bg = sum(background_loss(H, m) for H, m in zip(fields_, masks))
        smooth_bg = sum(smooth_background_loss(H, m) for H, m in zip(fields_, masks))
        return fg, bg, smooth_bg

    def _objective(self, fg: float, bg: float, smooth_bg: float) -> float:
        return fg + (smooth_bg if self.loss == LossType.Smooth else bg)

    def candidate(self, draw: int) -> FeatureDescriptor:
        return sample_feature(self.config.seed, draw, self.grammar, self.config.bounds)

    def train(self, dataset: Dataset) -> Ensemble:
        images = [np.asarray(img) for img in dataset.images]
        labels = dataset.labels
        if len(images) == 0:
            raise DatasetError('The training set is empty.')
        if sum(len(lab) for lab in labels) == 0:
            raise DatasetError('The training set has no labelled object.')

        masks = self.make_masks(images, labels)
        b = masks[0].b
        fields_ = [ObjectnessField.zeros(img.shape[1], img.shape[0], name = 'objectness') for img in images]
        iis = [integral_image(img) for img in images]

        fg, bg, smooth_bg = self.losses(fields_, masks)
        current = self._objective(fg, bg, smooth_bg)
        options = dict(self.options, b = b)
        ensemble = Ensemble(options = options, initial_loss = current)
        self.records = []
        self.log.info(f'Training on {len(images)} images, {sum(m.n_objects for m in masks)} objects, '
                      f'b={b:.6g}, initial loss {current:.6g}.')

        for t in range(1, self.config.iterations + 1):
            context = LossContext(fields_, masks, b)
            best: Optional[tuple[FeatureDescriptor, list, SweepResult]] = None
            skipped = 0
            for k in range(self.config.candidates):
                feature = self.candidate((t - 1) * self.config.candidates + k)
                try:
                    detections = [feature_detections(feature, img, ii) for img, ii in zip(images, iis)]
                except FeatureError:
                    skipped += 1
                    continue
                result = sweep_thresholds(detections, context, self.kernel, self.mode,
                                          self.config.alpha_max, self.loss)
                if best is None or result.bound < best[2].bound:
                    best = (feature, detections, result)
            if skipped > 0:
                self.log.debug(f'iteration {t}: {skipped} candidates did not fit in the images.')

            if best is None or not best[2].bound < current * (1 - _MIN_IMPROVEMENT):
                self.log.info(f'iteration {t}: no candidate reduces the loss, stopping.')
                break

            feature, detections, result = best
            member = HosHypothesis(feature, result.theta, result.alpha, result.shift, self.kernel, self.mode)
            record, fields_ = self._add_member(t, member, detections, result, context, fields_, masks)
            ensemble.append(member, record.total)
            self.records.append(record)
            self.log.info(str(record))
            current = record.total

        return ensemble

    def _add_member(self, t: int, member: HosHypothesis, detections: list[list[ScoredLocation]],
                    result: SweepResult, context: LossContext,
                    fields_: list[ObjectnessField], masks: list[TrainingMask]) -> tuple[IterationRecord, list[ObjectnessField]]:
        evidence = [member.evidence_field(dets, H.extent) for dets, H in zip(detections, fields_)]
        partition = context.partition(context.flatten_evidence(evidence))
        if self.loss == LossType.Smooth:
            predicted = smooth_shift_loss(partition, member.shift) + smooth_alpha_loss(partition, member.alpha)
        else:
            predicted = shift_loss(partition, member.shift) + alpha_loss(partition, member.alpha)

        new_fields = [accumulate(H, member, dets, ev) for H, dets, ev in zip(fields_, detections, evidence)]
        fg, bg, smooth_bg = self.losses(new_fields, masks)
        record = IterationRecord(t, member.feature, member.theta, member.alpha, member.shift,
                                 result.bound, predicted, fg, bg, smooth_bg, self._objective(fg, bg, smooth_bg))
        return record, new_fields

    def validate(self, ensemble: Ensemble, dataset: Dataset,
                 grid: Sequence[ExtractionParams], delta: float = 10.0) -> ExtractionParams:
        """
        Pick the extraction parameters with the highest average precision on the validation set;
        ties go to the smallest radius, then to the first in the grid.
        """
        if len(dataset) == 0:
            raise DatasetError('The validation set is empty.')
        if len(grid) == 0:
            raise OptionsError('The extraction parameter grid is empty.')

        objectness = [ensemble.objectness(img) for img in dataset.images]
        best, best_ap = None, -np.inf
        for params in grid:
            detections = [detect(H, params) for H in objectness]
            ap = average_precision(detections, dataset.labels, delta)
            self.log.info(f'validation: {params.method.value} smoothing={params.smoothing_radius} '
                          f'kde={params.kde_radius:g} AP={ap:.6g}')
            if best is None or (ap, -params.radius) > (best_ap, -best.radius):
                best, best_ap = params, ap

        self.log.info(f'validation: chosen {best} with AP={best_ap:.6g}')
        ensemble.extraction = best
        return best

def train(dataset: Dataset, options: Optional[dict] = None) -> Ensemble:
    return LBBoost(options).train(dataset)

def validate(ensemble: Ensemble, dataset: Dataset, method: ExtractionMethod | str = ExtractionMethod.LLM,
             radii: Optional[Sequence[float]] = None, delta: float = 10.0) -> ExtractionParams:
    return LBBoost(ensemble.options).validate(ensemble, dataset, parameter_grid(method, radii), delta)
