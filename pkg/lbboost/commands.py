import os
import sys
from typing import Optional, Sequence

from .boosting import LBBoost, Comparison, DEFAULT_VARIANTS, Variant
from .evaluation import roc, average_precision
from .io import LocalIOHandler, load_dataset, save_dataset, save_model, load_model
from .io import write_detections, read_detections, write_roc
from .post_processing import ExtractionMethod, ExtractionParams, detect, parameter_grid
from .synthetic import SynthConfig, synth
from .utils.args import get_options
from .utils.errors import LBBoostError, OptionsError
from .utils.log import setup_logging

def _require(io_options: dict, key: str) -> str:
    if key not in io_options:
        raise OptionsError(f'io_options.{key} must be specified for this command.')
    return io_options[key]

def _extraction(options: dict, fallback: Optional[ExtractionParams] = None) -> ExtractionParams:
    """
    extraction parameters from the options, on top of the ones stored in the model
    """
    ext = options['extraction_options']
    base = fallback if fallback is not None else ExtractionParams()
    method = ExtractionMethod.parse(ext.get('method', base.method))
    spec = base.to_dict()
    spec['method'] = method.value
    if 'radius' in ext:
        spec['kde_radius' if method == ExtractionMethod.KDE else 'smoothing_radius'] = ext['radius']
    if 'threshold' in ext:
        spec['threshold'] = ext['threshold']
    return ExtractionParams.from_dict(spec)

def run_synth(options: dict) -> None:
    io_options = options['io_options']
    log = setup_logging(io_options.get('log'))
    try:
        config = SynthConfig(**options['synth_options'])
    except TypeError as e:
        raise OptionsError(f'Invalid synth_options: {e}.')
    dataset = synth(config)
    directory = _require(io_options, 'dataset_dir')
    manifest = save_dataset(dataset, directory, os.path.basename(io_options.get('manifest', 'manifest.txt')))
    log.info(f'Wrote {len(dataset)} images ({dataset.n_objects} objects) to {directory}, manifest {manifest}.')

def run_train(options: dict) -> None:
    io_options = options['io_options']
    manifest = _require(io_options, 'manifest')
    model_path = _require(io_options, 'model')

    booster = LBBoost(options['train_options'], io_options.get('log'))
    ensemble = booster.train(load_dataset(manifest, ['train']))

    validation = load_dataset(manifest, ['validation'])
    if len(validation) > 0 and validation.n_objects > 0:
        ext = options['extraction_options']
        method = ExtractionMethod.parse(ext.get('method', 'LLM'))
        grid = parameter_grid(method, ext.get('radii'))
        booster.validate(ensemble, validation, grid, options['eval_options'].get('delta', 10.0))
    else:
        booster.log.info('No labelled validation images, extraction parameters left at their defaults.')

    save_model(ensemble, model_path)
    booster.log.info(f'Model with {len(ensemble)} members written to {model_path}.')

def run_detect(options: dict) -> None:
    io_options = options['io_options']
    log = setup_logging(io_options.get('log'))
    ensemble = load_model(_require(io_options, 'model'))
    partition = options['eval_options'].get('partition', 'test')
    dataset = load_dataset(_require(io_options, 'manifest'), [partition])
    params = _extraction(options, ensemble.extraction)
    n_members = options['eval_options'].get('n_members')

    raster_out = None
    if 'objectness' in io_options:
        raster_out = LocalIOHandler.from_file(io_options['objectness'], name = 'objectness')

    detections = {}
    for entry in dataset:
        H = ensemble.objectness(entry.image, name = 'objectness', n_members = n_members)
        detections[entry.image_id] = detect(H, params)
        if raster_out is not None:
            raster_out.write_data(H.data, image_id = entry.image_id)

    write_detections(_require(io_options, 'detections'), detections)
    log.info(f'{sum(len(d) for d in detections.values())} detections on {len(dataset)} {partition} images '
             f'written to {io_options["detections"]}.')

def _score(options: dict):
    io_options = options['io_options']
    eval_options = options['eval_options']
    partition = eval_options.get('partition', 'test')
    dataset = load_dataset(_require(io_options, 'manifest'), [partition])
    found = read_detections(_require(io_options, 'detections'))
    detections = [found.get(image_id, []) for image_id in dataset.image_ids]
    delta = float(eval_options.get('delta', 10.0))
    truncation = float(eval_options.get('truncation', 2.0))
    curve = roc(detections, dataset.labels, delta, truncation)
    ap = average_precision(detections, dataset.labels, delta)
    return curve, ap

def run_eval(options: dict) -> None:
    log = setup_logging(options['io_options'].get('log'))
    curve, ap = _score(options)
    log.info(f'AROC (fpr <= {curve.truncation:g}, delta {curve.delta:g}) = {curve.area:.6g}, AP = {ap:.6g}, '
             f'detection rate at fpr 1 = {curve.detection_rate_at(1.0):.6g}')
    print(f'aroc {curve.area:.17g}')
    print(f'ap {ap:.17g}')

def run_roc(options: dict) -> None:
    log = setup_logging(options['io_options'].get('log'))
    curve, ap = _score(options)
    path = _require(options['io_options'], 'roc')
    write_roc(path, curve, ap)
    log.info(f'ROC curve with {len(curve.fpr)} points written to {path}, AROC = {curve.area:.6g}.')

def _variants(compare_options: dict) -> tuple:
    spec = compare_options.get('variants')
    if spec is None:
        return DEFAULT_VARIANTS
    if not isinstance(spec, dict) or len(spec) == 0:
        raise OptionsError('compare_options.variants must be a non-empty JSON object of name: options.')
    return tuple(Variant.from_dict(name, options) for name, options in spec.items())

def run_compare(options: dict) -> None:
    io_options = options['io_options']
    compare_options = options['compare_options']
    eval_options = options['eval_options']
    roc_dir = _require(io_options, 'roc_dir')
    dataset = load_dataset(_require(io_options, 'manifest'))

    ext = options['extraction_options']
    # the radii given in the options apply to their own method only
    radii = {ExtractionMethod.parse(ext.get('method', 'LLM')).value: ext['radii']} if 'radii' in ext else {}
    comparison = Comparison(options['train_options'], _variants(compare_options),
                            float(eval_options.get('delta', 10.0)), float(eval_options.get('truncation', 2.0)),
                            radii, io_options.get('log'))
    sizes = [int(k) for k in compare_options.get('members', [])]
    results = comparison.run(dataset, sizes, eval_options.get('partition', 'test'))

    for name, by_size in results.items():
        for k, result in by_size.items():
            suffix = '' if k is None else f'_{k}members'
            write_roc(os.path.join(roc_dir, f'roc_{name}{suffix}.txt'), result.curve, result.ap)
        full = by_size[None]
        print(f'aroc {name} {full.curve.area:.17g}')
        print(f'ap {name} {full.ap:.17g}')
    comparison.log.info(f'ROC curves of {len(results)} variants written to {roc_dir}.')

RUNNERS = {'synth': run_synth, 'train': run_train, 'detect': run_detect, 'eval': run_eval, 'roc': run_roc,
           'compare': run_compare}

def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        options = get_options(argv)
        RUNNERS[options['command']](options)
    except LBBoostError as e:
        print(f'error: {e}', file = sys.stderr)
        return 2
    return 0
