"""
Plain text model files, one record per line:

    version 1
    option <name> <JSON value>
    initial <loss before the first member>
    extraction method=<LLM|KDE> smoothing_radius=<int> kde_radius=<float> threshold=<float>
    member kind=... cell_width=... (feature) theta=... alpha=... shift=... kernel=... kernel_radius=... mode=...
    loss <iteration> <loss after that iteration>

Floats are written with 17 significant digits, so a model reloads bit for bit.
"""
from typing import Optional
import json
import os

from ..boosting.ensemble import Ensemble
from ..features.descriptor import FeatureDescriptor
from ..hos.hypothesis import HosHypothesis
from ..hos.kernel import CorrelationKernel, EvidenceMode
from ..post_processing.extraction import ExtractionParams
from ..utils.errors import ModelFormatError, DatasetError

VERSION = 1

_FEATURE_KEYS = ('kind', 'cell_width', 'cell_height', 'orientation', 'scale', 'polarity', 'seed', 'draw')
_MEMBER_KEYS  = _FEATURE_KEYS + ('theta', 'alpha', 'shift', 'kernel', 'kernel_radius', 'mode')

def _float(value: float) -> str:
    return f'{float(value):.17g}'

def format_member(member: HosHypothesis) -> str:
    feature = member.feature.to_dict()
    fields = [f'{k}={feature[k]}' for k in _FEATURE_KEYS]
    fields += [f'theta={_float(member.theta)}', f'alpha={_float(member.alpha)}', f'shift={_float(member.shift)}',
               f'kernel={member.kernel.shape.value}', f'kernel_radius={_float(member.kernel.radius)}',
               f'mode={member.mode.value}']
    return 'member ' + ' '.join(fields)

def format_extraction(params: ExtractionParams) -> str:
    return (f'extraction method={params.method.value} smoothing_radius={params.smoothing_radius} '
            f'kde_radius={_float(params.kde_radius)} threshold={_float(params.threshold)}')

def _key_values(line_number: int, tokens: list[str], required: tuple[str, ...]) -> dict[str, str]:
    values = {}
    for token in tokens:
        if '=' not in token:
            raise ModelFormatError(line_number, f'expected key=value, got "{token}".')
        key, value = token.split('=', 1)
        values[key] = value
    missing = [k for k in required if k not in values]
    if missing:
        raise ModelFormatError(line_number, f'missing {", ".join(missing)}.')
    return values

def parse_member(line_number: int, tokens: list[str]) -> HosHypothesis:
    values = _key_values(line_number, tokens, _MEMBER_KEYS)
    try:
        feature = FeatureDescriptor.from_dict({k: values[k] for k in _FEATURE_KEYS})
        kernel = CorrelationKernel(values['kernel'], float(values['kernel_radius']))
        return HosHypothesis(feature, float(values['theta']), float(values['alpha']), float(values['shift']),
                             kernel, EvidenceMode(values['mode']))
    except ValueError as e:
        raise ModelFormatError(line_number, str(e))

def parse_extraction(line_number: int, tokens: list[str]) -> ExtractionParams:
    values = _key_values(line_number, tokens, ('method', 'smoothing_radius', 'kde_radius', 'threshold'))
    try:
        return ExtractionParams.from_dict(values)
    except ValueError as e:
        raise ModelFormatError(line_number, str(e))

def save_model(ensemble: Ensemble, path: str) -> None:
    lines = [f'version {VERSION}']
    for key in sorted(ensemble.options):
        lines.append(f'option {key} {json.dumps(ensemble.options[key], sort_keys = True)}')
    if ensemble.initial_loss is not None:
        lines.append(f'initial {_float(ensemble.initial_loss)}')
    if ensemble.extraction is not None:
        lines.append(format_extraction(ensemble.extraction))
    for i, (member, loss) in enumerate(zip(ensemble.members, ensemble.trace), start = 1):
        lines.append(format_member(member))
        lines.append(f'loss {i} {_float(loss)}')

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok = True)
    with open(path, 'w') as f:
        f.write('\n'.join(lines) + '\n')

def load_model(path: str) -> Ensemble:
    if not os.path.exists(path):
        raise DatasetError(f'Model file {path} does not exist.')
    with open(path, 'r') as f:
        lines = f.read().splitlines()

    ensemble = Ensemble()
    version: Optional[int] = None
    n = 0
    for n, line in enumerate(lines, start = 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        record, *tokens = line.split()
        if version is None and record != 'version':
            raise ModelFormatError(n, 'the first record must be the version.')

        if record == 'version':
            if len(tokens) != 1 or tokens[0] != str(VERSION):
                raise ModelFormatError(n, f'unsupported model version {" ".join(tokens)}.')
            version = VERSION
        elif record == 'option':
            if len(tokens) < 2:
                raise ModelFormatError(n, 'option needs a name and a value.')
            try:
                ensemble.options[tokens[0]] = json.loads(line.split(None, 2)[2])
            except json.JSONDecodeError as e:
                raise ModelFormatError(n, f'malformed option value: {e.msg}.')
        elif record == 'initial':
            try:
                ensemble.initial_loss = float(tokens[0])
            except (IndexError, ValueError):
                raise ModelFormatError(n, 'initial needs a number.')
        elif record == 'extraction':
            ensemble.extraction = parse_extraction(n, tokens)
        elif record == 'member':
            if len(ensemble.members) != len(ensemble.trace):
                raise ModelFormatError(n, 'member without the loss record of the previous one.')
            ensemble.members.append(parse_member(n, tokens))
        elif record == 'loss':
            if len(ensemble.trace) != len(ensemble.members) - 1:
                raise ModelFormatError(n, 'loss record without a member.')
            try:
                iteration, loss = int(tokens[0]), float(tokens[1])
            except (IndexError, ValueError):
                raise ModelFormatError(n, 'loss needs an iteration and a number.')
            if iteration != len(ensemble.members):
                raise ModelFormatError(n, f'expected iteration {len(ensemble.members)}, got {iteration}.')
            ensemble.trace.append(loss)
        else:
            raise ModelFormatError(n, f'unknown record "{record}".')

    if version is None:
        raise ModelFormatError(max(n, 1), 'empty model file.')
    if len(ensemble.trace) != len(ensemble.members):
        raise ModelFormatError(n, 'truncated model: the last member has no loss record.')
    return ensemble
