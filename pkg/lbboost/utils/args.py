import json
import argparse
import os
from typing import Optional, Sequence

from .errors import OptionsError
from .parse import substitute_values, resolve_tags

COMMANDS = ('synth', 'train', 'detect', 'eval', 'roc', 'compare')
BLOCKS   = ('train_options', 'extraction_options', 'eval_options', 'synth_options', 'compare_options', 'io_options')

# command line flag -> (options block, option name)
FLAG_TARGETS = {
    'iterations':    ('train_options', 'iterations'),
    'candidates':    ('train_options', 'candidates'),
    'grammar':       ('train_options', 'grammar'),
    'kernel':        ('train_options', 'kernel'),
    'kernel_radius': ('train_options', 'kernel_radius'),
    'mode':          ('train_options', 'mode'),
    'rho':           ('train_options', 'rho'),
    'alpha_max':     ('train_options', 'alpha_max'),
    'b':             ('train_options', 'b'),
    'loss':          ('train_options', 'loss'),
    'method':        ('extraction_options', 'method'),
    'radius':        ('extraction_options', 'radius'),
    'threshold':     ('extraction_options', 'threshold'),
    'delta':         ('eval_options', 'delta'),
    'truncation':    ('eval_options', 'truncation'),
    'n_members':     ('eval_options', 'n_members'),
}

def get_options(argv: Optional[Sequence[str]] = None) -> dict:
    """
    get the options from the command line: the command, the JSON options file and the flag overrides
    """
    args = get_args(argv)
    check_args(args)
    options = parse_json_options(args.options)
    options = apply_flags(options, args)
    options['command'] = args.command
    return options

def get_json_data(file: str) -> dict:
    """
    parse a json file
    """
    try:
        with open(file, 'r') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise OptionsError(f'{file} is not valid JSON: {e.msg} (line {e.lineno}).')
    if not isinstance(data, dict):
        raise OptionsError(f'{file} must contain a JSON object.')
    return data

def parse_json_options(file: str) -> dict:
    """
    parse options from a json file, substituting the {tags} everywhere
    """
    data = get_json_data(file)
    tags = resolve_tags(data.get('tags', {}))

    options = {}
    for block in BLOCKS:
        value = data.get(block, {})
        if not isinstance(value, dict):
            raise OptionsError(f'{block} must be a JSON object.')
        options[block] = substitute_values(value, tags)
    options['tags'] = tags
    return options

def apply_flags(options: dict, args: argparse.Namespace) -> dict:
    """
    command line flags override the JSON values
    """
    for flag, (block, key) in FLAG_TARGETS.items():
        value = getattr(args, flag, None)
        if value is not None:
            options[block][key] = value
    # the seed drives both the features and the synthetic data
    if args.seed is not None:
        options['train_options']['seed'] = args.seed
        options['synth_options']['seed'] = args.seed
    return options

def get_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    parse arguments from the command line:
    - command: one of synth, train, detect, eval, roc, compare
    - options: a json file with the options
    - optional flags overriding single options
    """
    parser = argparse.ArgumentParser(description = 'Location based boosting of Hit-or-Shift object detectors.')
    parser.add_argument('command', choices = COMMANDS, help = 'What to run')
    parser.add_argument('-options', help = 'JSON file with the options', required = True)
    parser.add_argument('--iterations', type = int)
    parser.add_argument('--candidates', type = int)
    parser.add_argument('--grammar', choices = ['rich', 'haar'])
    parser.add_argument('--kernel', choices = ['FlatDisk', 'LinearFalloff', 'QuadraticFalloff'])
    parser.add_argument('--kernel-radius', dest = 'kernel_radius', type = float)
    parser.add_argument('--mode', choices = ['Capped', 'Unique'])
    parser.add_argument('--rho', type = float)
    parser.add_argument('--alpha-max', dest = 'alpha_max', type = float)
    parser.add_argument('--b', type = float)
    parser.add_argument('--loss', choices = ['hinge', 'smooth'])
    parser.add_argument('--seed', type = int)
    parser.add_argument('--method', choices = ['LLM', 'KDE'])
    parser.add_argument('--radius', type = float)
    parser.add_argument('--threshold', type = float)
    parser.add_argument('--delta', type = float)
    parser.add_argument('--truncation', type = float)
    parser.add_argument('--n-members', dest = 'n_members', type = int, help = 'detect with the first n members only')
    return parser.parse_args(argv)

def check_args(args: argparse.Namespace) -> None:
    """
    make sure that the json file exists
    """
    if not os.path.exists(args.options):
        raise OptionsError(f'{args.options} does not exist')
