# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Racetrack HDC simulator

Usage:
    racetrack_hdc train <dataset> [options]
    racetrack_hdc classify <model> [<text>] [--file <path>] [options]
    racetrack_hdc eval <model> <dataset> [options]
    racetrack_hdc selftest [options]
    racetrack_hdc trace <trace> [options]
    racetrack_hdc synth <out_dir> [options]
    racetrack_hdc (-h | --help)
    racetrack_hdc --version

Options:
    --config=<path>         JSON run configuration
    --seed=<seed>           Item-memory seed (synth: corpus seed)
    --dim=<dim>             Hypervector dimension
    --ngram=<n>             N-gram length
    --pgs=<count>           Processing groups
    --mode=<mode>           Bundling mode: exact-sum, preset or majority
    --out=<path>            Model file written by train [default: model.rthd]
    --file=<path>           Classify the text of a file
    --json                  Machine-readable output
    --csv=<path>            Per-query rows of eval
    --limit=<n>             Test sentences per language in eval
    --quick                 Sub-second selftest subset
    --languages=<n>         Synthetic languages [default: 5]
    --train-len=<n>         Synthetic training symbols per language [default: 5000]
    --sentences=<n>         Synthetic test sentences per language [default: 100]
    --sentence-len=<n>      Symbols per synthetic sentence [default: 150]
    --disjoint              Synthetic languages with disjoint symbol sets
    --plugins=<plugs>       Plugins to execute
    --verbose               Log progress
    -h --help               Show this screen
"""

import json
import logging
import os
import sys
from typing import Optional

from docopt import docopt  # type:ignore
from schema import And, Or, Schema, SchemaError, Use  # type:ignore

from . import __version__, classify, evaluate_model, train
from .config import RunConfig, load_config
from .corpus import load_dataset, normalize, synth_corpus, write_dataset
from .cost import report
from .device.rtm import Device
from .errors import ConfigError, InputError, RacetrackError
from .json_serializer import ReportSerializer
from .model import Model, load_model, report_path, save_model
from .selftest import run_selftest
from .trace import load_trace, row_to_hex, run_trace

_optional_count = Or(None, And(Use(int), lambda v: v > 0))

docopt_schema = Schema({
    '--config': Or(None, Use(str)),
    '--seed': Or(None, And(Use(int), lambda v: 0 <= v < 2 ** 64)),
    '--dim': _optional_count,
    '--ngram': _optional_count,
    '--pgs': _optional_count,
    '--limit': _optional_count,
    '--languages': And(Use(int), lambda v: v > 0),
    '--train-len': And(Use(int), lambda v: v > 0),
    '--sentences': And(Use(int), lambda v: v > 0),
    '--sentence-len': And(Use(int), lambda v: v > 0),
    '--plugins': Or(None, Use(str)),
    object: object,
})


def resolve_config(arguments, model: Optional[Model] = None) -> RunConfig:
    """Configuration file (or defaults) overridden by the command-line flags

    Seed, dimension and n-gram length of a trained model take the place of
    the configured ones unless a flag sets them.
    """
    config = load_config(arguments['--config']) if arguments['--config'] else RunConfig()
    if model is not None:
        config = config.override(seed=model.seed, dim=model.am.dim, ngram=model.layout.get('ngram'))
    return config.override(seed=arguments['--seed'], dim=arguments['--dim'], ngram=arguments['--ngram'],
                           pgs=arguments['--pgs'], mode=arguments['--mode'])


def dataset_dirs(path: str):
    """``train`` and ``test`` subdirectories, or ``path`` itself as training directory"""
    train_dir = os.path.join(path, 'train')
    if not os.path.isdir(train_dir):
        return path, None
    test_dir = os.path.join(path, 'test')
    return train_dir, test_dir if os.path.isdir(test_dir) else None


def dump(doc, f=None):
    f = f or sys.stdout
    json.dump(doc, f, indent=2, sort_keys=True, cls=ReportSerializer)
    f.write('\n')


def cmd_train(arguments, plugins):
    config = resolve_config(arguments)
    train_dir, _ = dataset_dirs(arguments['<dataset>'])
    dataset = load_dataset(train_dir, ngram=config.ngram)
    out = arguments['--out']
    state = train(config, dataset.train, plugins, out)
    training = state.training
    save_model(out, training.am, state.engine.placement, config, state.engine.im)

    doc = {
        'config': config.echo(),
        'languages': {label: report(book, config.energy) for label, book in training.books.items()},
        'io': report(training.io, config.energy),
        'total': report(training.total(), config.energy),
    }
    with open(report_path(out), 'w') as f:
        dump(doc, f)

    if arguments['--json']:
        dump(doc)
    else:
        for label, r in doc['languages'].items():
            print(f'{label:<12}{len(dataset.train[label]):>10} symbols{r.cycles:>14.0f} cycles{r.total_nj:>14.2f} nJ')
        print(f'model written to {out}')


def cmd_classify(arguments, plugins):
    model = load_model(arguments['<model>'])
    config = resolve_config(arguments, model)
    if arguments['--file']:
        try:
            with open(arguments['--file'], encoding='utf-8') as f:
                raw = f.read()
        except (OSError, UnicodeDecodeError) as e:
            raise InputError(f"cannot read {arguments['--file']}: {e}") from None
        text = normalize(raw.rstrip('\n').replace('\n', ' '))
    else:
        text = normalize(arguments['<text>'] or '')
    state = classify(config, model, [text], plugins)
    result = state.queries[0]
    if arguments['--json']:
        r = report(result.book, config.energy)
        dump({'label': result.label, 'distances': result.distances, 'cycles': r.cycles,
              'encoder_nj': r.encoder_nj, 'simcheck_nj': r.simcheck_nj, 'total_nj': r.total_nj,
              'report': r, 'config': config.echo()})
    else:
        print(result.label)


def cmd_eval(arguments, plugins):
    model = load_model(arguments['<model>'])
    config = resolve_config(arguments, model)
    train_dir, test_dir = dataset_dirs(arguments['<dataset>'])
    if test_dir is None:
        raise InputError(f"no test directory in {arguments['<dataset>']}")
    dataset = load_dataset(train_dir, test_dir, ngram=config.ngram)
    state = evaluate_model(config, model, dataset.test, arguments['--limit'], plugins)
    evaluation = state.evaluation
    if arguments['--csv']:
        evaluation.write_csv(arguments['--csv'])
    if arguments['--json']:
        dump({**evaluation.as_dict(), 'config': config.echo()})
    else:
        print(evaluation)


def cmd_selftest(arguments, plugins):
    resolve_config(arguments)
    total = 0
    for suite in run_selftest(quick=arguments['--quick']):
        print(f'{suite.name:<20}{suite.cases:>8} cases{suite.seconds:>8.2f} s  ok')
        total += suite.cases
    print(f'selftest passed, {total} cases')


def cmd_trace(arguments, plugins):
    config = resolve_config(arguments)
    device = Device(config.geometry)
    results = run_trace(load_trace(arguments['<trace>'], config.geometry), device)
    r = report(device.ledger(), config.energy)
    if arguments['--json']:
        dump({'results': [{'line': res.op.line, 'op': res.op.kind, 'address': str(res.op.address),
                           'row': row_to_hex(res.row)} for res in results],
              'report': r, 'config': config.echo()})
    else:
        for res in results:
            print(f'{res.op.line:>4} {res.op.kind:<6}{str(res.op.address):<16}{row_to_hex(res.row)}')
        print(r)


def cmd_synth(arguments, plugins):
    config = resolve_config(arguments)
    dataset = synth_corpus(config.seed, arguments['--languages'], arguments['--train-len'],
                           arguments['--sentences'], arguments['--sentence-len'],
                           disjoint=arguments['--disjoint'], ngram=config.ngram)
    write_dataset(dataset, arguments['<out_dir>'])
    print(f'{len(dataset.labels)} languages written to {arguments["<out_dir>"]}')


COMMANDS = {
    'train': cmd_train,
    'classify': cmd_classify,
    'eval': cmd_eval,
    'selftest': cmd_selftest,
    'trace': cmd_trace,
    'synth': cmd_synth,
}


def main():
    arguments = docopt(__doc__, version=f"racetrack-hdc {__version__}")

    try:
        arguments = docopt_schema.validate(arguments)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(ConfigError.exit_code)

    logging.basicConfig(format="%(message)s", level=logging.INFO if arguments['--verbose'] else logging.WARNING)

    plugins = [] if arguments['--plugins'] is None else arguments['--plugins'].split(' ')
    command = next(name for name in COMMANDS if arguments[name])

    try:
        COMMANDS[command](arguments, plugins)
    except RacetrackError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(InputError.exit_code)
    except ImportError as e:
        print(f"error: cannot load plugin: {e}", file=sys.stderr)
        sys.exit(InputError.exit_code)


if __name__ == "__main__":
    main()
