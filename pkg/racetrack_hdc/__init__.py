# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import logging
from pathlib import Path
from typing import Callable, List, Mapping, Optional, Sequence

from pluginbase import PluginBase  # type:ignore

from ._version import __version__
from .config import RunConfig
from .engine.pipeline import QueryResult, RacetrackEngine, TrainResult, check_query
from .evaluation import Evaluation, evaluate
from .hdc import reference
from .model import Model

logger = logging.getLogger(__name__)


class CommandRun(object):
    """State of one command, handed to every plugin before and after the work"""
    command: str
    config: RunConfig
    out: Optional[str]
    engine: Optional[RacetrackEngine]
    training: Optional[TrainResult]
    queries: List[QueryResult]
    evaluation: Optional[Evaluation]

    def __init__(self, command: str, config: RunConfig, out: Optional[str] = None):
        self.command = command
        self.config = config
        self.out = out
        self.engine = None
        self.training = None
        self.queries = []
        self.evaluation = None


def run(state: CommandRun, work: Callable[[CommandRun], None], plugins: Sequence[str]) -> CommandRun:
    plugin_base = PluginBase(package='plugins')

    plugin_source = plugin_base.make_plugin_source(
        searchpath=[str(Path(__file__).parent / 'plugins')])

    for plugin_name in plugins:
        p = plugin_source.load_plugin(plugin_name)
        logger.info(f"executing plugin before: {plugin_name}")
        state = p.run_before(state)

    work(state)

    for plugin_name in plugins:
        p = plugin_source.load_plugin(plugin_name)
        logger.info(f"executing plugin after: {plugin_name}")
        state = p.run_after(state)

    return state


def train(config: RunConfig, corpus: Mapping[str, str], plugins: Sequence[str] = (),
          out: Optional[str] = None) -> CommandRun:
    """Trains one class vector per label on the device"""
    def work(state: CommandRun):
        state.engine = RacetrackEngine.for_corpus(config, corpus)
        state.training = state.engine.train(corpus)

    return run(CommandRun('train', config, out), work, plugins)


def _model_engine(config: RunConfig, model: Model) -> RacetrackEngine:
    model.check(config)
    engine = RacetrackEngine(config, model.placement, model.im)
    engine.load_classes(model.am)
    return engine


def classify(config: RunConfig, model: Model, texts: Sequence[str], plugins: Sequence[str] = ()) -> CommandRun:
    """Classifies every text on the device, cross-checked against the reference pipeline"""
    def work(state: CommandRun):
        state.engine = _model_engine(config, model)
        for text in texts:
            result = state.engine.classify(text)
            check_query(result, reference.encode(text, state.engine.im, config.ngram), model.am)
            state.queries.append(result)

    return run(CommandRun('classify', config), work, plugins)


def evaluate_model(config: RunConfig, model: Model, test: Mapping[str, List[str]], limit: Optional[int] = None,
                   plugins: Sequence[str] = (), out: Optional[str] = None) -> CommandRun:
    def work(state: CommandRun):
        state.engine = _model_engine(config, model)
        state.evaluation = evaluate(state.engine, model.am, test, limit)

    return run(CommandRun('eval', config, out), work, plugins)
