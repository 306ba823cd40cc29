# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Trained model files.

``<out>`` holds the associative memory container, ``<out>.im`` the item
memory the classes were trained with and ``<out>.layout.json`` the item-memory
placement and the settings the device needs to reproduce the class vectors.
"""

import json
import os
from typing import Any, Dict, Optional

from .config import RunConfig
from .engine.layout import ImPlacement
from .errors import ConfigError, InputError
from .hdc.container import load_item_memory, load_memory, save_item_memory, save_memory
from .hdc.reference import ALPHABET, PRNG_ALGORITHM, AssociativeMemory, ItemMemory


class Model(object):
    am: AssociativeMemory
    seed: int
    placement: ImPlacement
    layout: Dict[str, Any]
    im: Optional[ItemMemory]

    def __init__(self, am: AssociativeMemory, seed: int, placement: ImPlacement, layout: Dict[str, Any],
                 im: Optional[ItemMemory] = None):
        self.am = am
        self.seed = seed
        self.placement = placement
        self.layout = layout
        self.im = im

    def check(self, config: RunConfig):
        """The run configuration must describe the vectors stored in the model"""
        if self.am.dim != config.dim:
            raise ConfigError(f"model holds {self.am.dim}-bit vectors, configured dimension {config.dim}")
        if self.seed != config.seed:
            raise ConfigError(f"model trained with item-memory seed {self.seed}, configured {config.seed}")
        if self.layout.get('ngram', config.ngram) != config.ngram:
            raise ConfigError(f"model trained on {self.layout['ngram']}-grams, configured {config.ngram}")


def layout_path(path: str) -> str:
    return f'{path}.layout.json'


def report_path(path: str) -> str:
    return f'{path}.report.json'


def item_memory_path(path: str) -> str:
    return f'{path}.im'


def save_model(path: str, am: AssociativeMemory, placement: ImPlacement, config: RunConfig,
               im: Optional[ItemMemory] = None):
    """Writes the model files, the item memory only if given"""
    save_memory(path, am, config.seed)
    layout = {
        'placement': placement.to_dict(),
        'dim': config.dim,
        'ngram': config.ngram,
        'pgs': config.pgs,
        'mode': config.mode.value,
        'config_hash': config.hash,
        'prng': PRNG_ALGORITHM,
    }
    if im is not None:
        save_item_memory(item_memory_path(path), im)
    with open(layout_path(path), 'w') as f:
        json.dump(layout, f, indent=2, sort_keys=True)


def load_model(path: str) -> Model:
    am, seed = load_memory(path)
    try:
        with open(layout_path(path)) as f:
            layout = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read layout sidecar of {path}: {e}") from None
    except ValueError as e:
        raise InputError(f"layout sidecar of {path} is not valid JSON: {e}") from None
    if layout.get('prng') != PRNG_ALGORITHM:
        raise InputError(f"model item memory drawn with '{layout.get('prng')}', this build uses '{PRNG_ALGORITHM}'")
    placement = ImPlacement.from_dict(layout.get('placement', {}))
    if set(placement.slots) != set(ALPHABET):
        raise InputError(f"layout sidecar of {path} does not place every alphabet symbol")
    im = None
    if os.path.exists(item_memory_path(path)):
        im = load_item_memory(item_memory_path(path))
        if im.seed != seed or im.dim != am.dim:
            raise InputError(f"item memory of {path} does not belong to its classes")
    return Model(am, seed, placement, layout, im)
