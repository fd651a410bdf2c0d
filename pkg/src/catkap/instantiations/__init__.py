"""Concrete platform models and a registry used by the CLI and verifier."""

from __future__ import annotations

import json

from ..errors import InvalidParams
from .broken import BrokenModel, broken_model
from .conjugation import ConjugationParams, conjugation_category
from .dh import DhParams, dh_category
from .mpf import MpfParams, MpfPlatform, mpf_model

# name -> (params type, model builder, default desk parameters)
_REGISTRY = {
    "dh": (DhParams, lambda p: dh_category(p)),
    "kolee": (ConjugationParams, lambda p: conjugation_category(p)),
    "mpf": (MpfParams, lambda p: mpf_model(p).model),
    "broken": (DhParams, lambda p: broken_model(p)),
}

DEFAULT_PARAMS = {
    # 31-bit safe prime, g a primitive root, order is public
    "dh": {"p": 2147483579, "g": 2, "s": 2147483578},
    "kolee": {
        "q": 7,
        "d": 2,
        "a0": [[6, 6], [6, 3]],
        "b0": [[6, 6], [2, 0]],
        "g": [[[1, 2], [3, 4]], [[2, 1], [1, 1]]],
    },
    "mpf": {
        "p": 2147483579,
        "k": 3,
        "base": [[3, 5, 9], [2, 6, 11], [10, 4, 8]],
    },
    "broken": {"p": 23, "g": 5, "s": 22},
}


def instantiation_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def load_params(name: str, raw: dict):
    if name not in _REGISTRY:
        raise InvalidParams(f"unknown instantiation {name!r}")
    params_type, _ = _REGISTRY[name]
    return params_type.from_dict(raw)


# Models are immutable, so identical parameters may share one instance;
# this keeps validation and membership memos warm across sessions.
_MODEL_CACHE: dict[tuple[str, str], object] = {}
_MODEL_CACHE_CAP = 64


def build_model(name: str, raw: dict):
    if name not in _REGISTRY:
        raise InvalidParams(f"unknown instantiation {name!r}")
    key = (name, json.dumps(raw, sort_keys=True, default=str))
    model = _MODEL_CACHE.get(key)
    if model is None:
        params_type, builder = _REGISTRY[name]
        model = builder(params_type.from_dict(raw))
        if len(_MODEL_CACHE) < _MODEL_CACHE_CAP:
            _MODEL_CACHE[key] = model
    return model


def default_params(name: str) -> dict:
    if name not in DEFAULT_PARAMS:
        raise InvalidParams(f"unknown instantiation {name!r}")
    return dict(DEFAULT_PARAMS[name])


__all__ = [
    "DhParams",
    "dh_category",
    "ConjugationParams",
    "conjugation_category",
    "MpfParams",
    "MpfPlatform",
    "mpf_model",
    "BrokenModel",
    "broken_model",
    "instantiation_names",
    "load_params",
    "build_model",
    "default_params",
]
