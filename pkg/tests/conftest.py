from __future__ import annotations

import pytest

from nilgo.htype import HTypeAlgebra, build_algebra
from nilgo.isometry import NormalizerData, build_normalizer

_ALG_CACHE: dict = {}
_ND_CACHE: dict = {}


def algebra(r: int, s: int, mult: int = 1) -> HTypeAlgebra:
    key = (r, s, mult)
    if key not in _ALG_CACHE:
        _ALG_CACHE[key] = build_algebra(r, s, mult)
    return _ALG_CACHE[key]


def normalizer(r: int, s: int, mult: int = 1) -> NormalizerData:
    key = (r, s, mult)
    if key not in _ND_CACHE:
        _ND_CACHE[key] = build_normalizer(algebra(r, s, mult))
    return _ND_CACHE[key]


@pytest.fixture(scope="session")
def n34():
    return algebra(3, 4)


@pytest.fixture(scope="session")
def nd34():
    return normalizer(3, 4)
