import random

import pytest

from hypersack.corpus import shipped_corpus_dir
from hypersack.groups import FiniteGroup, parse_group

DATA = shipped_corpus_dir()

SPECS = {
    "Z": "Z",
    "F2": "F2",
    "Z2": "finite:z2.tbl",
    "Dinf": "(finite:z2.tbl) * (finite:z2.tbl)",
    "F2xZ": "(F2) x Z",
    "ZxZ": "(Z) x Z",
}


def group(name: str):
    return parse_group(SPECS.get(name, name), DATA)


@pytest.fixture
def F2():
    return group("F2")


@pytest.fixture
def Z():
    return group("Z")


@pytest.fixture
def Z2():
    return group("Z2")


@pytest.fixture
def Dinf():
    return group("Dinf")


@pytest.fixture
def F2xZ():
    return group("F2xZ")


@pytest.fixture
def ZxZ():
    return group("ZxZ")


@pytest.fixture
def Z3():
    return FiniteGroup.cyclic(3)


@pytest.fixture
def rng():
    return random.Random(12345)


def random_word(rng, spec, n):
    return tuple(rng.choice(spec.letters) for _ in range(n))
