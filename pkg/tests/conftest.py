from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ologdb import fixtures_api as fx


@pytest.fixture(scope="session")
def schema_a():
    return fx.schema_a()


@pytest.fixture(scope="session")
def schema_b():
    return fx.schema_b()


@pytest.fixture(scope="session")
def schema_c():
    return fx.schema_c()


@pytest.fixture(scope="session")
def schema_s():
    return fx.schema_s()


@pytest.fixture(scope="session")
def schema_a_core():
    return fx.schema_a_core()


@pytest.fixture()
def db_a():
    return fx.db_a()


@pytest.fixture()
def db_a_1970():
    return fx.db_a_with_1970()


@pytest.fixture()
def db_s():
    return fx.db_s()


@pytest.fixture()
def phi():
    return fx.phi()


@pytest.fixture()
def psi():
    return fx.psi()


@pytest.fixture()
def phi_core():
    return fx.phi_core()


@pytest.fixture()
def psi_core():
    return fx.psi_core()


@pytest.fixture(scope="session")
def silent_spec():
    return fx.silent_piece_spec()


@pytest.fixture(scope="session")
def asserted_pairs():
    return fx.asserted_order()


INSTRUCTION = (
    "For any number of performers in three parts (I, II, III) in which each "
    "part consists of the performance of a tacit of an agreed length of time"
)
T_1952 = (
    "The observation of a time frame in silence and without intentional "
    "musical actions on 29.08.1952"
)
T_1970 = (
    "The observation of a time frame in silence and without intentional "
    "musical actions on ?.?.1970"
)
ARENA_1952 = "The interior and immediate surrounds of Maverick Concert Hall"
SITE_1952 = "Maverick Concert Hall, Woodstock, NY, 29.08.1952"
AMBIENT_1952 = "{wind in trees, raindrops on roof}"
INCIDENTAL_1952 = "{talking, rustling paper, walking-out}"
PAIR_1952 = (
    "({wind in trees, raindrops on roof}, {talking, rustling paper, walking-out})"
)
SCORE = "4′33″"
