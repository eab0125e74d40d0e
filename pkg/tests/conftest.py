from __future__ import annotations

import random

import pytest

from kpa import KPAlgebra, fixture

NO_SOURCE_FIXTURES = ("laurent2", "loop1", "leavitt2", "vwcofinal", "twoblock", "redcycle2")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


@pytest.fixture
def leavitt() -> KPAlgebra:
    return KPAlgebra(fixture("leavitt2"), "int")


@pytest.fixture
def laurent() -> KPAlgebra:
    return KPAlgebra(fixture("laurent2"), "int")


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
