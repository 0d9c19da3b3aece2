from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from toric_cap.domain import ToricProfile, make_ellipsoid, make_polydisk


@pytest.fixture
def triangle():
    return make_ellipsoid(1, 1)


@pytest.fixture
def square():
    return make_polydisk(1, 1)


@pytest.fixture
def lshape():
    return ToricProfile.from_points([(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def golden_rectangle():
    return make_polydisk(1, F(13, 8))


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
