from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from toric_cap.boundary import in_spectrum
from toric_cap.capacities import (
    asymptotic_limit,
    c_k,
    c_k_concave,
    c_k_convex,
    c_k_general,
    capacity_sequence,
    inner_convex,
    outer_concave,
    verify_properties,
)
from toric_cap.domain import ToricProfile, classify, includes, make_ellipsoid, make_polydisk, scale
from toric_cap.errors import ContractError, InvalidParameterError

from generators import random_concave, random_convex, random_star
from oracles import ball_capacity, concave_formula_sampled, convex_formula_sampled


@pytest.mark.parametrize("k", range(1, 7))
def test_ball(triangle, k):
    assert c_k_general(triangle, k).value == ball_capacity(k)
    assert c_k_concave(triangle, k).value == ball_capacity(k)


def test_polydisk_sequence():
    om = make_polydisk(1, 2)
    got = [r.value for r in capacity_sequence(om, 5, "general")]
    assert got == [convex_formula_sampled(om.vertices, k) for k in range(1, 6)]
    assert got == [1, 2, 3, 4, 5]


def test_scaled_ball(triangle):
    assert c_k_general(scale(triangle, 3), 4).value == 3 * ball_capacity(4) == 6


@pytest.mark.parametrize(
    "omega, k, expected",
    [
        (make_ellipsoid(1, 2), 3, 2),
        (make_polydisk(1, 1), 4, 4),
        (make_polydisk(2, 1), 3, 3),
        (make_ellipsoid(1, 1), 2, 1),
    ],
)
def test_small_examples(omega, k, expected):
    assert c_k_general(omega, k).value == expected
    assert c_k(omega, k, "formula").value == expected


def test_lshape(lshape):
    assert [c_k_general(lshape, k).value for k in range(1, 9)] == list(range(2, 10))


def test_witness_is_spectral(lshape, golden_rectangle):
    for om in (lshape, golden_rectangle):
        for k in range(1, 5):
            r = c_k_general(om, k)
            assert r.witness is not None and r.witness.action == r.value
            assert r.witness_text()


@pytest.mark.parametrize(
    "omega, limit",
    [
        (make_ellipsoid(1, 1), F(1, 2)),
        (make_polydisk(1, 1), 1),
        (ToricProfile.from_points([(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]), 1),
    ],
)
def test_asymptotic_limit(omega, limit):
    assert asymptotic_limit(omega) == limit


def test_asymptotic_limit_off_diagonal():
    # the region bulges out at (3,2) while its diagonal exit is lower
    om = ToricProfile.from_points([(4, 0), (3, 2), (1, 1), (0, 3)])
    assert asymptotic_limit(om) == 2


def test_comparison_regions(lshape, golden_rectangle, triangle):
    for om in (lshape, golden_rectangle, triangle):
        inner, outer = inner_convex(om), outer_concave(om)
        assert includes(inner, om) and includes(om, outer)
        assert classify(inner).weakly_convex and classify(outer).concave
        a = asymptotic_limit(om)
        assert a - asymptotic_limit(inner) <= a / 64
        assert asymptotic_limit(outer) - a == F(1, 8)


def test_formula_class_contracts(lshape):
    with pytest.raises(ContractError):
        c_k_concave(make_polydisk(1, 1), 2)
    with pytest.raises(ContractError):
        c_k_convex(lshape, 2)
    with pytest.raises(ContractError):
        c_k(lshape, 2, "formula")
    with pytest.raises(InvalidParameterError):
        c_k_general(lshape, 0)
    with pytest.raises(InvalidParameterError):
        c_k(lshape, 1, "nope")


def test_random_concave_matches_sampled_formula(rng):
    for _ in range(4):
        om = random_concave(rng, max_edges=5)
        for k in range(1, 5):
            exact = c_k_concave(om, k).value
            assert exact == concave_formula_sampled(om.vertices, k)
            assert c_k_general(om, k).value == exact


def test_random_convex_matches_sampled_formula(rng):
    for _ in range(4):
        om = random_convex(rng, max_edges=5)
        for k in range(1, 5):
            exact = c_k_convex(om, k).value
            assert exact == convex_formula_sampled(om.vertices, k)
            assert c_k_general(om, k).value == exact


def test_verify_properties(lshape, golden_rectangle):
    report = verify_properties(golden_rectangle, make_polydisk(2, 2), 2, 4)
    assert report.passed
    assert set(report.checks) == {"inclusion", "scaling", "spectrality", "monotone_in_k"}
    report = verify_properties(lshape, lshape, F(3, 2), 4)
    assert report.passed and "inclusion" in report.checks


def test_verify_properties_reports_failures(lshape):
    def broken(om, k):
        r = c_k_general(om, k)
        return type(r)(k, r.value + F(1, 1000) * (k == 2), r.method)

    report = verify_properties(lshape, lshape, 2, 3, compute=broken)
    assert not report.passed
    assert {f["check"] for f in report.failures} >= {"spectrality"}


def test_thread_count_does_not_change_results(lshape, monkeypatch):
    serial = capacity_sequence(lshape, 6, "general", threads=1)
    parallel = capacity_sequence(lshape, 6, "general", threads=4)
    assert serial == parallel
    monkeypatch.setenv("TORIC_CAP_THREADS", "3")
    assert capacity_sequence(lshape, 6, "general") == serial
    monkeypatch.setenv("TORIC_CAP_THREADS", "many")
    with pytest.raises(InvalidParameterError):
        capacity_sequence(lshape, 2, "general")


# -- invariants ------------------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=10**6)
prop = settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@prop
@given(seeds, st.integers(min_value=1, max_value=4), st.sampled_from([F(1, 2), 2, F(5, 3)]))
def test_scaling_law(seed, k, c):
    om = random_star(random.Random(seed), max_vertices=6)
    assert c_k_general(scale(om, c), k).value == c * c_k_general(om, k).value


@prop
@given(seeds)
def test_spectral_and_monotone(seed):
    om = random_star(random.Random(seed), max_vertices=6)
    vals = [c_k_general(om, k).value for k in range(1, 6)]
    assert all(in_spectrum(om, v) for v in vals)
    assert vals == sorted(vals)


@prop
@given(seeds, st.integers(min_value=1, max_value=4))
def test_inclusion_monotone(seed, k):
    om = random_star(random.Random(seed), max_vertices=6)
    outer = outer_concave(om)
    inner = inner_convex(om)
    assert c_k_general(inner, k).value <= c_k_general(om, k).value <= c_k_general(outer, k).value
