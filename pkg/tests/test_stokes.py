import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_gl_type
from wildcat.cartan import build_gl, negate
from wildcat.irregular import degree, irregular_type, scale_degrees, tame_type
from wildcat.stokes import (
    TAU,
    normalize_angle,
    rays_of_linear_type,
    singular_directions,
    stokes_budget,
)

GL2 = build_gl(2)
GL3 = build_gl(3)


def angles_of(report):
    return {round(d.angle, 9): d.support for d in report.directions}


def test_gl2_order_one_pole():
    rep = singular_directions(irregular_type(GL2, [[1, 0]]))
    assert angles_of(rep) == {
        round(math.pi, 9): frozenset({(1, -1)}),
        0.0: frozenset({(-1, 1)}),
    }
    assert rep.budget == 2
    assert rep.halo_punctures == 2


def test_gl2_order_two_pole_repeats_each_root_twice():
    rep = singular_directions(irregular_type(GL2, [[1, 0], [0, 0]]))
    got = angles_of(rep)
    assert got == {
        round(math.pi / 2, 9): frozenset({(1, -1)}),
        round(3 * math.pi / 2, 9): frozenset({(1, -1)}),
        0.0: frozenset({(-1, 1)}),
        round(math.pi, 9): frozenset({(-1, 1)}),
    }
    assert rep.support_count((1, -1)) == 2
    assert rep.budget == 4


def test_gl3_regular_real_coefficient_two_directions():
    rep = singular_directions(irregular_type(GL3, [[2, 1, 0]]))
    assert rep.halo_punctures == 2
    by_angle = angles_of(rep)
    positives = frozenset({(1, -1, 0), (1, 0, -1), (0, 1, -1)})
    assert by_angle[round(math.pi, 9)] == positives
    assert by_angle[0.0] == frozenset(negate(a) for a in positives)
    assert rep.stokes_dims == (3, 3)


def test_tame_type_has_no_directions():
    rep = singular_directions(tame_type(GL3))
    assert rep.directions == ()
    assert rep.budget == 0
    assert stokes_budget(tame_type(GL3)) == 0


def test_budget_examples():
    assert stokes_budget(irregular_type(GL3, [[1, 1, 0], [1, 0, 0]])) == 10
    assert stokes_budget(irregular_type(GL2, [[1, 0], [0, 0]])) == 4


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError, match="positive"):
        singular_directions(irregular_type(GL2, [[1, 0]]), tol=0.0)


def test_rays_gl2():
    rays = rays_of_linear_type((1, 0), GL2)
    assert [(round(a, 9), s) for a, s in rays] == [
        (0.0, frozenset({(1, -1)})),
        (round(math.pi, 9), frozenset({(-1, 1)})),
    ]


def test_rays_zero_vector_empty():
    assert rays_of_linear_type((0, 0), GL2) == []


def test_rays_gl3_six_distinct():
    rays = rays_of_linear_type((1, 1j, 0), GL3)
    assert len(rays) == 6
    assert all(len(s) == 1 for _, s in rays)
    got = sorted(round(a, 9) for a, _ in rays)
    expected = sorted(
        round(normalize_angle(a), 9)
        for a in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2, -math.pi / 4, 3 * math.pi / 4)
    )
    assert got == expected


def test_rays_match_linear_singular_directions():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(2, 5))
        datum = build_gl(n)
        a = np.round(rng.normal(0, 1.5, n)) + 1j * np.round(rng.normal(0, 1.5, n))
        rays = rays_of_linear_type(tuple(a), datum)
        rep = singular_directions(irregular_type(datum, [(-a).tolist()]))
        assert [(round(x, 9), s) for x, s in rays] == [
            (round(d.angle, 9), d.support) for d in rep.directions
        ]


@settings(deadline=None, max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_total_support_count_equals_budget(seed):
    rng = np.random.default_rng(seed)
    datum, q = random_gl_type(rng)
    rep = singular_directions(q)
    assert sum(rep.stokes_dims) == stokes_budget(q) == rep.budget
    for alpha in datum.roots:
        assert rep.support_count(alpha) == degree(q, alpha)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_pullback_multiplies_direction_counts(seed, k):
    rng = np.random.default_rng(seed)
    datum, q = random_gl_type(rng, max_n=4, max_r=3)
    rep = singular_directions(q)
    rep_k = singular_directions(scale_degrees(q, k))
    for alpha in datum.roots:
        assert rep_k.support_count(alpha) == k * rep.support_count(alpha)


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_negated_root_directions_shift_by_pi_over_k(seed):
    rng = np.random.default_rng(seed)
    datum, q = random_gl_type(rng)
    rep = singular_directions(q)
    placements: dict = {}
    for d in rep.directions:
        for w in d.witnesses:
            placements.setdefault(w.root, []).append(w.angle)
    for alpha, angles in placements.items():
        k = degree(q, alpha)
        shifted = sorted(normalize_angle(a + math.pi / k) for a in angles)
        neg = sorted(placements[negate(alpha)])
        assert all(
            abs(x - y) < 1e-9 or abs(abs(x - y) - TAU) < 1e-9 for x, y in zip(shifted, neg)
        )


def test_one_level_regular_matches_rays_after_pullback():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, 4))
        datum = build_gl(n)
        while True:
            a = np.round(rng.normal(0, 1.5, n)) + 1j * np.round(rng.normal(0, 1.5, n))
            if len({complex(x) for x in a}) == n:
                break
        coeffs = [a.tolist()] + [[0] * n] * (k - 1)
        rep = singular_directions(irregular_type(datum, coeffs))
        ray_sizes = sorted(len(s) for _, s in rays_of_linear_type(tuple(-a), datum))
        assert sorted(rep.stokes_dims) == sorted(ray_sizes * k)


def test_merge_is_transitive_within_tolerance():
    # three witnesses chained 0, 0.6*tol, 1.2*tol apart merge into one direction
    tol = 1e-6
    datum = build_gl(4)
    eps = 0.6 * tol
    a = [1.0, np.exp(1j * eps), np.exp(2j * eps), 0.0]
    # negate so the ray of each root lands at arg of the pairing value
    rep = singular_directions(irregular_type(datum, [(-np.array(a)).tolist()]), tol=tol)
    support_sizes = sorted(rep.stokes_dims)
    # pairings e1-e4, e2-e4, e3-e4 land at angles 0, eps, 2*eps: one merged direction
    merged = [d for d in rep.directions if (1, 0, 0, -1) in d.support]
    assert len(merged) == 1
    assert {(0, 1, 0, -1), (0, 0, 1, -1)} <= set(merged[0].support)


def test_merge_wraps_around_the_circle():
    tol = 1e-6
    datum = build_gl(3)
    a = [np.exp(1j * (TAU - 0.4 * tol)), np.exp(1j * (0.4 * tol)), 0.0]
    rep = singular_directions(irregular_type(datum, [(-np.array(a)).tolist()]), tol=tol)
    merged = [d for d in rep.directions if (1, 0, -1) in d.support and (0, 1, -1) in d.support]
    assert len(merged) == 1
    assert 0.0 <= merged[0].angle < TAU
