import numpy as np
import pytest

from wildcat.matrix_real import (
    BlockStructure,
    FissionPoint,
    GStarPoint,
    MatrixError,
    act,
    big_cell_factor,
    covering_maps,
    moment_map,
    opp_intersection_local_dim,
    opp_intersection_test,
    sample_fission_point,
    sample_gstar_point,
    ul_factor,
    verify_suite,
)

TORUS2 = BlockStructure.from_sizes([1, 1])


def worked_point():
    return FissionPoint(
        structure=TORUS2,
        r=1,
        C=np.eye(2, dtype=complex),
        S=[
            np.array([[1, 1], [0, 1]], dtype=complex),
            np.array([[1, 0], [1, 1]], dtype=complex),
        ],
        h=np.diag([2.0 + 0j, 1.0 + 0j]),
    )


def test_moment_map_worked_example():
    mu_g, mu_h = moment_map(worked_point())
    assert np.allclose(mu_g, [[2, 2], [1, 2]])
    assert np.allclose(mu_h, np.diag([0.5, 1.0]))


def test_moment_map_identity_point():
    p = sample_fission_point(2, [[0], [1]], 1, seed=0)
    p.S = [np.eye(2, dtype=complex), np.eye(2, dtype=complex)]
    p.C = np.eye(2, dtype=complex)
    p.h = np.eye(2, dtype=complex)
    mu_g, mu_h = moment_map(p)
    assert np.allclose(mu_g, np.eye(2))
    assert np.allclose(mu_h, np.eye(2))


def test_det_identity():
    rng_seeds = range(5)
    for seed in rng_seeds:
        p = sample_fission_point(3, [[0, 1], [2]], 2, seed=seed)
        mu_g, _ = moment_map(p)
        assert abs(np.linalg.det(mu_g) - np.linalg.det(p.h)) < 1e-9


def test_identity_acts_trivially():
    p = sample_fission_point(2, [[0], [1]], 1, seed=7)
    q = act(np.eye(2), np.eye(2), p)
    assert np.allclose(q.C, p.C)
    assert np.allclose(q.h, p.h)
    for a, b in zip(q.S, p.S):
        assert np.allclose(a, b)


def test_action_composition_law():
    rng = np.random.default_rng(3)
    p = sample_fission_point(3, [[0, 1], [2]], 2, seed=11)
    g1 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g2 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    k = np.zeros((3, 3), dtype=complex)
    k[:2, :2] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k[2, 2] = 1.5 + 0.5j
    twice = act(g2, k, act(g1, k, p))
    once = act(g2 @ g1, k @ k, p)
    assert np.abs(twice.C - once.C).max() < 1e-9
    assert np.abs(twice.h - once.h).max() < 1e-9


def test_moment_equivariance():
    p = sample_fission_point(3, [[0, 1], [2]], 2, seed=5)
    rng = np.random.default_rng(8)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    k = np.zeros((3, 3), dtype=complex)
    k[:2, :2] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k[2, 2] = 1.0
    mu_g, mu_h = moment_map(p)
    mu_g_a, mu_h_a = moment_map(act(g, k, p))
    assert np.abs(mu_g_a - g @ mu_g @ np.linalg.inv(g)).max() < 1e-8
    assert np.abs(mu_h_a - k @ mu_h @ np.linalg.inv(k)).max() < 1e-8


def test_act_rejects_non_block_diagonal_k():
    p = sample_fission_point(3, [[0, 1], [2]], 1, seed=1)
    k = np.eye(3, dtype=complex)
    k[0, 2] = 1.0
    with pytest.raises(MatrixError, match="block-diagonal"):
        act(np.eye(3), k, p)


def test_char_poly_constant_along_orbit():
    p = sample_fission_point(2, [[0], [1]], 1, seed=13)
    mu_g, _ = moment_map(p)
    rng = np.random.default_rng(4)
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k = np.diag(rng.normal(size=2) + 1j * rng.normal(size=2))
    mu_after, _ = moment_map(act(g, k, p))
    assert np.abs(np.poly(mu_after) - np.poly(mu_g)).max() < 1e-8


def test_sampling_is_deterministic():
    a = sample_fission_point(2, [[0], [1]], 1, seed=7)
    b = sample_fission_point(2, [[0], [1]], 1, seed=7)
    assert np.array_equal(a.C, b.C)
    assert np.array_equal(a.h, b.h)
    assert all(np.array_equal(x, y) for x, y in zip(a.S, b.S))


def test_sample_shapes_and_block_structure():
    p = sample_fission_point(3, [[0, 1], [2]], 2, seed=9)
    assert len(p.S) == 4
    p.validate()
    # odd factors upper w.r.t. blocks: lower-left 1x2 block must vanish
    assert np.abs(p.S[0][2, :2]).max() == 0.0
    assert np.abs(p.S[1][:2, 2]).max() == 0.0


def test_sample_rejects_bad_partition_and_r():
    with pytest.raises(MatrixError, match="partition"):
        sample_fission_point(3, [[0, 1]], 1, seed=0)
    with pytest.raises(MatrixError, match="r must be"):
        sample_fission_point(2, [[0], [1]], 0, seed=0)


# ---------------------------------------------------------------------------
# factorizations
# ---------------------------------------------------------------------------


def test_big_cell_worked_example():
    lo, t, up = big_cell_factor(np.array([[1, 2], [3, 7]], dtype=complex))
    assert np.allclose(lo, [[1, 0], [3, 1]])
    assert np.allclose(np.diag(t), [1, 1])
    assert np.allclose(up, [[1, 2], [0, 1]])


def test_big_cell_identity():
    lo, t, up = big_cell_factor(np.eye(3, dtype=complex))
    assert np.allclose(lo, np.eye(3))
    assert np.allclose(t, np.eye(3))
    assert np.allclose(up, np.eye(3))


def test_big_cell_rejects_zero_leading_minor():
    assert big_cell_factor(np.array([[0, 1], [1, 0]], dtype=complex)) is None


def test_big_cell_rejects_singular_matrix():
    with pytest.raises(MatrixError, match="singular"):
        big_cell_factor(np.array([[1, 1], [1, 1]], dtype=complex))


def test_big_cell_torus_parts_match_minor_ratios():
    rng = np.random.default_rng(21)
    for _ in range(20):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        res = big_cell_factor(m)
        if res is None:
            continue
        lo, t, up = res
        assert np.abs(lo @ t @ up - m).max() < 1e-9
        minors = [np.linalg.det(m[: k + 1, : k + 1]) for k in range(4)]
        ratios = [minors[0]] + [minors[k] / minors[k - 1] for k in range(1, 4)]
        assert np.abs(np.diag(t) - np.array(ratios)).max() < 1e-8


def test_ul_factor_round_trip():
    rng = np.random.default_rng(2)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    res = ul_factor(m)
    if res is not None:
        up, t, lo = res
        assert np.abs(up @ t @ lo - m).max() < 1e-9
        assert np.abs(np.tril(up, -1)).max() == 0.0
        assert np.abs(np.triu(lo, 1)).max() == 0.0


# ---------------------------------------------------------------------------
# dual-group coverings
# ---------------------------------------------------------------------------


def test_covering_trivial_point():
    q = GStarPoint(np.eye(2, dtype=complex), np.zeros(2, dtype=complex), np.eye(2, dtype=complex))
    (b_plus, b_minus), gcirc = covering_maps(q)
    assert np.allclose(b_plus, np.eye(2))
    assert np.allclose(b_minus, np.eye(2))
    assert np.allclose(gcirc, np.eye(2))


def test_covering_integer_lambda():
    q = GStarPoint(np.eye(2, dtype=complex), np.array([1.0, 0.0], dtype=complex), np.eye(2, dtype=complex))
    (b_plus, b_minus), gcirc = covering_maps(q)
    assert np.allclose(b_plus, np.diag([-1, 1]))
    assert np.allclose(b_minus, np.diag([-1, 1]))
    assert np.allclose(gcirc, np.eye(2))


def test_delta_identity_and_big_cell_round_trip():
    for seed in range(30):
        q = sample_gstar_point(3, seed=seed)
        (b_plus, b_minus), gcirc = covering_maps(q)
        delta = np.diag(b_plus) * np.diag(b_minus)
        assert np.abs(delta - 1.0).max() < 1e-12
        lo, t, up = big_cell_factor(gcirc)
        expected_t = np.exp(2j * np.pi * q.lam)
        scale = max(1.0, np.abs(expected_t).max())
        assert np.abs(np.diag(t) - expected_t).max() < 1e-9 * scale
        assert np.abs(lo - np.linalg.inv(q.u_minus)).max() < 1e-8
        assert np.abs(up - q.u_plus).max() < 1e-8


def test_covering_rejects_non_unitriangular():
    bad = np.array([[1, 0], [0, 2]], dtype=complex)
    with pytest.raises(MatrixError, match="unit-triangular"):
        GStarPoint(bad, np.zeros(2, dtype=complex), np.eye(2, dtype=complex))


# ---------------------------------------------------------------------------
# opposite intersection
# ---------------------------------------------------------------------------


def test_opp_intersection_worked_examples():
    assert opp_intersection_test(np.array([[2, 1], [1, 1]], dtype=complex))
    assert opp_intersection_test(np.eye(2, dtype=complex))
    assert not opp_intersection_test(np.array([[0, 1], [-1, 1]], dtype=complex))


def test_opp_intersection_rejects_torus_part():
    # diag(2, 1) is in the big cell but not in U+ U-
    assert not opp_intersection_test(np.diag([2.0 + 0j, 1.0 + 0j]))


def test_opp_intersection_local_dims():
    assert opp_intersection_local_dim(2, points=10, seed=1) == [2] * 10
    assert opp_intersection_local_dim(3, points=10, seed=1) == [6] * 10


def test_big_cell_density_proxy():
    rng = np.random.default_rng(17)
    inside = 0
    for _ in range(2000):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        if big_cell_factor(m) is not None:
            inside += 1
    assert inside >= 2000 * (1 - 1e-3)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------


def test_verify_suite_runs_clean():
    rep = verify_suite(2, [1, 1], 1, trials=200, seed=42)
    assert rep.failures_total == 0
    assert rep.max_residual < 1e-9
    body = rep.to_json()
    assert body["trials"] == 200
    assert set(body["failures_by_check"]) == {
        "moment_equivariance",
        "action_composition",
        "det_identity",
        "s_parity",
        "fusion_multiplicativity",
    }


def test_verify_suite_deterministic():
    a = verify_suite(3, [2, 1], 2, trials=50, seed=9)
    b = verify_suite(3, [2, 1], 2, trials=50, seed=9)
    assert a.max_residual == b.max_residual


def test_verify_suite_rejects_zero_trials():
    with pytest.raises(MatrixError, match="trials"):
        verify_suite(2, [1, 1], 1, trials=0)


def test_verify_suite_rejects_mismatched_blocks():
    with pytest.raises(MatrixError, match="expected"):
        verify_suite(3, [1, 1], 1, trials=1)
