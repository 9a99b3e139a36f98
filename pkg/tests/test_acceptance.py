"""Acceptance suite: one test per criterion, each printing a verdict line.

Tolerances and runtime budgets are pinned here, not configurable.  Counting
identities are exact; numeric identities carry the stated residual bounds.
"""

import json
import time

import numpy as np

from helpers import generic_leaf_dim, random_gl_type, random_wild_gl_type, tame_curve
from wildcat.cartan import build_gl
from wildcat.deform import check_admissible, curve_family, wall_events
from wildcat.fission import (
    Group,
    coloured_graph,
    fission_space,
    graph_blocks,
    hom_stokes,
    point_class,
    reduce_graph_blocks,
    reduce_space,
    regular_gl_class,
    space_A,
    wild_leaf_dim,
)
from wildcat.irregular import CurvePoint, IrregularCurve, degree, irregular_type, scale_degrees
from wildcat.matrix_real import (
    big_cell_factor,
    covering_maps,
    opp_intersection_local_dim,
    sample_gstar_point,
    verify_suite,
)
from wildcat.service import dispatch
from wildcat.stokes import singular_directions, stokes_budget

GL2 = build_gl(2)
GL3 = build_gl(3)


def _ok(k, text):
    print(f"ACCEPTANCE {k}: PASS - {text}")


def test_criterion_1_stokes_counting():
    rng = np.random.default_rng(20260810)
    start = time.monotonic()
    for _ in range(1000):
        datum, q = random_gl_type(rng, max_n=5, max_r=4)
        rep = singular_directions(q)
        assert sum(rep.stokes_dims) == stokes_budget(q)
        for alpha in datum.roots:
            assert rep.support_count(alpha) == degree(q, alpha)
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"runtime {elapsed:.2f}s exceeds 10s"
    _ok(1, f"1000 random types counted exactly in {elapsed:.2f}s")


def test_criterion_2_pullback_law():
    rng = np.random.default_rng(22)
    for _ in range(100):
        datum, q = random_gl_type(rng, max_n=4, max_r=3)
        base = singular_directions(q)
        for k in (2, 3, 4):
            pulled = singular_directions(scale_degrees(q, k))
            for alpha in datum.roots:
                assert pulled.support_count(alpha) == k * base.support_count(alpha)
    _ok(2, "z -> z^k multiplies every direction count by k, k <= 4, 100 types")


def test_criterion_3_nesting_vs_direct():
    q = irregular_type(GL3, [[1, 1, 0], [1, 0, 0]])
    from wildcat.fission import nesting_decomposition

    assert nesting_decomposition(q).dim == space_A(q).dim == 22
    rng = np.random.default_rng(33)
    for _ in range(1000):
        _, q = random_wild_gl_type(rng, max_n=6, max_r=4)
        assert nesting_decomposition(q).dim == space_A(q).dim
    _ok(3, "nesting dimension equals the direct dimension on 1000 random types (and 22 on the worked GL_3 case)")


def test_criterion_4_tame_specialization():
    rng = np.random.default_rng(44)
    for _ in range(50):
        genus = int(rng.integers(0, 4))
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        curve = tame_curve(genus, m, n)
        assert hom_stokes(curve).dim == (2 * genus - 2 + 2 * m) * n * n

    g = Group.from_datum(GL2)
    sphere3 = wild_leaf_dim(tame_curve(0, 3, 2), [regular_gl_class(g)] * 3)
    assert sphere3.dim == 0
    sphere4 = wild_leaf_dim(tame_curve(0, 4, 2), [regular_gl_class(g)] * 4)
    assert sphere4.dim == 2
    torus = wild_leaf_dim(tame_curve(1, 1, 2), [point_class(g)])
    assert torus.dim == 2
    _ok(4, "tame dims (2g-2+2m)dimG; leaves 0/2/2 for the sphere and torus cases")


def test_criterion_5_moment_identities():
    configs = [(2, [1, 1], 1), (2, [1, 1], 3), (3, [2, 1], 2), (4, [2, 2], 2)]
    start = time.monotonic()
    worst = 0.0
    for n, blocks, r in configs:
        rep = verify_suite(n, blocks, r, trials=1000, tol=1e-9, seed=5)
        assert rep.failures_total == 0, f"failures at {(n, blocks, r)}: {rep.failures_by_check}"
        worst = max(worst, rep.max_residual)
    elapsed = time.monotonic() - start
    assert worst < 1e-9
    assert elapsed < 30.0, f"runtime {elapsed:.2f}s exceeds 30s"
    _ok(5, f"4 configs x 1000 trials, max residual {worst:.2e}, {elapsed:.2f}s")


def test_criterion_6_gstar_coverings():
    worst_delta = 0.0
    worst_torus = 0.0
    for idx in range(1000):
        n = 2 + idx % 3
        q = sample_gstar_point(n, seed=(60, idx))
        (b_plus, b_minus), gcirc = covering_maps(q)
        delta_res = float(np.abs(np.diag(b_plus) * np.diag(b_minus) - 1.0).max())
        assert delta_res <= 1e-12
        res = big_cell_factor(gcirc)
        assert res is not None, "gcirc left the big cell"
        _, t, _ = res
        expected = np.exp(2j * np.pi * q.lam)
        scale = max(1.0, float(np.abs(expected).max()))
        torus_res = float(np.abs(np.diag(t) - expected).max()) / scale
        assert torus_res <= 1e-9
        worst_delta = max(worst_delta, delta_res)
        worst_torus = max(worst_torus, torus_res)
    _ok(6, f"1000 points: delta identity residual {worst_delta:.1e}, torus recovery {worst_torus:.1e}")


def test_criterion_7_opposite_intersection_dimension():
    dims2 = opp_intersection_local_dim(2, points=100, seed=7, sv_cutoff=1e-7)
    dims3 = opp_intersection_local_dim(3, points=100, seed=7, sv_cutoff=1e-7)
    assert dims2 == [2] * 100
    assert dims3 == [6] * 100
    _ok(7, "sampled local dimension equals #roots: GL_2 -> 2, GL_3 -> 6 (100 points each)")


def test_criterion_8_quiver_blocks():
    triangle = coloured_graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    gb = graph_blocks(triangle, {"a": 1, "b": 1, "c": 1})
    assert gb.rep_dim == 6
    assert reduce_graph_blocks(gb).dim == 2

    for m in range(1, 7):
        for n in range(1, 7):
            edge = coloured_graph(["u", "v"], [("u", "v")])
            assert graph_blocks(edge, {"u": m, "v": n}).rep_dim == 2 * m * n

    for d1 in range(1, 7):
        for d2 in range(1, 7):
            total = d1 + d2
            big = Group.gl_node(total, tag="")
            fine = Group(
                kind="gl",
                blocks=(tuple(range(d1)), tuple(range(d1, total))),
                ambient=total,
                rank=total,
                roots=None,
                ambient_center=1,
            )
            expr = reduce_space(fission_space(big, fine, 2), big, point_class(big))
            assert expr.dim == 2 * d1 * d2
    _ok(8, "triangle reduces to complex dimension 2; edge blocks are 2mn; fission = Rep dims for d <= 6")


def test_criterion_9_admissibility():
    def one_point(coeffs):
        return IrregularCurve(
            genus=0, points=(CurvePoint("0", irregular_type(GL2, coeffs)),)
        )

    fam = curve_family([(t, one_point([[1 - t, 0]])) for t in (0.0, 0.5, 1.0)])
    rep = check_admissible(fam)
    assert rep.verdict == "inadmissible"
    assert rep.first.t_lo == 1.0
    assert rep.first.detail["root"] == [1, -1]

    import cmath

    ts = [0.0, 0.4, 0.8, 1.2, 1.5707963267948966]
    fam = curve_family([(t, one_point([[cmath.exp(1j * t), 0]])) for t in ts])
    assert check_admissible(fam).verdict == "admissible"

    fam = curve_family([(0.0, one_point([[1, 0]])), (1.0, one_point([[1, 0]]))])
    assert check_admissible(fam).verdict == "admissible"

    path = [(t, (1.0, t * 1j, 0.0)) for t in (-1.0, -0.3, 0.4, 1.0)]
    walls = [e for e in wall_events(path, GL3) if e.kind == "wall"]
    assert len(walls) == 1
    assert walls[0].detail["root"] == [0, 1, -1]
    assert walls[0].t_hi - walls[0].t_lo <= 2e-10
    assert abs(walls[0].t_lo) <= 1e-10 and abs(walls[0].t_hi) <= 1e-10
    _ok(9, "stated verdicts reproduced; wall at t = 0 bracketed to 1e-10")


def test_criterion_10_determinism():
    gstar = {
        "group": {"type": "GL", "n": 2},
        "genus": 0,
        "points": [
            {"label": "0", "irregular_type": [["1", "0"]]},
            {"label": "inf", "irregular_type": []},
        ],
    }
    requests = [
        ("analyze", {"spec": gstar}),
        ("dims", {"spec": gstar, "classes": [
            {"label": "0", "point": True},
            {"label": "inf", "multiplicities": [1, 1]},
        ]}),
        ("verify", {"n": 2, "blocks": [1, 1], "r": 1, "trials": 60, "seed": 42}),
        ("deform", {"base": gstar, "family": [
            [0.0, {}],
            [1.0, {"points": [{"label": "0", "irregular_type": [["0", "0"]]}]}],
        ]}),
        ("quiver", {"nodes": [{"id": "a", "dim": 1}, {"id": "b", "dim": 1}, {"id": "c", "dim": 1}],
                    "edges": [["a", "b"], ["b", "c"], ["a", "c"]], "reduce": True}),
    ]
    for command, request in requests:
        status1, body1 = dispatch(command, json.loads(json.dumps(request)))
        status2, body2 = dispatch(command, json.loads(json.dumps(request)))
        assert status1 == status2 == 200
        assert body1 == body2, f"{command} report is not byte-stable"
    _ok(10, "all five commands emit byte-identical reports for fixed inputs")
