"""Admissibility of irregular-curve families and wall/collision detection.

Families are sampled and interpolated piecewise-linearly in the parameter.
Admissibility requires every root's pole order to stay constant and marked
points to stay distinct; for single-term A/z families the failure locus is
exactly the root hyperplane arrangement, detected here as wall events with
bisection-refined brackets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cartan import CartanError, Root, RootDatum, negate
from .irregular import IrregularCurve, IrregularType

BRACKET_WIDTH = 1e-10


@dataclass
class Event:
    kind: str  # degree_drop | points_collide | wall | direction_collision
    t_lo: float
    t_hi: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "t_lo": self.t_lo, "t_hi": self.t_hi, "detail": dict(self.detail)}


@dataclass(frozen=True)
class CurveFamily:
    """Parameter samples (t, curve) sharing group, genus, and point labels."""

    samples: tuple[tuple[float, IrregularCurve], ...]

    @property
    def t_range(self) -> tuple[float, float]:
        return self.samples[0][0], self.samples[-1][0]


def curve_family(samples) -> CurveFamily:
    rows = [(float(t), curve) for t, curve in samples]
    if not rows:
        raise CartanError("a family needs at least one sample")
    ts = [t for t, _ in rows]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise CartanError(f"sample parameters must be strictly increasing, got {ts}")
    first = rows[0][1]
    for t, curve in rows[1:]:
        if curve.genus != first.genus:
            raise CartanError(f"genus changes at t={t}")
        if curve.datum != first.datum:
            raise CartanError(f"root datum changes at t={t}")
        if [p.label for p in curve.points] != [p.label for p in first.points]:
            raise CartanError(f"marked-point labels change at t={t}")
    return CurveFamily(samples=tuple(rows))


@dataclass
class AdmissibilityReport:
    verdict: str  # admissible | inadmissible
    first: Event | None
    events: list[Event]
    notes: list[str]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "first_violation": self.first.to_json() if self.first else None,
            "events": [e.to_json() for e in self.events],
            "notes": list(self.notes),
        }


def _pairing(alpha: Root, vec) -> complex:
    return sum(a * complex(v) for a, v in zip(alpha, vec))


def _coeff_or_zero(q: IrregularType, deg: int) -> tuple[complex, ...]:
    if 1 <= deg <= q.order:
        return q.coeff(deg)
    return tuple(0j for _ in range(q.datum.rank))


def _family_zero_tol(family: CurveFamily) -> float:
    top = 0.0
    for _, curve in family.samples:
        for p in curve.points:
            for vec in p.q.coeffs:
                for c in vec:
                    top = max(top, abs(c.real), abs(c.imag))
    return 1e-12 * (1.0 + top)


def _bisect_real(f, lo: float, hi: float, width: float = BRACKET_WIDTH) -> tuple[float, float]:
    """Shrink a sign-change bracket of a real function below the target width."""
    flo = f(lo)
    if flo == 0.0:
        return lo, lo
    for _ in range(200):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (flo < 0) != (fm < 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return lo, hi


def _linear_zero(a: complex, b: complex, t0: float, t1: float, ztol: float):
    """Bracketed zero of the linear interpolant between values a (at t0) and b (at t1).

    Returns (t_lo, t_hi) or None.  Whole-segment vanishing yields the full
    segment as the bracket.
    """
    if abs(a) <= ztol and abs(b) <= ztol:
        return t0, t1
    span = t1 - t0
    d = b - a
    den = d.real**2 + d.imag**2
    if den == 0.0:
        return None
    u = -((a.real * d.real) + (a.imag * d.imag)) / den
    u = min(1.0, max(0.0, u))
    if abs(a + u * d) > ztol:
        return None
    if a.real * b.real < 0.0:
        return _bisect_real(lambda t: (a + d * ((t - t0) / span)).real, t0, t1)
    if a.imag * b.imag < 0.0:
        return _bisect_real(lambda t: (a + d * ((t - t0) / span)).imag, t0, t1)
    # grazing or endpoint zero without a sign change; pin the closest approach
    t_star = t0 + u * span
    return t_star, t_star


def check_admissible(family: CurveFamily) -> AdmissibilityReport:
    """Verdict on a sampled family: pole orders constant, marked points distinct.

    Degree changes are detected at every sample and, for the piecewise-linear
    interpolant, at interior zeros of the leading coefficient between clean
    samples.  Point collisions are checked only when positions are supplied.
    """
    if len(family.samples) < 2:
        raise CartanError("admissibility needs at least 2 samples")
    ztol = _family_zero_tol(family)
    t0, curve0 = family.samples[0]
    datum = curve0.datum
    events: list[Event] = []

    def fam_degree(q: IrregularType, alpha: Root) -> int:
        for deg in range(q.order, 0, -1):
            if abs(_pairing(alpha, q.coeff(deg))) > ztol:
                return deg
        return 0

    base = {
        (pi, alpha): fam_degree(point.q, alpha)
        for pi, point in enumerate(curve0.points)
        for alpha in datum.roots
    }
    for t, curve in family.samples[1:]:
        for pi, point in enumerate(curve.points):
            for alpha in datum.roots:
                d = fam_degree(point.q, alpha)
                if d != base[(pi, alpha)]:
                    events.append(
                        Event(
                            kind="degree_drop",
                            t_lo=t,
                            t_hi=t,
                            detail={
                                "point": point.label,
                                "root": list(alpha),
                                "base_degree": base[(pi, alpha)],
                                "degree": d,
                            },
                        )
                    )

    # interior zeros of the leading coefficient between degree-clean samples
    for pi in range(curve0.n_points):
        for alpha in datum.roots:
            deg = base[(pi, alpha)]
            if deg < 1:
                continue
            for (ta, ca), (tb, cb) in zip(family.samples, family.samples[1:]):
                a = _pairing(alpha, _coeff_or_zero(ca.points[pi].q, deg))
                b = _pairing(alpha, _coeff_or_zero(cb.points[pi].q, deg))
                if abs(a) <= ztol or abs(b) <= ztol:
                    continue  # endpoint drops are sample events
                bracket = _linear_zero(a, b, ta, tb, ztol)
                if bracket is not None:
                    events.append(
                        Event(
                            kind="degree_drop",
                            t_lo=bracket[0],
                            t_hi=bracket[1],
                            detail={
                                "point": ca.points[pi].label,
                                "root": list(alpha),
                                "base_degree": deg,
                                "degree": deg - 1,
                                "interior": True,
                            },
                        )
                    )

    notes = ["fibre smoothness assumed: families never degenerate the curve"]
    have_positions = all(
        p.position is not None for _, curve in family.samples for p in curve.points
    )
    if have_positions:
        pos_scale = max(
            (max(abs(p.position.real), abs(p.position.imag)) for _, c in family.samples for p in c.points),
            default=0.0,
        )
        ptol = 1e-12 * (1.0 + pos_scale)
        m = curve0.n_points
        for i in range(m):
            for j in range(i + 1, m):
                for (ta, ca), (tb, cb) in zip(family.samples, family.samples[1:]):
                    a = complex(ca.points[i].position) - complex(ca.points[j].position)
                    b = complex(cb.points[i].position) - complex(cb.points[j].position)
                    bracket = _linear_zero(a, b, ta, tb, ptol)
                    if bracket is not None:
                        events.append(
                            Event(
                                kind="points_collide",
                                t_lo=bracket[0],
                                t_hi=bracket[1],
                                detail={"points": [ca.points[i].label, ca.points[j].label]},
                            )
                        )
    else:
        notes.append("point-collision clause vacuous: no positions supplied")

    events.sort(key=lambda e: (e.t_lo, e.t_hi, e.kind))
    verdict = "admissible" if not events else "inadmissible"
    return AdmissibilityReport(
        verdict=verdict, first=events[0] if events else None, events=events, notes=notes
    )


# ---------------------------------------------------------------------------
# Wall and direction-collision events along a Cartan path
# ---------------------------------------------------------------------------


def _canonical_root(alpha: Root) -> Root:
    return max(alpha, negate(alpha))


def wall_events(path, datum: RootDatum) -> list[Event]:
    """Walls (a root pairing crossing zero) and direction collisions along a path.

    ``path`` is a sampled Cartan-vector path [(t, vector), ...], interpolated
    linearly.  Walls are reported once per +- root pair; collisions fire when
    two rays of non-proportional roots become positively parallel, i.e. when
    the argument difference actually crosses zero (identically parallel
    segments produce no event).
    """
    rows = [(float(t), tuple(complex(c) for c in vec)) for t, vec in path]
    if len(rows) < 2:
        raise CartanError("wall detection needs at least 2 samples")
    ts = [t for t, _ in rows]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise CartanError(f"sample parameters must be strictly increasing, got {ts}")
    for t, vec in rows:
        if len(vec) != datum.rank:
            raise CartanError(f"vector at t={t} has length {len(vec)}, expected {datum.rank}")
    top = max((max(abs(c.real), abs(c.imag)) for _, v in rows for c in v), default=0.0)
    ztol = 1e-12 * (1.0 + top)

    events: list[Event] = []
    seen_walls: set[tuple[Root, float]] = set()
    positive_roots = sorted({_canonical_root(a) for a in datum.roots})

    for alpha in positive_roots:
        for (ta, va), (tb, vb) in zip(rows, rows[1:]):
            a, b = _pairing(alpha, va), _pairing(alpha, vb)
            bracket = _linear_zero(a, b, ta, tb, ztol)
            if bracket is None:
                continue
            key = (alpha, round(0.5 * (bracket[0] + bracket[1]), 9))
            if key in seen_walls:
                continue
            seen_walls.add(key)
            events.append(
                Event(
                    kind="wall",
                    t_lo=bracket[0],
                    t_hi=bracket[1],
                    detail={"root": list(alpha)},
                )
            )

    seen_pairs: set[tuple[Root, Root]] = set()
    seen_collisions: set[tuple[Root, Root, float]] = set()
    roots = sorted(datum.roots)
    for i, alpha in enumerate(roots):
        for beta in roots[i + 1 :]:
            if beta == negate(alpha):
                continue
            key = min((alpha, beta), tuple(sorted((negate(alpha), negate(beta)))))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            for (ta, va), (tb, vb) in zip(rows, rows[1:]):
                for event in _collision_events(alpha, beta, ta, tb, va, vb, ztol):
                    ckey = (alpha, beta, round(0.5 * (event.t_lo + event.t_hi), 9))
                    if ckey in seen_collisions:
                        continue
                    seen_collisions.add(ckey)
                    events.append(event)

    events.sort(key=lambda e: (e.t_lo, e.t_hi, e.kind))
    return events


def _collision_events(alpha, beta, ta, tb, va, vb, ztol) -> list[Event]:
    """Sign-changing zeros of Im(f conj(g)) with Re(f conj(g)) > 0 on one segment."""
    fa, fb = _pairing(alpha, va), _pairing(alpha, vb)
    ga, gb = _pairing(beta, va), _pairing(beta, vb)
    span = tb - ta
    df, dg = fb - fa, gb - ga

    def f(u: float) -> complex:
        return fa + u * df

    def g(u: float) -> complex:
        return ga + u * dg

    def w(u: float) -> float:
        return (f(u) * g(u).conjugate()).imag

    # w is a real quadratic in u: w0 + w1 u + w2 u^2
    w0 = (fa * ga.conjugate()).imag
    w1 = (fa * dg.conjugate() + df * ga.conjugate()).imag
    w2 = (df * dg.conjugate()).imag
    wtol = ztol * ztol
    if abs(w0) <= wtol and abs(w1) <= wtol and abs(w2) <= wtol:
        return []  # identically parallel or anti-parallel: no crossing

    roots: list[float] = []
    if abs(w2) <= wtol:
        if abs(w1) > wtol:
            roots.append(-w0 / w1)
    else:
        disc = w1 * w1 - 4.0 * w2 * w0
        if disc > 0.0:  # double roots touch without crossing
            sq = math.sqrt(disc)
            roots.extend(((-w1 - sq) / (2.0 * w2), (-w1 + sq) / (2.0 * w2)))

    out = []
    for u0 in roots:
        if u0 < 0.0 or u0 > 1.0:
            continue
        if abs(f(u0)) <= ztol or abs(g(u0)) <= ztol:
            continue  # a ray degenerates here: that is a wall, not a collision
        if (f(u0) * g(u0).conjugate()).real <= 0.0:
            continue  # anti-parallel crossing
        eps = 1e-7
        lo_u, hi_u = max(0.0, u0 - eps), min(1.0, u0 + eps)
        if w(lo_u) * w(hi_u) < 0.0:
            lo, hi = _bisect_real(w, lo_u, hi_u, width=BRACKET_WIDTH / abs(span))
        else:
            lo = hi = u0  # exact root; window could not isolate the sign change
        out.append(
            Event(
                kind="direction_collision",
                t_lo=ta + lo * span,
                t_hi=ta + hi * span,
                detail={"roots": [list(alpha), list(beta)]},
            )
        )
    return out
