"""Singular (anti-Stokes) directions, their supporting roots, and Stokes dimensions.

A root whose Laurent tail has leading coefficient c at pole order k supports
the k boundary directions where exp(c/z^k) decays maximally, i.e.
theta = (arg c - pi + 2*pi*j)/k.  Directions within an angular tolerance are
merged transitively and their supports unioned; each merged direction keeps
the exact leading coefficients that produced it so coincidences can be
re-audited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cartan import CartanError, Root, RootDatum
from .irregular import IrregularType, degree, pair_root

TAU = 2.0 * math.pi

DEFAULT_DIR_TOL = 1e-9


@dataclass(frozen=True)
class DirectionWitness:
    """One (root, leading coefficient) contribution to a merged direction."""

    root: Root
    degree: int
    leading_coeff: complex
    angle: float


@dataclass(frozen=True)
class DirectionGroup:
    angle: float
    support: frozenset[Root]
    witnesses: tuple[DirectionWitness, ...]

    @property
    def stokes_dim(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class StokesReport:
    """Directions sorted by angle, with the total Stokes budget and puncture count."""

    directions: tuple[DirectionGroup, ...]
    budget: int
    halo_punctures: int

    @property
    def stokes_dims(self) -> tuple[int, ...]:
        return tuple(d.stokes_dim for d in self.directions)

    def support_count(self, root: Root) -> int:
        return sum(1 for d in self.directions if tuple(root) in d.support)


def normalize_angle(theta: float) -> float:
    t = math.fmod(theta, TAU)
    if t < 0.0:
        t += TAU
    if t >= TAU:
        t -= TAU
    return t


def _merge(witnesses: list[DirectionWitness], tol: float) -> tuple[DirectionGroup, ...]:
    """Group witnesses whose angles chain within tol, wrapping around the circle."""
    if not witnesses:
        return ()
    ordered = sorted(witnesses, key=lambda w: (w.angle, w.root))
    groups: list[list[DirectionWitness]] = [[ordered[0]]]
    for w in ordered[1:]:
        if w.angle - groups[-1][-1].angle <= tol:
            groups[-1].append(w)
        else:
            groups.append([w])
    if len(groups) > 1 and (TAU - groups[-1][-1].angle) + groups[0][0].angle <= tol:
        groups[0] = groups.pop() + groups[0]
    out = []
    for members in groups:
        angle = min(m.angle for m in members)
        out.append(
            DirectionGroup(
                angle=angle,
                support=frozenset(m.root for m in members),
                witnesses=tuple(members),
            )
        )
    return tuple(sorted(out, key=lambda g: g.angle))


def singular_directions(q: IrregularType, tol: float = DEFAULT_DIR_TOL) -> StokesReport:
    """All singular directions of Q with their supporting root sets.

    Roots with empty tail (no pole) contribute nothing.  Tame Q yields an
    empty report.
    """
    if tol <= 0.0:
        raise ValueError(f"direction tolerance must be positive, got {tol}")
    witnesses: list[DirectionWitness] = []
    budget = 0
    for alpha in q.datum.roots:
        tail = pair_root(q, alpha)
        if not tail:
            continue
        k = max(tail)
        c = tail[k]
        budget += k
        base = math.atan2(c.imag, c.real) - math.pi
        for j in range(k):
            theta = normalize_angle((base + TAU * j) / k)
            witnesses.append(DirectionWitness(root=alpha, degree=k, leading_coeff=c, angle=theta))
    directions = _merge(witnesses, tol)
    return StokesReport(directions=directions, budget=budget, halo_punctures=len(directions))


def stokes_budget(q: IrregularType) -> int:
    """Sum of pole orders over all roots; equals the total Stokes dimension."""
    return sum(degree(q, alpha) for alpha in q.datum.roots)


def rays_of_linear_type(a: tuple[complex, ...], datum: RootDatum, tol: float = DEFAULT_DIR_TOL) -> list[tuple[float, frozenset[Root]]]:
    """Rays from 0 through the nonzero pairing values <alpha, A>.

    This is the Q = -A/z picture: roots pairing to zero are omitted, and
    roots landing on a common ray (within tol) share a direction.
    """
    if tol <= 0.0:
        raise ValueError(f"direction tolerance must be positive, got {tol}")
    vec = tuple(complex(c) for c in a)
    if len(vec) != datum.rank:
        raise CartanError(f"Cartan vector length {len(vec)} != rank {datum.rank}")
    top = max((max(abs(c.real), abs(c.imag)) for c in vec), default=0.0)
    ztol = 1e-12 * (1.0 + top)
    witnesses = []
    for alpha in datum.roots:
        v = sum(ai * ci for ai, ci in zip(alpha, vec))
        if abs(v) <= ztol:
            continue
        theta = normalize_angle(math.atan2(v.imag, v.real))
        witnesses.append(DirectionWitness(root=alpha, degree=1, leading_coeff=v, angle=theta))
    return [(g.angle, g.support) for g in _merge(witnesses, tol)]
