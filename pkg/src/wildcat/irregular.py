"""Irregular types Q = A_r/z^r + ... + A_1/z and the data they induce.

Coefficients live in the Cartan subalgebra, one complex entry per rank
coordinate.  Pairing a root against Q gives a Laurent tail whose pole order
drives everything downstream: levels, Stokes budgets, centralizer chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cartan import CartanError, LeviDatum, Root, RootDatum, levi_of_vanishing

# Equality with zero is scale-relative: inputs are exact decimals, so this
# only guards against representation noise.
ZERO_TOL_BASE = 1e-12

CartanVector = tuple[complex, ...]


@dataclass(frozen=True)
class IrregularType:
    """Normalized irregular type: coeffs = (A_r, ..., A_1) with A_r nonzero.

    Tame types have an empty coefficient tuple (r = 0).
    """

    datum: RootDatum
    coeffs: tuple[CartanVector, ...]
    zero_tol: float

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def is_tame(self) -> bool:
        return not self.coeffs

    def coeff(self, degree: int) -> CartanVector:
        """The Cartan vector A_degree, degree in 1..r."""
        if degree < 1 or degree > self.order:
            raise ValueError(f"degree {degree} out of range 1..{self.order}")
        return self.coeffs[self.order - degree]

    @cached_property
    def _degrees(self) -> dict[Root, int]:
        return {alpha: max(pair_root(self, alpha), default=0) for alpha in self.datum.roots}


def irregular_type(datum: RootDatum, coeffs) -> IrregularType:
    """Build an irregular type, stripping leading zero Cartan vectors.

    ``coeffs`` is [A_r, ..., A_1], each a length-rank sequence of complex
    numbers.  Normalization makes r intrinsic: degrees and centralizer
    chains must not depend on padded input.
    """
    vecs = []
    for vec in coeffs:
        v = tuple(complex(c) for c in vec)
        if len(v) != datum.rank:
            raise CartanError(f"coefficient vector length {len(v)} != rank {datum.rank}")
        vecs.append(v)
    top = max((abs(c.real) for v in vecs for c in v), default=0.0)
    top = max(top, max((abs(c.imag) for v in vecs for c in v), default=0.0))
    tol = ZERO_TOL_BASE * (1.0 + top)
    while vecs and all(abs(c) <= tol for c in vecs[0]):
        vecs.pop(0)
    return IrregularType(datum=datum, coeffs=tuple(vecs), zero_tol=tol)


def tame_type(datum: RootDatum) -> IrregularType:
    return irregular_type(datum, [])


def pair_root(q: IrregularType, alpha: Root) -> dict[int, complex]:
    """Laurent tail of the root component of Q: degree -> <alpha, A_degree>.

    Coefficients within the zero tolerance are dropped, so absent keys mean
    zero; the GL_3 two-term example cancels its degree-2 entry this way.
    """
    a = tuple(alpha)
    if not q.datum.has_root(a):
        raise CartanError(f"{a} is not a root of {q.datum.name()}")
    tail: dict[int, complex] = {}
    for deg in range(1, q.order + 1):
        c = sum(ai * vi for ai, vi in zip(a, q.coeff(deg)))
        if abs(c) > q.zero_tol:
            tail[deg] = c
    return tail


def degree(q: IrregularType, alpha: Root) -> int:
    """Pole order of the root component of Q (0 when it vanishes identically)."""
    a = tuple(alpha)
    if not q.datum.has_root(a):
        raise CartanError(f"{a} is not a root of {q.datum.name()}")
    return q._degrees[a]


def levels(q: IrregularType) -> set[int]:
    """Distinct nonzero pole orders over all roots."""
    return {d for d in q._degrees.values() if d > 0}


def has_regular_leading_term(q: IrregularType) -> bool:
    """True when no root kills the leading coefficient (single-level criterion)."""
    if q.is_tame:
        return False
    a_r = q.coeffs[0]
    for alpha in q.datum.roots:
        if abs(sum(ai * vi for ai, vi in zip(alpha, a_r))) <= q.zero_tol:
            return False
    return True


def centralizer(q: IrregularType) -> LeviDatum:
    """The centralizer of Q: Levi of the roots whose tail is empty."""
    vanishing = [alpha for alpha, d in q._degrees.items() if d == 0]
    return levi_of_vanishing(q.datum, vanishing)


def centralizer_chain(q: IrregularType) -> list[LeviDatum]:
    """Nested Levis H_1 <= ... <= H_r, H_i centralizing the coefficients from A_r down to A_i.

    H_1 is the full centralizer of Q.  Tame types are rejected: the caller
    should use the group itself.
    """
    if q.is_tame:
        raise CartanError("tame type has no centralizer chain; use the full group")
    chain = []
    for i in range(1, q.order + 1):
        vanishing = []
        for alpha in q.datum.roots:
            if all(
                abs(sum(ai * vi for ai, vi in zip(alpha, q.coeff(j)))) <= q.zero_tol
                for j in range(i, q.order + 1)
            ):
                vanishing.append(alpha)
        chain.append(levi_of_vanishing(q.datum, vanishing))
    for lower, upper in zip(chain, chain[1:]):
        assert upper.contains(lower)
    return chain


def scale_degrees(q: IrregularType, k: int) -> IrregularType:
    """Pull back under z -> z^k: the coefficient at degree i moves to degree k*i."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    zero = tuple(0j for _ in range(q.datum.rank))
    vecs: list[CartanVector] = []
    for deg in range(q.order * k, 0, -1):
        vecs.append(q.coeff(deg // k) if deg % k == 0 else zero)
    return irregular_type(q.datum, vecs)


@dataclass(frozen=True)
class CurvePoint:
    label: str
    q: IrregularType
    position: complex | None = None


@dataclass(frozen=True)
class IrregularCurve:
    """A genus plus an ordered list of marked points carrying irregular types."""

    genus: int
    points: tuple[CurvePoint, ...]

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise CartanError(f"genus must be >= 0, got {self.genus}")
        if not self.points:
            raise CartanError("a curve needs at least one marked point")
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise CartanError(f"duplicate point labels: {labels}")
        datum = self.points[0].q.datum
        if any(p.q.datum != datum for p in self.points):
            raise CartanError("all marked points must share one root datum")

    @property
    def datum(self) -> RootDatum:
        return self.points[0].q.datum

    @property
    def n_points(self) -> int:
        return len(self.points)

    def is_tame(self) -> bool:
        return all(p.q.is_tame for p in self.points)
