"""Shared samplers and independent oracles for the test suite."""

import numpy as np

from wildcat.cartan import RootDatum, build_gl
from wildcat.irregular import CurvePoint, IrregularCurve, IrregularType, irregular_type, tame_type


def random_gl_type(rng: np.random.Generator, max_n: int = 5, max_r: int = 4):
    """A random GL_n irregular type with small-integer Gaussian coefficients."""
    n = int(rng.integers(1, max_n + 1))
    r = int(rng.integers(0, max_r + 1))
    datum = build_gl(n)
    re = np.round(rng.normal(0.0, 1.2, (r, n)))
    im = np.round(rng.normal(0.0, 1.2, (r, n)))
    return datum, irregular_type(datum, (re + 1j * im).tolist())


def random_wild_gl_type(rng: np.random.Generator, max_n: int = 5, max_r: int = 4):
    while True:
        datum, q = random_gl_type(rng, max_n, max_r)
        if not q.is_tame:
            return datum, q


def tame_curve(genus: int, m: int, n: int) -> IrregularCurve:
    datum = build_gl(n)
    points = tuple(CurvePoint(label=f"p{i}", q=tame_type(datum)) for i in range(m))
    return IrregularCurve(genus=genus, points=points)


def generic_leaf_dim(genus: int, m: int, n: int) -> int:
    """Classical dimension of the GL_n character-variety leaf with regular
    semisimple local classes: 2[(g-1)n^2 + 1 + m n(n-1)/2]."""
    return 2 * ((genus - 1) * n * n + 1 + m * n * (n - 1) // 2)


def wild_point(datum: RootDatum, label: str, coeffs) -> CurvePoint:
    return CurvePoint(label=label, q=irregular_type(datum, coeffs))
