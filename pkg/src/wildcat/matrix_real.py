"""Numeric GL_n realization: fission-space points, moment maps, big-cell and
UL factorizations, the dual-group coverings, and a randomized identity suite.

All tolerances are scale-relative doubles with default 1e-9.  Randomness is
seeded through per-trial substreams so serial and parallel runs agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9
# resampling cutoff for |det| of random invertible factors
DET_CUTOFF = 1e-6


class MatrixError(ValueError):
    """Singular input, invalid block structure, or malformed point."""


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise MatrixError("matrix entries must be finite")
    return a


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return float(np.abs(a - b).max(initial=0.0)) / scale


@dataclass(frozen=True)
class BlockStructure:
    """An ordered partition of 0..n-1 fixing the parabolic pair P+/P-.

    P+ is block-upper-triangular in the given block order; U+ has identity
    diagonal blocks and support only where block(i) < block(j).
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(self.n)):
            raise MatrixError(f"blocks {self.blocks} are not a partition of 0..{self.n - 1}")

    @classmethod
    def from_sizes(cls, sizes) -> "BlockStructure":
        sizes = [int(s) for s in sizes]
        if any(s < 1 for s in sizes):
            raise MatrixError(f"block sizes must be positive, got {sizes}")
        blocks, start = [], 0
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(n=start, blocks=tuple(blocks))

    @property
    def block_of(self) -> np.ndarray:
        out = np.empty(self.n, dtype=int)
        for b, members in enumerate(self.blocks):
            for i in members:
                out[i] = b
        return out

    def unipotent_mask(self, upper: bool) -> np.ndarray:
        """Entries allowed to differ from the identity for U+ (upper) or U-."""
        b = self.block_of
        if upper:
            return b[:, None] < b[None, :]
        return b[:, None] > b[None, :]

    def diag_mask(self) -> np.ndarray:
        b = self.block_of
        return b[:, None] == b[None, :]

    def unipotent_residual(self, m: np.ndarray, upper: bool) -> float:
        """Distance of m from the unipotent radical (unit diagonal blocks)."""
        free = self.unipotent_mask(upper)
        bad = np.where(free, 0.0, np.abs(m - np.eye(self.n)))
        return float(bad.max(initial=0.0))

    def block_diag_residual(self, m: np.ndarray) -> float:
        return float(np.where(self.diag_mask(), 0.0, np.abs(m)).max(initial=0.0))


@dataclass
class FissionPoint:
    """A point (C, S_1..S_2r, h): S_odd in U+, S_even in U-, h block-diagonal."""

    structure: BlockStructure
    r: int
    C: np.ndarray
    S: list[np.ndarray]
    h: np.ndarray

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        n = self.structure.n
        for name, m in (("C", self.C), ("h", self.h)):
            if m.shape != (n, n):
                raise MatrixError(f"{name} has shape {m.shape}, expected {(n, n)}")
        if len(self.S) != 2 * self.r:
            raise MatrixError(f"expected {2 * self.r} Stokes factors, got {len(self.S)}")
        for idx, s in enumerate(self.S, start=1):
            upper = idx % 2 == 1
            res = self.structure.unipotent_residual(s, upper)
            if res > tol:
                side = "U+" if upper else "U-"
                raise MatrixError(f"S_{idx} is not in {side}: residual {res:.3e}")
        if self.structure.block_diag_residual(self.h) > tol:
            raise MatrixError("h is not block-diagonal")
        if abs(np.linalg.det(self.C)) < DET_CUTOFF or abs(np.linalg.det(self.h)) < DET_CUTOFF:
            raise MatrixError("C and h must be comfortably invertible")


def _rng_for(seed, index: int | None = None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed if index is None else (seed, index))


def _random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, (n, n)) + 1j * rng.uniform(-1.0, 1.0, (n, n))


def _random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    for _ in range(100):
        m = _random_matrix(rng, n)
        if abs(np.linalg.det(m)) >= DET_CUTOFF:
            return m
    raise MatrixError("failed to sample an invertible matrix")


def _random_unipotent(rng: np.random.Generator, structure: BlockStructure, upper: bool) -> np.ndarray:
    m = np.eye(structure.n, dtype=complex)
    mask = structure.unipotent_mask(upper)
    fill = _random_matrix(rng, structure.n)
    m[mask] = fill[mask]
    return m


def _random_block_diag(rng: np.random.Generator, structure: BlockStructure) -> np.ndarray:
    for _ in range(100):
        m = np.zeros((structure.n, structure.n), dtype=complex)
        for block in structure.blocks:
            idx = np.ix_(block, block)
            m[idx] = _random_matrix(rng, len(block))
        if abs(np.linalg.det(m)) >= DET_CUTOFF:
            return m
    raise MatrixError("failed to sample an invertible block-diagonal matrix")


def sample_fission_point(n: int, blocks, r: int, seed=0) -> FissionPoint:
    """Draw a valid fission point with entries from a bounded complex law.

    ``blocks`` is a sequence of index blocks (or a BlockStructure); C and h
    are resampled until their determinants clear the cutoff.  The same seed
    always produces the same point.
    """
    if r < 1:
        raise MatrixError(f"r must be >= 1, got {r}")
    structure = blocks if isinstance(blocks, BlockStructure) else BlockStructure(
        n=n, blocks=tuple(tuple(int(i) for i in b) for b in blocks)
    )
    if structure.n != n:
        raise MatrixError(f"blocks cover {structure.n} indices, expected {n}")
    rng = _rng_for(seed)
    C = _random_invertible(rng, n)
    S = [_random_unipotent(rng, structure, upper=(i % 2 == 1)) for i in range(1, 2 * r + 1)]
    h = _random_block_diag(rng, structure)
    p = FissionPoint(structure=structure, r=r, C=C, S=S, h=h)
    p.validate()
    return p


def moment_map(p: FissionPoint) -> tuple[np.ndarray, np.ndarray]:
    """(mu_G, mu_H) = (C^-1 h S_2r ... S_2 S_1 C, h^-1), factors in descending index order."""
    prod = p.h.copy()
    for s in reversed(p.S):
        prod = prod @ s
    mu_g = np.linalg.solve(p.C, prod @ p.C)
    mu_h = np.linalg.inv(p.h)
    return mu_g, mu_h


def act(g, k, p: FissionPoint, tol: float = DEFAULT_TOL) -> FissionPoint:
    """The two-sided action (g,k): (C,S,h) -> (k C g^-1, k S k^-1, k h k^-1)."""
    g = _as_matrix(g)
    k = _as_matrix(k)
    if p.structure.block_diag_residual(k) > tol:
        raise MatrixError("k must be block-diagonal for the residual structure")
    k_inv = np.linalg.inv(k)
    return FissionPoint(
        structure=p.structure,
        r=p.r,
        C=k @ p.C @ np.linalg.inv(g),
        S=[k @ s @ k_inv for s in p.S],
        h=k @ p.h @ k_inv,
    )


# ---------------------------------------------------------------------------
# Big cell, UL factorization, dual-group coverings
# ---------------------------------------------------------------------------


def big_cell_factor(m, tol: float = DEFAULT_TOL):
    """Factor m = u_minus * t * u_plus with unit-triangular factors.

    Returns None when m is outside the big cell (a leading principal minor
    vanishes against the scale-relative cutoff); raises on singular input.
    """
    a = _as_matrix(m)
    n = a.shape[0]
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= tol * max(1.0, sv[0]):
        raise MatrixError("matrix is singular")
    scale = max(1.0, float(sv[0]))
    work = a.copy()
    lower = np.eye(n, dtype=complex)
    minor = 1.0 + 0j
    for kk in range(n):
        pivot = work[kk, kk]
        minor *= pivot
        if abs(minor) <= tol * scale ** (kk + 1):
            return None
        for i in range(kk + 1, n):
            factor = work[i, kk] / pivot
            lower[i, kk] = factor
            work[i, kk:] -= factor * work[kk, kk:]
    t = np.diag(np.diag(work))
    upper = np.diag(1.0 / np.diag(work)) @ np.triu(work)
    return lower, t, upper


def ul_factor(m, tol: float = DEFAULT_TOL):
    """Factor m = u_plus * t * u_minus (upper-unit, diagonal, lower-unit).

    Exists when the trailing principal minors are nonzero; computed by
    conjugating with the antidiagonal flip and reusing the big-cell route.
    """
    a = _as_matrix(m)
    flip = np.eye(a.shape[0])[::-1]
    res = big_cell_factor(flip @ a @ flip, tol=tol)
    if res is None:
        return None
    lo, t, up = res
    return flip @ lo @ flip, flip @ t @ flip, flip @ up @ flip


@dataclass(frozen=True)
class GStarPoint:
    """A point (u_plus, Lambda, u_minus) of the universal cover of the dual group."""

    u_plus: np.ndarray
    lam: np.ndarray
    u_minus: np.ndarray

    def __post_init__(self) -> None:
        n = self.u_plus.shape[0]
        if self.lam.shape != (n,):
            raise MatrixError(f"Lambda must be a diagonal vector of length {n}")
        up_bad = np.abs(np.tril(self.u_plus, -1)).max(initial=0.0)
        lo_bad = np.abs(np.triu(self.u_minus, 1)).max(initial=0.0)
        diag_bad = max(
            np.abs(np.diag(self.u_plus) - 1.0).max(initial=0.0),
            np.abs(np.diag(self.u_minus) - 1.0).max(initial=0.0),
        )
        if max(up_bad, lo_bad, diag_bad) > DEFAULT_TOL:
            raise MatrixError("u_plus/u_minus must be unit-triangular")


def covering_maps(q: GStarPoint) -> tuple[tuple[np.ndarray, np.ndarray], np.ndarray]:
    """The two coverings: (b+, b-) = (s u+, s^-1 u-) and u-^-1 t u+ in the big cell.

    s = exp(pi i Lambda) entrywise, t = s^2; branch choices live in Lambda.
    The diagonal parts satisfy delta(b+) delta(b-) = 1.
    """
    s = np.exp(1j * np.pi * q.lam)
    b_plus = np.diag(s) @ q.u_plus
    b_minus = np.diag(1.0 / s) @ q.u_minus
    t = np.diag(s * s)
    gcirc = np.linalg.solve(q.u_minus, t @ q.u_plus)
    return (b_plus, b_minus), gcirc


def sample_gstar_point(n: int, seed=0) -> GStarPoint:
    """Random dual-group cover point; the imaginary part of Lambda is kept
    small so exp(2 pi i Lambda) stays well-conditioned for the coverings."""
    rng = _rng_for(seed)
    structure = BlockStructure.from_sizes([1] * n)
    u_plus = _random_unipotent(rng, structure, upper=True)
    u_minus = _random_unipotent(rng, structure, upper=False)
    lam = rng.uniform(-1.0, 1.0, n) + 1j * rng.uniform(-0.25, 0.25, n)
    return GStarPoint(u_plus=u_plus, lam=lam, u_minus=u_minus)


def opp_intersection_test(m, tol: float = DEFAULT_TOL) -> bool:
    """Membership in (U+ U-) intersected with the big cell U- T U+.

    True iff the UL factorization exists with identity torus part and the
    LDU factorization exists as well.
    """
    a = _as_matrix(m)
    ul = ul_factor(a, tol=tol)
    if ul is None:
        return False
    _, t, _ = ul
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(np.diag(t) - 1.0).max() > tol * scale:
        return False
    return big_cell_factor(a, tol=tol) is not None


def opp_intersection_local_dim(
    n: int,
    points: int = 20,
    seed=0,
    sv_cutoff: float = 1e-7,
    step: float = 1e-6,
) -> list[int]:
    """Sampled local dimensions of (U+ U-) cap (U- T U+) inside GL_n.

    At random interior points m = u+ u- the locus is cut out of the group by
    the UL torus part equalling the identity; the local dimension is n^2
    minus the complex Jacobian rank of that map, estimated by central
    differences and an SVD rank cutoff.
    """
    structure = BlockStructure.from_sizes([1] * n)
    dims = []
    for idx in range(points):
        rng = _rng_for(seed, idx)
        while True:
            u_plus = _random_unipotent(rng, structure, upper=True)
            u_minus = _random_unipotent(rng, structure, upper=False)
            m0 = u_plus @ u_minus
            if big_cell_factor(m0) is not None and ul_factor(m0) is not None:
                break

        def torus_part(mat: np.ndarray) -> np.ndarray:
            res = ul_factor(mat)
            if res is None:
                raise MatrixError("left the UL-factorizable locus during differencing")
            return np.diag(res[1])

        jac = np.empty((n, n * n), dtype=complex)
        col = 0
        for i in range(n):
            for j in range(n):
                bump = np.zeros((n, n), dtype=complex)
                bump[i, j] = step
                jac[:, col] = (torus_part(m0 + bump) - torus_part(m0 - bump)) / (2.0 * step)
                col += 1
        rank = int(np.sum(np.linalg.svd(jac, compute_uv=False) > sv_cutoff))
        dims.append(n * n - rank)
    return dims


# ---------------------------------------------------------------------------
# Randomized verification suite
# ---------------------------------------------------------------------------

CHECKS = (
    "moment_equivariance",
    "action_composition",
    "det_identity",
    "s_parity",
    "fusion_multiplicativity",
)


@dataclass
class VerifyReport:
    n: int
    block_sizes: tuple[int, ...]
    r: int
    trials: int
    seed: int
    tol: float
    failures_by_check: dict[str, int] = field(default_factory=dict)
    max_residual: float = 0.0

    @property
    def failures_total(self) -> int:
        return sum(self.failures_by_check.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "blocks": list(self.block_sizes),
            "r": self.r,
            "trials": self.trials,
            "seed": self.seed,
            "tol": self.tol,
            "failures_by_check": dict(sorted(self.failures_by_check.items())),
            "failures_total": self.failures_total,
            "max_residual": self.max_residual,
        }


def verify_suite(n: int, blocks, r: int, trials: int, tol: float = DEFAULT_TOL, seed: int = 0) -> VerifyReport:
    """Run the randomized moment-map identity checks.

    Per trial: moment-map equivariance under the two-sided action, the action
    composition law, det(mu_G) = det(h), preservation of the S parity pattern,
    and multiplicativity of the fused moment map.  Trials use independent
    substreams (seed, index).
    """
    if trials < 1:
        raise MatrixError(f"trials must be >= 1, got {trials}")
    structure = blocks if isinstance(blocks, BlockStructure) else BlockStructure.from_sizes(blocks)
    if structure.n != n:
        raise MatrixError(f"blocks cover {structure.n} indices, expected {n}")
    report = VerifyReport(
        n=n,
        block_sizes=tuple(len(b) for b in structure.blocks),
        r=r,
        trials=trials,
        seed=seed,
        tol=tol,
        failures_by_check={name: 0 for name in CHECKS},
    )

    def record(name: str, residual: float) -> None:
        report.max_residual = max(report.max_residual, residual)
        if residual > tol:
            report.failures_by_check[name] += 1

    for idx in range(trials):
        rng = _rng_for(seed, idx)
        p = _sample_point(rng, structure, r)
        g1, g2 = _random_invertible(rng, n), _random_invertible(rng, n)
        k1, k2 = _random_block_diag(rng, structure), _random_block_diag(rng, structure)

        mu_g, mu_h = moment_map(p)
        acted = act(g1, k1, p)
        mu_g_a, mu_h_a = moment_map(acted)
        g1_inv = np.linalg.inv(g1)
        k1_inv = np.linalg.inv(k1)
        record(
            "moment_equivariance",
            max(_rel(mu_g_a, g1 @ mu_g @ g1_inv), _rel(mu_h_a, k1 @ mu_h @ k1_inv)),
        )

        twice = act(g2, k2, acted)
        once = act(g2 @ g1, k2 @ k1, p)
        res = max(
            _rel(twice.C, once.C),
            _rel(twice.h, once.h),
            max(_rel(a, b) for a, b in zip(twice.S, once.S)),
        )
        record("action_composition", res)

        det_res = abs(np.linalg.det(mu_g) - np.linalg.det(p.h))
        record("det_identity", det_res / max(1.0, abs(np.linalg.det(p.h))))

        parity = max(
            acted.structure.unipotent_residual(s, upper=(i % 2 == 1))
            for i, s in enumerate(acted.S, start=1)
        )
        record("s_parity", parity)

        p2 = _sample_point(rng, structure, r)
        mu2, _ = moment_map(p2)
        fused = mu_g @ mu2
        fused_acted = moment_map(act(g1, k1, p))[0] @ moment_map(act(g1, k1, p2))[0]
        record("fusion_multiplicativity", _rel(fused_acted, g1 @ fused @ g1_inv))

    return report


def _sample_point(rng: np.random.Generator, structure: BlockStructure, r: int) -> FissionPoint:
    C = _random_invertible(rng, structure.n)
    S = [_random_unipotent(rng, structure, upper=(i % 2 == 1)) for i in range(1, 2 * r + 1)]
    h = _random_block_diag(rng, structure)
    return FissionPoint(structure=structure, r=r, C=C, S=S, h=h)
