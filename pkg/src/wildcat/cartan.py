"""Root data for reductive groups: the concrete GL_n model and abstract root lists."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Root = tuple[int, ...]


class CartanError(ValueError):
    """Invalid root datum, root, or Levi request."""


def negate(root: Root) -> Root:
    return tuple(-c for c in root)


def _validate_root(root: Sequence[int], rank: int) -> Root:
    r = tuple(int(c) for c in root)
    if len(r) != rank:
        raise CartanError(f"root {r} has length {len(r)}, expected rank {rank}")
    if all(c == 0 for c in r):
        raise CartanError("zero vector is not a root")
    return r


@dataclass(frozen=True)
class RootDatum:
    """A connected reductive group presented by its rank and roots.

    ``kind`` is "GL" for the matrix model (roots e_i - e_j, dim n^2) or
    "abstract" for a bare root list.  In both cases dim_g = dim_t + #roots.
    """

    kind: str
    rank: int
    roots: tuple[Root, ...]
    n: int | None = None

    @property
    def dim_t(self) -> int:
        return self.rank

    @property
    def dim_g(self) -> int:
        return self.rank + len(self.roots)

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    @cached_property
    def center_dim(self) -> int:
        """Dimension of the center: corank of the root span (1 for GL_n)."""
        if not self.roots:
            return self.rank
        rk = np.linalg.matrix_rank(np.array(self.roots, dtype=float))
        return self.rank - int(rk)

    def has_root(self, root: Root) -> bool:
        return tuple(root) in self.root_set

    def name(self) -> str:
        if self.kind == "GL":
            return f"GL({self.n})"
        return f"abstract(rank={self.rank},roots={len(self.roots)})"

    def __repr__(self) -> str:  # keep reprs short in traces
        return self.name()


def build_gl(n: int) -> RootDatum:
    """GL_n datum: roots e_i - e_j for i != j, dim_g = n^2, dim_t = n."""
    if n < 1:
        raise CartanError(f"GL_n needs n >= 1, got {n}")
    roots = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = [0] * n
            v[i], v[j] = 1, -1
            roots.append(tuple(v))
    return RootDatum(kind="GL", rank=n, roots=tuple(roots), n=n)


def build_abstract(rank: int, roots: Iterable[Sequence[int]]) -> RootDatum:
    """Abstract datum from an explicit root list; roots must come in +- pairs."""
    if rank < 1:
        raise CartanError(f"rank must be >= 1, got {rank}")
    rs = tuple(_validate_root(r, rank) for r in roots)
    if len(set(rs)) != len(rs):
        raise CartanError("duplicate roots")
    missing = [r for r in rs if negate(r) not in set(rs)]
    if missing:
        raise CartanError(f"roots are not closed under negation: {missing[0]} lacks its negative")
    return RootDatum(kind="abstract", rank=rank, roots=rs)


@dataclass(frozen=True)
class LeviDatum:
    """A Levi subgroup: the roots that vanish plus, for GL_n, its ordered blocks."""

    parent: RootDatum
    vanishing: frozenset[Root]
    blocks: tuple[tuple[int, ...], ...] | None = None

    @property
    def dim(self) -> int:
        # rank + #vanishing; for GL_n this equals sum of squared block sizes
        return self.parent.rank + len(self.vanishing)

    @property
    def block_sizes(self) -> tuple[int, ...] | None:
        if self.blocks is None:
            return None
        return tuple(len(b) for b in self.blocks)

    def is_full(self) -> bool:
        return len(self.vanishing) == len(self.parent.roots)

    def is_torus(self) -> bool:
        return not self.vanishing

    def contains(self, other: "LeviDatum") -> bool:
        return other.vanishing <= self.vanishing

    def name(self) -> str:
        if self.blocks is not None:
            n = self.parent.n
            if len(self.blocks) == 1:
                return f"GL({n})"
            if all(len(b) == 1 for b in self.blocks):
                return f"T({n})"
            return "x".join(f"GL({len(b)})" for b in self.blocks)
        return f"levi(rank={self.parent.rank},roots={len(self.vanishing)})"

    def __repr__(self) -> str:
        return self.name()


def _gl_blocks_of(vanishing: frozenset[Root], n: int) -> tuple[tuple[int, ...], ...]:
    """Equivalence classes of i ~ j when e_i - e_j vanishes, in index order."""
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for root in vanishing:
        i = root.index(1)
        j = root.index(-1)
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(groups[k]) for k in sorted(groups))


def levi_of_vanishing(datum: RootDatum, vanishing: Iterable[Root]) -> LeviDatum:
    """Levi whose roots are exactly the given vanishing set.

    The set must be closed under negation, and for GL_n it must be the full
    root set of an ordered partition of the indices.
    """
    van = frozenset(tuple(r) for r in vanishing)
    for r in van:
        if not datum.has_root(r):
            raise CartanError(f"{r} is not a root of {datum.name()}")
        if negate(r) not in van:
            raise CartanError(f"vanishing set not symmetric: missing {negate(r)}")

    if datum.kind != "GL":
        return LeviDatum(parent=datum, vanishing=van)

    assert datum.n is not None
    blocks = _gl_blocks_of(van, datum.n)
    closure = set()
    for block in blocks:
        for i in block:
            for j in block:
                if i == j:
                    continue
                v = [0] * datum.n
                v[i], v[j] = 1, -1
                closure.add(tuple(v))
    if closure != set(van):
        raise CartanError("vanishing set does not arise from an ordered partition")
    levi = LeviDatum(parent=datum, vanishing=van, blocks=blocks)
    assert levi.dim == sum(len(b) ** 2 for b in blocks)
    return levi


def full_levi(datum: RootDatum) -> LeviDatum:
    """The group itself, viewed as a Levi (all roots vanish)."""
    return levi_of_vanishing(datum, datum.roots)


def torus_levi(datum: RootDatum) -> LeviDatum:
    """The maximal torus, viewed as a Levi (no roots vanish)."""
    return levi_of_vanishing(datum, ())
