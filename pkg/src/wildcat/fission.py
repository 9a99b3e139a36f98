"""Dimension calculus for quasi-Hamiltonian spaces built from doubles, classes,
and fission spaces, closed under fusion, gluing, and reduction.

Every space is an immutable expression tree carrying its acting group factors,
its dimension, and a derivation trace.  The calculus only tracks dimensions and
group bookkeeping: no two-form is ever constructed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import LeviDatum, Root, RootDatum
from .irregular import IrregularCurve, IrregularType, centralizer, centralizer_chain
from .stokes import stokes_budget


class SpaceError(ValueError):
    """Mismatched groups, classes, or malformed space requests."""


# ---------------------------------------------------------------------------
# Group handles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Group:
    """A reductive group factor in an acting list.

    GL-type groups are ordered block products inside an ambient GL_n (a full
    group is the single-block case, a maximal torus the all-singleton case).
    Abstract groups carry their rank and root set.  ``ambient_center`` is the
    center dimension of the ambient group, used for stabilizer corrections.
    ``tag`` distinguishes graph-node copies of equal block shape.
    """

    kind: str
    blocks: tuple[tuple[int, ...], ...] | None
    ambient: int | None
    rank: int
    roots: frozenset[Root] | None
    ambient_center: int
    tag: str = ""

    @classmethod
    def from_datum(cls, datum: RootDatum) -> "Group":
        if datum.kind == "GL":
            assert datum.n is not None
            return cls(
                kind="gl",
                blocks=(tuple(range(datum.n)),),
                ambient=datum.n,
                rank=datum.rank,
                roots=None,
                ambient_center=datum.center_dim,
            )
        return cls(
            kind="abstract",
            blocks=None,
            ambient=None,
            rank=datum.rank,
            roots=frozenset(datum.roots),
            ambient_center=datum.center_dim,
        )

    @classmethod
    def from_levi(cls, levi: LeviDatum) -> "Group":
        if levi.blocks is not None:
            return cls(
                kind="gl",
                blocks=levi.blocks,
                ambient=levi.parent.n,
                rank=levi.parent.rank,
                roots=None,
                ambient_center=levi.parent.center_dim,
            )
        return cls(
            kind="abstract",
            blocks=None,
            ambient=None,
            rank=levi.parent.rank,
            roots=levi.vanishing,
            ambient_center=levi.parent.center_dim,
        )

    @classmethod
    def gl_node(cls, dim: int, tag: str) -> "Group":
        """A standalone GL(dim) labelled by a graph node."""
        return cls(
            kind="gl",
            blocks=(tuple(range(dim)),),
            ambient=dim,
            rank=dim,
            roots=None,
            ambient_center=1,
            tag=tag,
        )

    @property
    def dim(self) -> int:
        if self.kind == "gl":
            assert self.blocks is not None
            return sum(len(b) ** 2 for b in self.blocks)
        assert self.roots is not None
        return self.rank + len(self.roots)

    @property
    def is_abelian(self) -> bool:
        if self.kind == "gl":
            assert self.blocks is not None
            return all(len(b) == 1 for b in self.blocks)
        return not self.roots

    def name(self) -> str:
        if self.kind == "gl":
            assert self.blocks is not None and self.ambient is not None
            if len(self.blocks) == 1 and len(self.blocks[0]) == self.ambient:
                base = f"GL({self.ambient})"
            elif all(len(b) == 1 for b in self.blocks):
                base = f"T({self.ambient})"
            else:
                base = "x".join(f"GL({len(b)})" for b in self.blocks)
        else:
            assert self.roots is not None
            base = f"G(rank={self.rank},roots={len(self.roots)})"
        return f"{base}@{self.tag}" if self.tag else base

    def __repr__(self) -> str:
        return self.name()


def as_group(g) -> Group:
    if isinstance(g, Group):
        return g
    if isinstance(g, RootDatum):
        return Group.from_datum(g)
    if isinstance(g, LeviDatum):
        return Group.from_levi(g)
    raise SpaceError(f"cannot interpret {g!r} as a group")


def _is_levi_of(h: Group, g: Group) -> bool:
    if h == g:
        return True
    if h.kind == "gl" and g.kind == "gl":
        if h.ambient != g.ambient or h.tag != g.tag:
            return False
        assert h.blocks is not None and g.blocks is not None
        return all(any(set(hb) <= set(gb) for gb in g.blocks) for hb in h.blocks)
    if h.kind == "abstract" and g.kind == "abstract":
        assert h.roots is not None and g.roots is not None
        return h.rank == g.rank and h.roots <= g.roots
    return False


# ---------------------------------------------------------------------------
# Conjugacy classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjClass:
    """A conjugacy class of ``group`` with a caller-supplied dimension."""

    group: Group
    dim: int
    label: str = "C"

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise SpaceError(f"class dimension must be >= 0, got {self.dim}")


def point_class(group, label: str = "1") -> ConjClass:
    return ConjClass(group=as_group(group), dim=0, label=label)


def semisimple_gl_class_dim(n: int, multiplicities) -> int:
    """Dimension of a semisimple GL_n class with the given eigenvalue multiplicities."""
    mults = [int(m) for m in multiplicities]
    if any(m < 1 for m in mults) or sum(mults) != n:
        raise SpaceError(f"multiplicities {mults} do not partition {n}")
    return n * n - sum(m * m for m in mults)


def regular_gl_class(group, label: str = "C") -> ConjClass:
    """A regular semisimple class (all eigenvalue multiplicities 1)."""
    g = as_group(group)
    if g.kind != "gl" or g.blocks is None or len(g.blocks) != 1:
        raise SpaceError("regular_gl_class needs a full GL factor")
    n = len(g.blocks[0])
    return ConjClass(group=g, dim=semisimple_gl_class_dim(n, [1] * n), label=label)


# ---------------------------------------------------------------------------
# Space expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceExpr:
    op: str
    label: str
    dim: int
    acting: tuple[Group, ...]
    children: tuple["SpaceExpr", ...] = ()
    flags: tuple[str, ...] = ()
    trace: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.flags)

    def acting_names(self) -> list[str]:
        return [g.name() for g in self.acting]

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "label": self.label,
            "dim": self.dim,
            "acting": self.acting_names(),
            "flags": list(self.flags),
            "trace": list(self.trace),
            "children": [c.to_json() for c in self.children],
        }


def _remove_one(acting: tuple[Group, ...], g: Group, what: str) -> tuple[Group, ...]:
    out = list(acting)
    try:
        out.remove(g)
    except ValueError:
        raise SpaceError(f"{what}: group {g.name()} does not act (acting: {[a.name() for a in acting]})")
    return tuple(out)


def double(group) -> SpaceExpr:
    """The internally fused double of a group: dimension twice the group's."""
    g = as_group(group)
    return SpaceExpr(
        op="double",
        label=f"D({g.name()})",
        dim=2 * g.dim,
        acting=(g,),
        trace=(f"D({g.name()}): dim 2*{g.dim} = {2 * g.dim}",),
    )


def class_space(c: ConjClass) -> SpaceExpr:
    return SpaceExpr(
        op="class",
        label=f"{c.label}<{c.group.name()}>",
        dim=c.dim,
        acting=(c.group,),
        trace=(f"class {c.label} of {c.group.name()}: dim {c.dim}",),
    )


def fission_space(g, h, r: int) -> SpaceExpr:
    """The one-pole building block G x (U+ x U-)^r x H for a Levi H of G.

    dim = dim G + dim H + r*(dim G - dim H); H = G gives the double.
    """
    gg, hh = as_group(g), as_group(h)
    if r < 1:
        raise SpaceError(f"fission space needs r >= 1, got {r}")
    if not _is_levi_of(hh, gg):
        raise SpaceError(f"{hh.name()} is not a Levi subgroup of {gg.name()}")
    dim = gg.dim + hh.dim + r * (gg.dim - hh.dim)
    return SpaceExpr(
        op="fission",
        label=f"A^{r}({gg.name()},{hh.name()})",
        dim=dim,
        acting=(gg, hh),
        trace=(
            f"A^{r}({gg.name()},{hh.name()}): dim {gg.dim}+{hh.dim}+{r}*({gg.dim - hh.dim}) = {dim}",
        ),
    )


def space_A(q: IrregularType) -> SpaceExpr:
    """The space of one-pole Stokes data for Q: dim G + dim C_G(Q) + Stokes budget.

    For tame Q this is the double of G.
    """
    g = Group.from_datum(q.datum)
    h = Group.from_levi(centralizer(q))
    budget = stokes_budget(q)
    dim = g.dim + h.dim + budget
    return SpaceExpr(
        op="space_of_q",
        label=f"A(Q^{q.order})",
        dim=dim,
        acting=(g, h),
        trace=(
            f"A(Q): dim {g.dim} + {h.dim} + budget {budget} = {dim} (H = {h.name()})",
        ),
    )


def fuse(left: SpaceExpr, right: SpaceExpr, over) -> SpaceExpr:
    """Fusion over a shared group: dimensions add, one acting copy is kept."""
    g = as_group(over)
    if g not in left.acting:
        raise SpaceError(f"fuse: {g.name()} does not act on the left operand")
    acting = left.acting + _remove_one(right.acting, g, "fuse")
    dim = left.dim + right.dim
    return SpaceExpr(
        op="fuse",
        label=f"({left.label} * {right.label})",
        dim=dim,
        acting=acting,
        children=(left, right),
        flags=left.flags + right.flags,
        trace=(f"fuse over {g.name()}: {left.dim}+{right.dim} = {dim}",),
    )


def glue(left: SpaceExpr, right: SpaceExpr, over) -> SpaceExpr:
    """Gluing over a shared group: fusion then reduction, absorbing the group."""
    g = as_group(over)
    acting = _remove_one(left.acting, g, "glue") + _remove_one(right.acting, g, "glue")
    dim = left.dim + right.dim - 2 * g.dim
    return SpaceExpr(
        op="glue",
        label=f"({left.label} o {right.label})",
        dim=dim,
        acting=acting,
        children=(left, right),
        flags=left.flags + right.flags,
        trace=(f"glue over {g.name()}: {left.dim}+{right.dim}-2*{g.dim} = {dim}",),
    )


def reduce_space(
    x: SpaceExpr,
    by,
    at: ConjClass,
    center_correction: bool | None = None,
    center_params: int | None = None,
) -> SpaceExpr:
    """Multiplicative symplectic quotient by ``by`` at the class ``at``.

    dim = dim x - 2 dim by + dim at + correction.  The correction accounts for
    central parameters of ``by`` acting trivially: by default it turns on only
    when this reduction consumes the last acting factor (full conjugation-type
    quotients), contributing 2 per trivially-acting central parameter; pass
    ``center_correction``/``center_params`` to override.  Degenerate requests
    (negative naive dimension, or a central point class for a nonabelian
    group) are flagged, not hidden.
    """
    g = as_group(by)
    if at.group != g:
        raise SpaceError(f"class {at.label} belongs to {at.group.name()}, not {g.name()}")
    remaining = _remove_one(x.acting, g, "reduce")
    naive = x.dim - 2 * g.dim + at.dim
    corr_on = (not remaining) if center_correction is None else center_correction
    params = g.ambient_center if center_params is None else center_params
    corr = 2 * params if corr_on else 0
    dim = naive + corr
    flags = list(x.flags)
    if naive < 0:
        flags.append("naive_negative")
    if at.dim == 0 and not g.is_abelian:
        flags.append("central_point_class")
    return SpaceExpr(
        op="reduce",
        label=f"({x.label} // {g.name()})",
        dim=dim,
        acting=remaining,
        children=(x,),
        flags=tuple(flags),
        trace=(
            f"reduce by {g.name()} at {at.label} (dim {at.dim}): "
            f"{x.dim}-2*{g.dim}+{at.dim}+corr {corr} = {dim}",
        ),
    )


# ---------------------------------------------------------------------------
# Nesting and curve-level products
# ---------------------------------------------------------------------------


def nesting_decomposition(q: IrregularType) -> SpaceExpr:
    """Glue fission spaces end to end along the centralizer chain of Q.

    Levels where the chain does not grow contribute trivial pieces and are
    dropped, so a one-level type yields the single fission space.  The result
    must match space_A(Q) in dimension exactly.
    """
    if q.is_tame:
        raise SpaceError("tame type has no nesting decomposition; use the double")
    chain = centralizer_chain(q)
    groups = [Group.from_levi(h) for h in chain]
    groups.append(Group.from_datum(q.datum))  # H_{r+1} = G
    pieces = []
    for i in range(q.order, 0, -1):
        top, bottom = groups[i], groups[i - 1]
        if top != bottom:
            pieces.append(fission_space(top, bottom, i))
    if not pieces:
        expr = fission_space(groups[-1], groups[-1], q.order)
    else:
        expr = pieces[0]
        for piece in pieces[1:]:
            expr = glue(expr, piece, over=piece.acting[0])
    expected = space_A(q).dim
    if expr.dim != expected:
        raise SpaceError(f"nesting dimension {expr.dim} != direct dimension {expected}")
    return expr


def hom_stokes(curve: IrregularCurve) -> SpaceExpr:
    """The space of Stokes representations of a curve as a fusion product.

    dim = (2g-2) dim G + sum of the per-point space dimensions; the acting
    factors are the formal monodromy groups H_1, ..., H_m.
    """
    g = Group.from_datum(curve.datum)
    parts = [space_A(p.q) for p in curve.points]
    left_factors = [double(g) for _ in range(curve.genus)] + parts[:-1]
    if left_factors:
        left = left_factors[0]
        for factor in left_factors[1:]:
            left = fuse(left, factor, g)
        expr = glue(left, parts[-1], g)
    else:
        expr = reduce_space(parts[-1], g, point_class(g), center_correction=False)
    expected = (2 * curve.genus - 2) * g.dim + sum(p.dim for p in parts)
    assert expr.dim == expected
    return expr


@dataclass(frozen=True)
class LeafReport:
    """A reduced-space dimension with its degeneracy flags and derivation."""

    dim: int
    flags: tuple[str, ...]
    expr: SpaceExpr

    def to_json(self) -> dict:
        return {"dim": self.dim, "flags": list(self.flags), "expr": self.expr.to_json()}


def formal_monodromy_groups(curve: IrregularCurve) -> list[Group]:
    return [Group.from_levi(centralizer(p.q)) for p in curve.points]


def wild_leaf_dim(
    curve: IrregularCurve,
    classes: list[ConjClass],
    center_correction: bool = True,
) -> LeafReport:
    """Dimension of the symplectic leaf fixing one formal-monodromy class per point.

    dim = dim Hom - 2 dim H + sum of class dimensions, plus 2 per
    trivially-acting central parameter of G when the correction is on.
    """
    hs = formal_monodromy_groups(curve)
    if len(classes) != len(hs):
        raise SpaceError(f"expected {len(hs)} classes, got {len(classes)}")
    for cls, h in zip(classes, hs):
        if cls.group != h:
            raise SpaceError(
                f"class {cls.label} is a class of {cls.group.name()}, "
                f"but the point's formal monodromy group is {h.name()}"
            )
    expr = hom_stokes(curve)
    for i, cls in enumerate(classes):
        last = i == len(classes) - 1
        expr = reduce_space(
            expr,
            cls.group,
            cls,
            center_correction=center_correction and last,
            center_params=curve.datum.center_dim if last else None,
        )
    flags = list(expr.flags)
    if expr.dim < 0:
        flags.append("negative_dimension")
    return LeafReport(dim=expr.dim, flags=tuple(dict.fromkeys(flags)), expr=expr)


# ---------------------------------------------------------------------------
# Coloured graphs and multiplicative quiver blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColouredGraph:
    """An undirected graph with edges coloured by multipartite piece."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    colours: tuple[str, ...]


def coloured_graph(nodes, edges, colours=None) -> ColouredGraph:
    node_list = tuple(str(n) for n in nodes)
    if len(set(node_list)) != len(node_list):
        raise SpaceError(f"duplicate graph nodes: {node_list}")
    edge_list = []
    seen = set()
    for e in edges:
        a, b = str(e[0]), str(e[1])
        if a == b:
            raise SpaceError(f"loop edge at node {a}")
        if a not in node_list or b not in node_list:
            raise SpaceError(f"edge ({a},{b}) uses undeclared nodes")
        key = frozenset((a, b))
        if key in seen:
            raise SpaceError(f"duplicate edge ({a},{b})")
        seen.add(key)
        edge_list.append((a, b))
    cols = tuple(str(c) for c in colours) if colours is not None else ("0",) * len(edge_list)
    if len(cols) != len(edge_list):
        raise SpaceError("one colour per edge required")
    return ColouredGraph(nodes=node_list, edges=tuple(edge_list), colours=cols)


def _complement_parts(nodes: list[str], edges: set[frozenset[str]]) -> list[list[str]]:
    """Connected components of the complement graph, in node order."""
    parts: list[list[str]] = []
    assigned: dict[str, int] = {}
    for start in nodes:
        if start in assigned:
            continue
        comp = [start]
        assigned[start] = len(parts)
        queue = [start]
        while queue:
            u = queue.pop()
            for v in nodes:
                if v in assigned or v == u:
                    continue
                if frozenset((u, v)) not in edges:
                    assigned[v] = len(parts)
                    comp.append(v)
                    queue.append(v)
        parts.append(sorted(comp, key=nodes.index))
    return parts


@dataclass
class GraphBlocks:
    rep_dim: int
    expr: SpaceExpr
    node_groups: dict[str, Group]
    n_components: int = 1


def graph_blocks(graph: ColouredGraph, dims: dict[str, int]) -> GraphBlocks:
    """Invertible-representation blocks of a coloured graph.

    rep_dim = 2 * sum of d_i*d_j over edges (both directions of each edge).
    Each colour class must span a complete multipartite piece; a piece with
    parts P_a is presented as a reduction of fission spaces for
    GL(N) > prod_a GL(D_a) > prod_i GL(d_i), and pieces are fused over shared
    node groups so dimensions stay additive.
    """
    for node in graph.nodes:
        if node not in dims:
            raise SpaceError(f"missing dimension for node {node}")
        if int(dims[node]) < 1:
            raise SpaceError(f"node {node} needs a positive dimension")
    node_groups = {node: Group.gl_node(int(dims[node]), tag=node) for node in graph.nodes}
    rep_dim = 2 * sum(int(dims[a]) * int(dims[b]) for a, b in graph.edges)

    by_colour: dict[str, list[tuple[str, str]]] = {}
    for edge, colour in zip(graph.edges, graph.colours):
        by_colour.setdefault(colour, []).append(edge)

    blocks: list[SpaceExpr] = []
    for colour in sorted(by_colour):
        piece_edges = by_colour[colour]
        edge_keys = {frozenset(e) for e in piece_edges}
        piece_nodes = sorted({n for e in piece_edges for n in e}, key=graph.nodes.index)
        parts = _complement_parts(piece_nodes, edge_keys)
        part_of = {n: i for i, part in enumerate(parts) for n in part}
        for a, b in piece_edges:
            if part_of[a] == part_of[b]:
                raise SpaceError(f"colour {colour} is not complete multipartite: edge ({a},{b}) inside a part")
        for i, pa in enumerate(parts):
            for pb in parts[i + 1 :]:
                for a in pa:
                    for b in pb:
                        if frozenset((a, b)) not in edge_keys:
                            raise SpaceError(
                                f"colour {colour} is not complete multipartite: missing edge ({a},{b})"
                            )

        ordered_nodes = [n for part in parts for n in part]
        d = {n: int(dims[n]) for n in ordered_nodes}
        total = sum(d.values())
        offsets: dict[str, int] = {}
        pos = 0
        for n in ordered_nodes:
            offsets[n] = pos
            pos += d[n]
        big = Group.gl_node(total, tag="")
        node_blocks = tuple(tuple(range(offsets[n], offsets[n] + d[n])) for n in ordered_nodes)
        fine = Group(kind="gl", blocks=node_blocks, ambient=total, rank=total, roots=None, ambient_center=1)
        if all(len(part) == 1 for part in parts):
            inner = reduce_space(fission_space(big, fine, 2), big, point_class(big))
        else:
            part_blocks = []
            for part in parts:
                idx: list[int] = []
                for n in part:
                    idx.extend(range(offsets[n], offsets[n] + d[n]))
                part_blocks.append(tuple(idx))
            coarse = Group(
                kind="gl", blocks=tuple(part_blocks), ambient=total, rank=total, roots=None, ambient_center=1
            )
            glued = glue(fission_space(big, coarse, 2), fission_space(coarse, fine, 1), coarse)
            inner = reduce_space(glued, big, point_class(big))
        piece_rep_dim = 2 * sum(d[a] * d[b] for a, b in piece_edges)
        assert inner.dim == piece_rep_dim
        blocks.append(
            SpaceExpr(
                op="graph_block",
                label=f"Rep*[{colour}]",
                dim=piece_rep_dim,
                acting=tuple(node_groups[n] for n in piece_nodes),
                children=(inner,),
                trace=(f"block {colour}: rep dim {piece_rep_dim} over nodes {piece_nodes}",),
            )
        )
    touched = {n for e in graph.edges for n in e}
    for node in graph.nodes:
        if node not in touched:
            blocks.append(
                SpaceExpr(
                    op="graph_block",
                    label=f"Rep*[node {node}]",
                    dim=0,
                    acting=(node_groups[node],),
                    trace=(f"isolated node {node}: rep dim 0",),
                )
            )

    expr = blocks[0]
    for block in blocks[1:]:
        shared = [g for g in block.acting if g in expr.acting]
        acting = expr.acting + tuple(g for g in block.acting if g not in expr.acting)
        expr = SpaceExpr(
            op="fuse",
            label=f"({expr.label} * {block.label})",
            dim=expr.dim + block.dim,
            acting=acting,
            children=(expr, block),
            trace=(f"fuse blocks over {[g.name() for g in shared]}: {expr.dim}+{block.dim}",),
        )
    assert expr.dim == rep_dim

    adjacency: dict[str, set[str]] = {n: set() for n in graph.nodes}
    for a, b in graph.edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen: set[str] = set()
    n_components = 0
    for node in graph.nodes:
        if node in seen:
            continue
        n_components += 1
        stack = [node]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adjacency[u])
    return GraphBlocks(rep_dim=rep_dim, expr=expr, node_groups=node_groups, n_components=n_components)


def reduce_graph_blocks(gb: GraphBlocks, center_correction: bool = True) -> LeafReport:
    """Moment-map reduction of a graph block space by all its node groups.

    Reduces at a generic point of each node torus; the correction contributes
    2 per connected component of the graph (one trivially-acting scalar each).
    """
    expr = gb.expr
    groups = list(expr.acting)
    for i, g in enumerate(groups):
        last = i == len(groups) - 1
        expr = reduce_space(
            expr,
            g,
            point_class(g, label="q"),
            center_correction=center_correction and last,
            center_params=gb.n_components if last else None,
        )
    flags = list(expr.flags)
    if expr.dim < 0:
        flags.append("negative_dimension")
    return LeafReport(dim=expr.dim, flags=tuple(dict.fromkeys(flags)), expr=expr)
