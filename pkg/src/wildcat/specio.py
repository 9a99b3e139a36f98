"""Strict parsing of curve specifications, class lists, families, and graphs.

Every error names the JSON path that caused it; unknown keys are rejected so
typos cannot silently change a computation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .cartan import CartanError, RootDatum, build_abstract, build_gl
from .deform import CurveFamily, curve_family
from .fission import (
    ColouredGraph,
    ConjClass,
    Group,
    SpaceError,
    coloured_graph,
    semisimple_gl_class_dim,
)
from .irregular import CurvePoint, IrregularCurve, IrregularType, centralizer, irregular_type


class SpecError(ValueError):
    """Malformed input document; message carries the offending JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def parse_complex(text, path: str) -> complex:
    """Parse the a+bi literal grammar ("1", "-2.5i", "1+2i", "1e-3-0.5i")."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return complex(float(text), 0.0)
    if not isinstance(text, str):
        raise SpecError(path, f"expected a complex literal string, got {type(text).__name__}")
    s = text.strip().replace(" ", "")
    if not s:
        raise SpecError(path, "empty complex literal")
    if s[-1] == "i":
        body = s[:-1]
        split = None
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                split = k
                break
        if split is None:
            re_part, im_part = "0", body if body not in ("", "+", "-") else body + "1"
        else:
            re_part, im_part = body[:split], body[split:]
            if im_part in ("+", "-"):
                im_part += "1"
    else:
        re_part, im_part = s, "0"
    try:
        return complex(float(re_part), float(im_part))
    except ValueError:
        raise SpecError(path, f"malformed complex literal {text!r}") from None


def _require_keys(doc: dict, path: str, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(doc, dict):
        raise SpecError(path, f"expected an object, got {type(doc).__name__}")
    missing = required - doc.keys()
    if missing:
        raise SpecError(path, f"missing keys: {sorted(missing)}")
    unknown = doc.keys() - required - optional
    if unknown:
        raise SpecError(path, f"unknown keys: {sorted(unknown)}")


@dataclass(frozen=True)
class Options:
    dir_tol: float = 1e-9
    num_tol: float = 1e-9
    seed: int = 0
    center_correction: bool = True


def _parse_options(doc, path: str) -> Options:
    if doc is None:
        return Options()
    _require_keys(doc, path, set(), {"tol_dir", "tol_num", "seed", "center_correction"})
    opts = Options()
    if "tol_dir" in doc:
        opts = replace(opts, dir_tol=float(doc["tol_dir"]))
    if "tol_num" in doc:
        opts = replace(opts, num_tol=float(doc["tol_num"]))
    if "seed" in doc:
        opts = replace(opts, seed=int(doc["seed"]))
    if "center_correction" in doc:
        if not isinstance(doc["center_correction"], bool):
            raise SpecError(f"{path}.center_correction", "expected a boolean")
        opts = replace(opts, center_correction=doc["center_correction"])
    return opts


def _parse_group(doc, path: str) -> RootDatum:
    _require_keys(doc, path, {"type"}, {"n", "rank", "roots"})
    kind = doc["type"]
    try:
        if kind == "GL":
            if "n" not in doc:
                raise SpecError(f"{path}.n", "GL groups need n")
            return build_gl(int(doc["n"]))
        if kind == "abstract":
            if "rank" not in doc or "roots" not in doc:
                raise SpecError(path, "abstract groups need rank and roots")
            return build_abstract(int(doc["rank"]), doc["roots"])
    except CartanError as exc:
        raise SpecError(path, str(exc)) from None
    raise SpecError(f"{path}.type", f"unknown group type {kind!r}")


def _parse_irregular_type(doc, datum: RootDatum, path: str) -> IrregularType:
    if not isinstance(doc, list):
        raise SpecError(path, f"expected a list of coefficient vectors, got {type(doc).__name__}")
    coeffs = []
    for i, vec in enumerate(doc):
        if not isinstance(vec, list):
            raise SpecError(f"{path}[{i}]", "expected a coefficient vector")
        if len(vec) != datum.rank:
            raise SpecError(f"{path}[{i}]", f"vector length {len(vec)} != rank {datum.rank}")
        coeffs.append([parse_complex(c, f"{path}[{i}][{j}]") for j, c in enumerate(vec)])
    try:
        return irregular_type(datum, coeffs)
    except CartanError as exc:
        raise SpecError(path, str(exc)) from None


def parse_curve_spec(doc) -> tuple[IrregularCurve, Options]:
    """Parse a curve specification document into a curve plus options."""
    _require_keys(doc, "$", {"group", "genus", "points"}, {"options"})
    datum = _parse_group(doc["group"], "$.group")
    if not isinstance(doc["genus"], int) or isinstance(doc["genus"], bool) or doc["genus"] < 0:
        raise SpecError("$.genus", f"expected a nonnegative integer, got {doc['genus']!r}")
    if not isinstance(doc["points"], list) or not doc["points"]:
        raise SpecError("$.points", "at least one marked point is required")
    points = []
    labels = set()
    for i, pt in enumerate(doc["points"]):
        path = f"$.points[{i}]"
        _require_keys(pt, path, {"label", "irregular_type"}, {"position"})
        label = pt["label"]
        if not isinstance(label, str) or not label:
            raise SpecError(f"{path}.label", "expected a nonempty string")
        if label in labels:
            raise SpecError(f"{path}.label", f"duplicate label {label!r}")
        labels.add(label)
        q = _parse_irregular_type(pt["irregular_type"], datum, f"{path}.irregular_type")
        position = None
        if "position" in pt:
            position = parse_complex(pt["position"], f"{path}.position")
        points.append(CurvePoint(label=label, q=q, position=position))
    options = _parse_options(doc.get("options"), "$.options")
    try:
        curve = IrregularCurve(genus=doc["genus"], points=tuple(points))
    except CartanError as exc:
        raise SpecError("$", str(exc)) from None
    return curve, options


def parse_classes(doc, curve: IrregularCurve, path: str = "$.classes") -> list[ConjClass]:
    """One formal-monodromy class per marked point, matched by label.

    Each entry gives either a dimension directly, eigenvalue multiplicities
    (full GL points only), or point: true for a zero-dimensional class.
    """
    if not isinstance(doc, list):
        raise SpecError(path, "expected a list of classes")
    by_label = {entry.get("label"): (i, entry) for i, entry in enumerate(doc) if isinstance(entry, dict)}
    out = []
    for pi, point in enumerate(curve.points):
        if point.label not in by_label:
            raise SpecError(path, f"missing class for point {point.label!r}")
        i, entry = by_label[point.label]
        epath = f"{path}[{i}]"
        _require_keys(entry, epath, {"label"}, {"dim", "multiplicities", "point"})
        group = Group.from_levi(centralizer(point.q))
        if "dim" in entry:
            dim = int(entry["dim"])
        elif "multiplicities" in entry:
            if group.kind != "gl" or group.blocks is None or len(group.blocks) != 1:
                raise SpecError(
                    f"{epath}.multiplicities",
                    f"multiplicities apply to full GL groups, point group is {group.name()}",
                )
            try:
                dim = semisimple_gl_class_dim(len(group.blocks[0]), entry["multiplicities"])
            except SpaceError as exc:
                raise SpecError(f"{epath}.multiplicities", str(exc)) from None
        elif entry.get("point") is True:
            dim = 0
        else:
            raise SpecError(epath, "need one of dim, multiplicities, or point: true")
        try:
            out.append(ConjClass(group=group, dim=dim, label=f"C[{point.label}]"))
        except SpaceError as exc:
            raise SpecError(epath, str(exc)) from None
    if len(doc) != len(curve.points):
        raise SpecError(path, f"expected {len(curve.points)} classes, got {len(doc)}")
    return out


def parse_family(doc) -> tuple[CurveFamily, Options]:
    """A family document: a base spec plus (t, irregular-type overlay) pairs."""
    _require_keys(doc, "$", {"base", "family"})
    base_curve, options = parse_curve_spec(doc["base"])
    if not isinstance(doc["family"], list) or len(doc["family"]) < 2:
        raise SpecError("$.family", "expected a list of at least 2 (t, overlay) pairs")
    samples = []
    for i, pair in enumerate(doc["family"]):
        path = f"$.family[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SpecError(path, "expected a [t, overlay] pair")
        t_raw, overlay = pair
        if isinstance(t_raw, bool) or not isinstance(t_raw, (int, float)):
            raise SpecError(f"{path}[0]", "expected a real parameter value")
        _require_keys(overlay, f"{path}[1]", set(), {"points"})
        replacement: dict[str, IrregularType] = {}
        for j, pt in enumerate(overlay.get("points", [])):
            ppath = f"{path}[1].points[{j}]"
            _require_keys(pt, ppath, {"label", "irregular_type"})
            if pt["label"] not in {p.label for p in base_curve.points}:
                raise SpecError(f"{ppath}.label", f"unknown point label {pt['label']!r}")
            replacement[pt["label"]] = _parse_irregular_type(
                pt["irregular_type"], base_curve.datum, f"{ppath}.irregular_type"
            )
        points = tuple(
            CurvePoint(label=p.label, q=replacement.get(p.label, p.q), position=p.position)
            for p in base_curve.points
        )
        samples.append((float(t_raw), IrregularCurve(genus=base_curve.genus, points=points)))
    try:
        return curve_family(samples), options
    except CartanError as exc:
        raise SpecError("$.family", str(exc)) from None


def parse_graph(doc) -> tuple[ColouredGraph, dict[str, int], bool]:
    """A coloured-graph document: nodes with dimensions, edges, optional reduction flag."""
    _require_keys(doc, "$", {"nodes", "edges"}, {"reduce"})
    if not isinstance(doc["nodes"], list) or not doc["nodes"]:
        raise SpecError("$.nodes", "expected a nonempty list of nodes")
    names, dims = [], {}
    for i, node in enumerate(doc["nodes"]):
        path = f"$.nodes[{i}]"
        _require_keys(node, path, {"id", "dim"})
        name = str(node["id"])
        if int(node["dim"]) < 1:
            raise SpecError(f"{path}.dim", "node dimensions must be positive")
        names.append(name)
        dims[name] = int(node["dim"])
    edges, colours = [], []
    for i, edge in enumerate(doc["edges"]):
        path = f"$.edges[{i}]"
        if isinstance(edge, list) and len(edge) == 2:
            edges.append((str(edge[0]), str(edge[1])))
            colours.append("0")
        elif isinstance(edge, dict):
            _require_keys(edge, path, {"a", "b"}, {"colour"})
            edges.append((str(edge["a"]), str(edge["b"])))
            colours.append(str(edge.get("colour", "0")))
        else:
            raise SpecError(path, "expected [a, b] or {a, b, colour}")
    do_reduce = doc.get("reduce", False)
    if not isinstance(do_reduce, bool):
        raise SpecError("$.reduce", "expected a boolean")
    try:
        graph = coloured_graph(names, edges, colours)
    except SpaceError as exc:
        raise SpecError("$", str(exc)) from None
    return graph, dims, do_reduce
