"""FastAPI service exposing the analysis commands over JSON.

The handlers here are the single implementation behind both the HTTP
endpoints and the command-line client: both paths produce byte-identical
canonical reports.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Response
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import deform as deform_mod
from . import matrix_real, report, specio, stokes
from .irregular import centralizer, levels
from .fission import (
    SpaceError,
    graph_blocks,
    hom_stokes,
    nesting_decomposition,
    reduce_graph_blocks,
    space_A,
    wild_leaf_dim,
)

COMMANDS = ("analyze", "dims", "verify", "deform", "quiver")


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    spec: dict
    dir_tol: float | None = Field(default=None, gt=0.0)


class DimsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    spec: dict
    classes: list[dict] | None = None
    center_correction: bool | None = None


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n: int = Field(ge=1)
    blocks: list[int] = Field(min_length=1)
    r: int = Field(ge=1)
    trials: int = Field(default=1000, ge=1)
    tol: float = Field(default=1e-9, gt=0.0)
    seed: int = 0


class DeformRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    base: dict
    family: list


class QuiverRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    nodes: list[dict]
    edges: list
    reduce: bool = False


REQUEST_MODELS = {
    "analyze": AnalyzeRequest,
    "dims": DimsRequest,
    "verify": VerifyRequest,
    "deform": DeformRequest,
    "quiver": QuiverRequest,
}


def _angle_payload(rep: stokes.StokesReport) -> dict:
    return {
        "budget": rep.budget,
        "halo_punctures": rep.halo_punctures,
        "directions": [
            {
                "angle": d.angle,
                "stokes_dim": d.stokes_dim,
                "support": sorted(list(r) for r in d.support),
                "witnesses": [
                    {
                        "root": list(w.root),
                        "degree": w.degree,
                        "leading_coeff": w.leading_coeff,
                        "angle": w.angle,
                    }
                    for w in sorted(d.witnesses, key=lambda w: (w.angle, w.root))
                ],
            }
            for d in rep.directions
        ],
    }


def handle_analyze(req: AnalyzeRequest) -> dict:
    curve, options = specio.parse_curve_spec(req.spec)
    tol = req.dir_tol if req.dir_tol is not None else options.dir_tol
    points = []
    for point in curve.points:
        rep = stokes.singular_directions(point.q, tol=tol)
        payload = _angle_payload(rep)
        payload["label"] = point.label
        payload["levels"] = sorted(levels(point.q))
        payload["formal_group"] = centralizer(point.q).name()
        points.append(payload)
    payload = {"group": curve.datum.name(), "genus": curve.genus, "points": points}
    return report.envelope("analyze", req.spec, payload)


def handle_dims(req: DimsRequest) -> dict:
    curve, options = specio.parse_curve_spec(req.spec)
    hom = hom_stokes(curve)
    nesting = []
    for point in curve.points:
        if point.q.is_tame:
            continue
        expr = nesting_decomposition(point.q)
        nesting.append(
            {
                "label": point.label,
                "dim": expr.dim,
                "matches_direct": expr.dim == space_A(point.q).dim,
            }
        )
    payload: dict[str, Any] = {
        "hom_dim": hom.dim,
        "A_dims": [space_A(p.q).dim for p in curve.points],
        "acting": hom.acting_names(),
        "nesting": nesting,
        "expr": hom.to_json(),
    }
    warnings = []
    if req.classes is not None:
        classes = specio.parse_classes(req.classes, curve)
        correction = (
            req.center_correction
            if req.center_correction is not None
            else options.center_correction
        )
        leaf = wild_leaf_dim(curve, classes, center_correction=correction)
        payload["leaf"] = {
            "dim": leaf.dim,
            "flags": list(leaf.flags),
            "center_correction": correction,
        }
        if leaf.flags:
            warnings.append("degenerate reduction: " + ", ".join(leaf.flags))
    return report.envelope("dims", req.spec, payload, warnings)


def handle_verify(req: VerifyRequest) -> dict:
    if sum(req.blocks) != req.n:
        raise specio.SpecError("$.blocks", f"block sizes {req.blocks} do not sum to n={req.n}")
    try:
        rep = matrix_real.verify_suite(
            req.n, req.blocks, req.r, trials=req.trials, tol=req.tol, seed=req.seed
        )
    except matrix_real.MatrixError as exc:
        raise specio.SpecError("$", str(exc)) from None
    doc = req.model_dump()
    return report.envelope("verify", doc, rep.to_json())


def handle_deform(req: DeformRequest) -> dict:
    family, _ = specio.parse_family({"base": req.base, "family": req.family})
    adm = deform_mod.check_admissible(family)
    payload: dict[str, Any] = adm.to_json()
    walls = []
    base_curve = family.samples[0][1]
    for pi, point in enumerate(base_curve.points):
        orders = {curve.points[pi].q.order for _, curve in family.samples}
        if orders <= {0, 1}:
            path = [
                (t, curve.points[pi].q.coeff(1) if curve.points[pi].q.order else
                 tuple(0j for _ in range(curve.datum.rank)))
                for t, curve in family.samples
            ]
            events = deform_mod.wall_events(path, base_curve.datum)
            walls.append({"label": point.label, "events": [e.to_json() for e in events]})
        else:
            walls.append({"label": point.label, "events": None})
    payload["walls"] = walls
    doc = {"base": req.base, "family": req.family}
    return report.envelope("deform", doc, payload)


def handle_quiver(req: QuiverRequest) -> dict:
    doc = req.model_dump()
    graph, dims, do_reduce = specio.parse_graph(doc)
    try:
        gb = graph_blocks(graph, dims)
    except SpaceError as exc:
        raise specio.SpecError("$", str(exc)) from None
    payload: dict[str, Any] = {
        "rep_dim": gb.rep_dim,
        "n_components": gb.n_components,
        "node_groups": {name: g.name() for name, g in gb.node_groups.items()},
        "expr": gb.expr.to_json(),
    }
    if do_reduce:
        reduced = reduce_graph_blocks(gb)
        payload["reduced"] = {"dim": reduced.dim, "flags": list(reduced.flags)}
    return report.envelope("quiver", doc, payload)


HANDLERS = {
    "analyze": handle_analyze,
    "dims": handle_dims,
    "verify": handle_verify,
    "deform": handle_deform,
    "quiver": handle_quiver,
}


def _error_body(status: int, message: str, path: str | None = None) -> bytes:
    body = {"error": {"message": message, "path": path}}
    return (report.canonical_json(body) + "\n").encode("utf-8")


def dispatch(command: str, request_doc: dict) -> tuple[int, bytes]:
    """Validate and run one command; returns (http_status, canonical body bytes)."""
    if command not in COMMANDS:
        return 404, _error_body(404, f"unknown command {command!r}")
    model = REQUEST_MODELS[command]
    try:
        request = model.model_validate(request_doc)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first.get("loc", ()))
        return 422, _error_body(422, first.get("msg", "invalid request"), loc or None)
    try:
        env = HANDLERS[command](request)
    except specio.SpecError as exc:
        return 422, _error_body(422, str(exc), exc.path)
    except (SpaceError, ValueError) as exc:
        return 422, _error_body(422, str(exc))
    return 200, report.envelope_bytes(env)


def create_app() -> FastAPI:
    app = FastAPI(
        title="wildcat",
        version=report.TOOL_VERSION,
        description="Stokes data, fission-space dimensions, and moment-map checks for wild character varieties.",
    )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": report.TOOL_VERSION}

    def make_route(command: str):
        model = REQUEST_MODELS[command]

        def route(request):
            status, body = dispatch(command, request.model_dump())
            return Response(content=body, status_code=status, media_type="application/json")

        route.__name__ = f"run_{command}"
        # resolve the body model eagerly; deferred annotations cannot name a closure variable
        route.__annotations__ = {"request": model, "return": Response}
        return route

    for command in COMMANDS:
        app.post(f"/v1/{command}")(make_route(command))
    return app


app = create_app()
