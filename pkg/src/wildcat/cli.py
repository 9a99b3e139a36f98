"""Command-line thin client for the analysis service.

Each subcommand marshals its input file and flags into a service request,
dispatches it (in-process by default, or against a remote --server), and
writes the canonical JSON report atomically.  Exit codes: 0 success, 2 spec
error, 3 verification failures.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from .report import write_atomic
from .service import COMMANDS, create_app, dispatch

EXIT_OK = 0
EXIT_SPEC_ERROR = 2
EXIT_VERIFY_FAILED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wildcat",
        description="Stokes data, fission-space dimensions, and moment-map checks for wild character varieties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="path to the JSON input document")
        p.add_argument("--out", help="write the report here (default: stdout)")
        p.add_argument("--server", help="POST to a running service instead of dispatching in-process")

    p_analyze = sub.add_parser("analyze", help="singular directions and Stokes dimensions per point")
    add_common(p_analyze)
    p_analyze.add_argument("--dir-tol", type=float, help="direction merge tolerance in radians")

    p_dims = sub.add_parser("dims", help="space dimensions, nesting cross-check, optional leaf dims")
    add_common(p_dims)
    p_dims.add_argument(
        "--no-center-correction",
        action="store_true",
        help="disable the trivially-acting-center correction in leaf dimensions",
    )

    p_verify = sub.add_parser("verify", help="randomized moment-map identity suite")
    add_common(p_verify)
    p_verify.add_argument("--seed", type=int, help="override the RNG seed")
    p_verify.add_argument("--tol", type=float, help="override the residual tolerance")
    p_verify.add_argument("--trials", type=int, help="override the trial count")

    p_deform = sub.add_parser("deform", help="admissibility and wall events for a curve family")
    add_common(p_deform)

    p_quiver = sub.add_parser("quiver", help="multiplicative quiver blocks of a coloured graph")
    add_common(p_quiver)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        print(f"input file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_SPEC_ERROR)
    except json.JSONDecodeError as exc:
        print(f"malformed JSON in {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_SPEC_ERROR)


def _build_request(args: argparse.Namespace) -> dict:
    doc = _load_document(args.input)
    if args.command == "analyze":
        request = {"spec": doc}
        if args.dir_tol is not None:
            request["dir_tol"] = args.dir_tol
        return request
    if args.command == "dims":
        classes = doc.pop("classes", None) if isinstance(doc, dict) else None
        request = {"spec": doc}
        if classes is not None:
            request["classes"] = classes
        if args.no_center_correction:
            request["center_correction"] = False
        return request
    if args.command == "verify":
        request = dict(doc) if isinstance(doc, dict) else {}
        if args.trials is not None:
            request["trials"] = args.trials
        if args.seed is not None:
            request["seed"] = args.seed
        if args.tol is not None:
            request["tol"] = args.tol
        return request
    return doc


def _send(command: str, request: dict, server: str | None) -> tuple[int, bytes]:
    if server is None:
        return dispatch(command, request)
    response = httpx.post(f"{server.rstrip('/')}/v1/{command}", json=request, timeout=600.0)
    return response.status_code, response.content


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    request = _build_request(args)
    status, body = _send(args.command, request, args.server)
    if status != 200:
        try:
            message = json.loads(body)["error"]["message"]
        except Exception:
            message = body.decode("utf-8", errors="replace")
        print(f"{args.command}: {message}", file=sys.stderr)
        return EXIT_SPEC_ERROR

    if args.out:
        write_atomic(args.out, body)
    else:
        sys.stdout.buffer.write(body)
        sys.stdout.buffer.flush()

    if args.command == "verify":
        payload = json.loads(body)["payload"]
        if payload.get("failures_total", 0) > 0:
            return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
