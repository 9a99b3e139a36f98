"""Bit-stable JSON emission: canonical key order, 17-significant-digit floats."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

TOOL_VERSION = "0.1.0"
ENVELOPE_SCHEMA = "report_envelope.v1"


def format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite float {x} cannot be serialized")
    text = format(x, ".17g")
    return text


def complex_literal(z: complex) -> str:
    """Render a complex number in the a+bi input grammar."""
    re, im = format_float(float(z.real)), format_float(abs(float(z.imag)))
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{im}i"


def canonical_json(value) -> str:
    """Serialize with sorted keys, compact separators, and fixed float formatting."""
    out: list[str] = []
    _emit(value, out)
    return "".join(out)


def _emit(value, out: list[str]) -> None:
    if value is None or isinstance(value, bool):
        out.append(json.dumps(value))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, complex):
        out.append(json.dumps(complex_literal(value)))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, dict):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _emit(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} canonically")


def input_hash(document) -> str:
    return hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()


def envelope(command: str, document, payload, warnings: list[str] | None = None) -> dict:
    return {
        "schema": ENVELOPE_SCHEMA,
        "tool_version": TOOL_VERSION,
        "command": command,
        "input_hash": input_hash(document),
        "payload": payload,
        "warnings": sorted(warnings or []),
    }


def envelope_bytes(env: dict) -> bytes:
    return (canonical_json(env) + "\n").encode("utf-8")


def write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
