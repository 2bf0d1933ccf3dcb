"""Canonical JSON serialization of reports."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .. import __version__

TOOL = "dycoh"


def canonical(obj):
    """Plain JSON data: tuples become lists, rationals become ``p/q`` strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(canonical(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(*blobs):
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return h.hexdigest()


def envelope(command, inputs, options, result, verdict=None):
    """Top-level report: tool version, input digest, options and the result."""
    out = {"tool": TOOL, "version": __version__, "command": command,
           "input": {"files": [name for name, _ in inputs], "sha256": digest(*(b for _, b in inputs))},
           "options": options, "result": result}
    if verdict is not None:
        out["verdict"] = verdict
    return out
