"""Versioned JSON report envelope emitted by the CLI (and validated in tests).

Every machine-readable report carries the schema tag, the tool version, the
fully-resolved configuration of the run, sha256 digests of the inputs, and
the results object. Non-finite floats are serialized as the strings "inf",
"-inf", "nan" so documents stay strict JSON.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

SCHEMA_ID = "freqloss-report/1"

REPORT_SCHEMA: dict = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "tool", "command", "config", "inputs", "results"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "tool": {
            "type": "object",
            "required": ["name", "version"],
            "properties": {
                "name": {"const": "freqloss"},
                "version": {"type": "string"},
            },
        },
        "command": {"enum": ["loss", "metrics", "spectrum", "demo"]},
        "config": {"type": "object"},
        "inputs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "sha256"],
                "properties": {
                    "name": {"type": "string"},
                    "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                },
            },
        },
        "results": {"type": "object"},
    },
}


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sanitize_floats(obj: Any) -> Any:
    """Replace non-finite floats with string sentinels, recursively."""
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: sanitize_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_floats(v) for v in obj]
    return obj


def build_report(
    command: str,
    config: dict,
    inputs: list[dict],
    results: dict,
    version: str,
) -> dict:
    return {
        "schema": SCHEMA_ID,
        "tool": {"name": "freqloss", "version": version},
        "command": command,
        "config": sanitize_floats(config),
        "inputs": inputs,
        "results": sanitize_floats(results),
    }


def dumps_canonical(doc: dict) -> str:
    """Deterministic serialization: sorted keys, fixed separators, newline."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
