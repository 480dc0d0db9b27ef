"""Output envelope, canonical JSON, CSV and plain-text rendering."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction
from importlib import resources

SCHEMA_VERSION = "1.0"


def to_jsonable(obj):
    """Recursively convert results (dataclasses with to_dict, tuples, Fractions) to JSON types."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def envelope(command, parameters, result, provenance=None, timing_ms=0.0):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": to_jsonable(parameters),
        "result": to_jsonable(result),
        "provenance": to_jsonable(provenance or {}),
        "timing_ms": round(float(timing_ms), 3),
    }


def dumps(env, indent=2):
    return json.dumps(env, sort_keys=True, indent=indent, ensure_ascii=False)


def canonical_json(env) -> str:
    """Byte-stable form: timing removed, keys sorted, no whitespace."""
    body = {k: v for k, v in env.items() if k != "timing_ms"}
    return json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_schema():
    text = resources.files("polya").joinpath("schema/output.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def claim_provenance(claims):
    """hypothesis text -> evaluation method, over a list of claim dicts."""
    out = {}
    for c in claims:
        for h in c["hypotheses"]:
            out[h["text"]] = h["method"]
    return out


# ---------------------------------------------------------------------------
# CSV (scan outputs only)


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def scan_csv(command, result):
    if command in ("scan class-gap", "scan polya-gap"):
        header = ["d", "left_field", "right_field", "left_value", "right_value", "gap"]
        return _csv([[r[h] for h in header] for r in result["records"]], header)
    if command == "scan odd-exp-pairs":
        return _csv(result["pairs"], ["m", "m_plus_1"])
    if command == "scan fermat":
        header = ["n", "left", "right", "right_is_prime", "left_omega", "right_omega", "one_prime_each"]
        return _csv([[r[h] for h in header] for r in result["results"]], header)
    return None


# ---------------------------------------------------------------------------
# text


def _text_lines(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}{k}:"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}"
    elif isinstance(value, list):
        scalar = all(not isinstance(v, (dict, list)) for v in value)
        if scalar:
            yield pad + ", ".join(json.dumps(v, ensure_ascii=False) for v in value)
            return
        for i, v in enumerate(value):
            yield f"{pad}- [{i}]"
            yield from _text_lines(v, indent + 1)
    else:
        yield pad + json.dumps(value, ensure_ascii=False)


def to_text(env):
    head = [f"command: {env['command']}", "parameters:"]
    head += list(_text_lines(env["parameters"], 1))
    head.append("result:")
    return "\n".join(head + list(_text_lines(env["result"], 1))) + "\n"
