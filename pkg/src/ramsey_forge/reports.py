"""Report envelopes: canonical JSON, input hashes, CSV flattening.

Every report is ``{"schema_version", "command", "config", "input_hash",
"result"}``.  The config holds everything that can change the result
(inputs, budgets, seed) and nothing that cannot (worker count, output
path, format), so exhaustive reports are byte-identical across runs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from importlib import resources

SCHEMA_VERSION = "1.0"


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def canonical(obj):
    """Compact, key-sorted JSON used for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def digest(obj):
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def envelope(command, config, result):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "input_hash": digest({"command": command, "config": config}),
        "result": result,
    }


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, (list, tuple)) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value if isinstance(value, (str, int, float, bool)) or value is None else canonical(value)))


def to_csv(report):
    """Two columns: dotted path and value; nested lists of scalars stay JSON-encoded."""
    rows = []
    _flatten("", report, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in rows:
        writer.writerow([key, "" if value is None else (str(value).lower() if isinstance(value, bool) else value)])
    return buf.getvalue()


def load_schema(name="report"):
    text = resources.files("ramsey_forge").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
