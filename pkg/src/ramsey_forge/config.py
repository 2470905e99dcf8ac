"""Search budgets, overridable through ``RAMSEY_FORGE_BUDGET``.

The variable holds comma-separated ``key=value`` pairs, e.g.
``RAMSEY_FORGE_BUDGET="colorings=2^24,morphisms=100000"``.  Values accept
plain integers or ``2^k``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import ParameterError

ENV_VAR = "RAMSEY_FORGE_BUDGET"


@dataclass(frozen=True)
class Budget:
    colorings: int = 2**31
    morphisms: int = 2**20
    tournament_size: int = 7
    cover_entries: int = 4096


def parse_int(text):
    text = str(text).strip()
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return int(base) ** int(exp)
        if "**" in text:
            base, exp = text.split("**", 1)
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise ParameterError(f"not an integer budget value: {text!r}") from None


def budget_from_env(base=None, environ=None):
    base = base or Budget()
    raw = (environ if environ is not None else os.environ).get(ENV_VAR, "").strip()
    if not raw:
        return base
    names = {f.name for f in fields(Budget)}
    updates = {}
    for part in raw.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParameterError(f"{ENV_VAR} entries must look like key=value, got {part!r}")
        key, value = (s.strip() for s in part.split("=", 1))
        if key not in names:
            raise ParameterError(f"unknown budget key {key!r} in {ENV_VAR}")
        updates[key] = parse_int(value)
    return replace(base, **updates)
