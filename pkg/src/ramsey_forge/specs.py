"""Inline structure and order specs used by the command line.

Structures: ``chain:4``, ``A:3`` (acyclic tournament), ``rot:5``,
``nA2:3``, ``K:3``, ``E:3:1`` (equilateral, rational distance),
``omega:4``, ``B:2``, ``D:3:0-1,1-2`` (reflexive digraph from arcs), or a
path to a JSON structure file.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import structures as st
from .errors import ParameterError
from .structures import EdgeOrder, LinearOrder


def _int(text, what):
    try:
        return int(text)
    except ValueError:
        raise ParameterError(f"{what} must be an integer, got {text!r}") from None


def _arcs(text):
    arcs = []
    for part in filter(None, text.split(",")):
        try:
            a, b = part.split("-")
            arcs.append((int(a), int(b)))
        except ValueError:
            raise ParameterError(f"arc must look like a-b, got {part!r}") from None
    return arcs


def _b_tournament(n):
    from .tournaments import build_B

    return build_B(n).digraph


INLINE = {
    "chain": lambda a: st.chain(_int(a[0], "chain size")),
    "A": lambda a: st.acyclic_tournament(_int(a[0], "size")),
    "rot": lambda a: st.rotational_tournament(_int(a[0], "size")),
    "nA2": lambda a: st.copies_of_A2(_int(a[0], "copies")),
    "K": lambda a: st.complete_graph(_int(a[0], "size")),
    "E": lambda a: st.equilateral(_int(a[0], "size"), st.parse_fraction(a[1] if len(a) > 1 else "1")),
    "omega": lambda a: st.omega_truncation(_int(a[0], "size")),
    "B": lambda a: _b_tournament(_int(a[0], "n")),
    "D": lambda a: st.ReflexiveDigraph.from_edges(_int(a[0], "size"), _arcs(a[1] if len(a) > 1 else "")),
}


def parse_structure(text):
    head, _, rest = text.partition(":")
    if rest and head in INLINE:
        args = rest.split(":")
        try:
            return INLINE[head](args)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"bad structure spec {text!r}: {exc}") from None
    path = Path(text)
    if not path.is_file():
        raise ParameterError(f"{text!r} is neither an inline spec nor a readable file")
    try:
        return st.from_json(json.loads(path.read_text()))
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{text}: invalid JSON ({exc})") from None


def parse_map(text):
    return tuple(_int(p, "map entry") for p in text.split(",") if p.strip())


def parse_linear_order(text):
    if text is None:
        return None
    return LinearOrder(parse_map(text))


def parse_edge_order(text):
    if text is None:
        return None
    return EdgeOrder(tuple(_arcs(text)))


def parse_order(text, S):
    """A linear order ('2,0,1') or, with a dash, an edge order ('0-0,1-1,0-1')."""
    if text is None:
        return None
    return parse_edge_order(text) if "-" in text else parse_linear_order(text)
