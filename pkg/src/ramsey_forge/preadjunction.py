"""Edge chains, copies of A_2, and the map Phi between them.

``F_edges`` reads an edge-ordered digraph as the chain of its edges;
``G_chain`` builds n copies of A_2 with the interleaved loop order; ``Phi``
turns a rigid surjection from a chain onto the edge chain into a quotient
rigid surjection.  :func:`pa_sweep` checks the naturality square
``f . Phi_D(u) == Phi_E(f_hat . u)`` exhaustively on micro instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import structures as st
from .errors import InternalCheckError, ParameterError, PreconditionError
from .expansions import iter_fibers
from .morphisms import MorphismKind, check, enumerate_morphisms, induced_dual_restriction
from .parallel import ordered_map
from .structures import Chain, EdgeOrder, ReflexiveDigraph


@dataclass(frozen=True)
class EdgeOrderedDigraph:
    digraph: ReflexiveDigraph
    order: EdgeOrder

    def __post_init__(self):
        if not self.order.covers(self.digraph):
            raise ParameterError("edge order must list every edge exactly once")
        if not self.order.is_tidy:
            raise ParameterError("edge order must list loops before non-loops")

    @property
    def n(self):
        return self.digraph.n


def F_edges(Dstar: EdgeOrderedDigraph):
    """The chain of edges, with position i labeled by the i-th edge."""
    return Chain(len(Dstar.order.edges)), tuple(Dstar.order.edges)


def G_chain(n):
    """n copies of A_2 on 2n vertices; (i, x_j) is encoded as 2j + i.

    Edge order: the two loops of copy 0, the two loops of copy 1, ..., then
    the non-loops copy by copy.
    """
    if n < 1:
        raise ParameterError("chain size must be at least 1")
    D = st.copies_of_A2(n)
    loops = tuple((v, v) for v in range(2 * n))
    arcs = tuple((2 * j, 2 * j + 1) for j in range(n))
    return EdgeOrderedDigraph(D, EdgeOrder(loops + arcs))


def _u_map(u):
    return tuple(getattr(u, "map", u))


def _check_u(u, Dstar):
    m = len(Dstar.order.edges)
    if any(not (isinstance(v, int) and 0 <= v < m) for v in u):
        raise PreconditionError("u must map into edge positions")
    res = check(u, Chain(len(u)), Chain(m), MorphismKind.RIGID_SURJECTION)
    if not res:
        raise PreconditionError(f"u is not a rigid surjection onto the edge chain: {res.reason} {res.witness}")


def Phi(u, Dstar: EdgeOrderedDigraph, *, validate=True):
    """Copy j of A_2 goes onto the edge u(j): tail to its tail, head to its head.

    ``u`` lists edge positions in Dstar's order.  The result is re-checked to
    be a quotient rigid surjection G_chain(|u|) -> Dstar.
    """
    u = _u_map(u)
    _check_u(u, Dstar)
    edges = Dstar.order.edges
    v = []
    for pos in u:
        a, b = edges[pos]
        v.extend((a, b))
    v = tuple(v)
    if validate:
        G = G_chain(len(u))
        res = check(v, G.digraph, Dstar.digraph, MorphismKind.QUOTIENT_RIGID_SURJECTION, G.order, Dstar.order)
        if not res:
            raise InternalCheckError(f"Phi({list(u)}) is not a quotient rigid surjection: {res}")
    return v


def apply_edge_map(f, u, Dstar: EdgeOrderedDigraph, Estar: EdgeOrderedDigraph):
    """Positions of f_hat(u(i)) in Estar's edge order."""
    pos = Estar.order.position
    edges = Dstar.order.edges
    return tuple(pos[(f[edges[p][0]], f[edges[p][1]])] for p in u)


@dataclass(frozen=True)
class PAResult:
    ok: bool
    lhs: tuple
    rhs: Optional[tuple]
    first_disagreement: Optional[int] = None
    diagnostic: Optional[str] = None

    def __bool__(self):
        return self.ok


def verify_PA(u, f, Dstar: EdgeOrderedDigraph, Estar: EdgeOrderedDigraph):
    """Compare f . Phi_D(u) with Phi_E(f_hat . u) pointwise."""
    u, f = _u_map(u), tuple(getattr(f, "map", f))
    res = check(f, Dstar.digraph, Estar.digraph, MorphismKind.QUOTIENT_RIGID_SURJECTION, Dstar.order, Estar.order)
    if not res:
        raise PreconditionError(f"f is not a quotient rigid surjection: {res.reason} {res.witness}")
    lhs = tuple(f[x] for x in Phi(u, Dstar))
    fu = apply_edge_map(f, u, Dstar, Estar)
    comp = check(fu, Chain(len(fu)), Chain(len(Estar.order.edges)), MorphismKind.RIGID_SURJECTION)
    if not comp:
        return PAResult(False, lhs, None, None, f"composite edge map is not rigid: {comp.reason} {comp.witness}")
    rhs = Phi(fu, Estar)
    for x, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            return PAResult(False, lhs, rhs, x)
    return PAResult(True, lhs, rhs)


def universal_cover(D: ReflexiveDigraph):
    """One copy of A_2 per edge of D, projected onto that edge."""
    edges = D.edges()
    m = len(edges)
    q = tuple(v for e in edges for v in e)
    res = check(q, st.copies_of_A2(m), D, MorphismKind.QUOTIENT)
    if not res:
        raise InternalCheckError(f"universal cover is not a quotient: {res}")
    return m, q


# -- exhaustive sweep ------------------------------------------------------------

def all_reflexive_digraphs(n):
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    for mask in range(1 << len(pairs)):
        yield ReflexiveDigraph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def tidy_expansions(D):
    return [EdgeOrderedDigraph(D, eo) for eo in iter_fibers(D, "tidy_edge_order")]


def _sweep_one(task):
    Dstar, targets, max_x = task
    m = len(Dstar.order.edges)
    out = {"instances": 0, "phi_checks": 0, "failures": []}
    us = []
    for x in range(1, max_x + 1):
        us.extend(enumerate_morphisms(Chain(x), Chain(m), MorphismKind.RIGID_SURJECTION))
    fs = []
    for Estar in targets:
        for f in enumerate_morphisms(
            Dstar.digraph, Estar.digraph, MorphismKind.QUOTIENT_RIGID_SURJECTION, Dstar.order, Estar.order
        ):
            fs.append((f.map, Estar))
    for u in us:
        Phi(u.map, Dstar)
        out["phi_checks"] += 1
        for f, Estar in fs:
            out["instances"] += 1
            res = verify_PA(u.map, f, Dstar, Estar)
            if not res:
                out["failures"].append(
                    {"u": list(u.map), "f": list(f), "diagnostic": res.diagnostic, "at": res.first_disagreement}
                )
    return out


def pa_sweep(max_x=4, max_target=2, workers=1, sources=None):
    """Exhaustive naturality check.

    Sources: every tidy expansion of A_2 and of 2.A_2 (unless ``sources`` is
    given).  Targets: every tidy expansion of every reflexive digraph on at
    most ``max_target`` vertices.  All u: chains of size <= max_x onto the
    source edge chain, all quotient rigid surjections f.
    """
    if sources is None:
        sources = tidy_expansions(st.copies_of_A2(1)) + tidy_expansions(st.copies_of_A2(2))
    targets = [E for n in range(1, max_target + 1) for D in all_reflexive_digraphs(n) for E in tidy_expansions(D)]
    results = list(ordered_map(_sweep_one, [(D, targets, max_x) for D in sources], workers=workers))
    report = {
        "max_x": max_x,
        "max_target": max_target,
        "sources": len(sources),
        "targets": len(targets),
        "instances": sum(r["instances"] for r in results),
        "phi_checks": sum(r["phi_checks"] for r in results),
        "failures": [f for r in results for f in r["failures"]],
    }
    report["ok"] = not report["failures"]
    return report


def restricted_edge_order(u, Dstar: EdgeOrderedDigraph):
    """Dual restriction of G_chain's edge order along Phi(u)'s edge map."""
    u = _u_map(u)
    G = G_chain(len(u))
    return induced_dual_restriction(Phi(u, Dstar), G.order, G.digraph, Dstar.digraph)

