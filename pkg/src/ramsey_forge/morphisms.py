"""Morphism classes: validation with witnesses, canonical enumeration, composition.

Enumeration order is lexicographic on the map array; colorings and
certificates index into it, so the order is part of the on-disk contract.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceeded, ParameterError, PreconditionError
from .structures import Chain, EdgeOrder, LinearOrder, MetricSpace, ReflexiveDigraph

DEFAULT_MAX_MORPHISMS = 2**20
NAIVE_SCAN_BITS = 40


class MorphismKind(str, enum.Enum):
    HOM = "hom"
    SURJECTIVE_HOM = "surjective_hom"
    EMBEDDING = "embedding"
    QUOTIENT = "quotient"
    RIGID_SURJECTION = "rigid_surjection"
    NONEXPANSIVE_SURJECTION = "nonexpansive_surjection"
    NONEXPANSIVE_RIGID_SURJECTION = "nonexpansive_rigid_surjection"
    QUOTIENT_RIGID_SURJECTION = "quotient_rigid_surjection"
    QUOTIENT_RIGID_MAP = "quotient_rigid_map"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = ALIASES.get(value, value)
        try:
            return cls(key)
        except ValueError:
            raise ParameterError(f"unknown morphism kind {value!r}") from None


ALIASES = {
    "rigid": "rigid_surjection",
    "rs": "rigid_surjection",
    "surj": "surjective_hom",
    "nes": "nonexpansive_surjection",
    "nonexpansive": "nonexpansive_surjection",
    "ners": "nonexpansive_rigid_surjection",
    "qrs": "quotient_rigid_surjection",
    "qrm": "quotient_rigid_map",
}

K = MorphismKind
_DIGRAPH_KINDS = {K.HOM, K.SURJECTIVE_HOM, K.EMBEDDING, K.QUOTIENT, K.QUOTIENT_RIGID_SURJECTION, K.QUOTIENT_RIGID_MAP}
_METRIC_KINDS = {K.HOM, K.NONEXPANSIVE_SURJECTION, K.NONEXPANSIVE_RIGID_SURJECTION}
_LINEAR_ORDER_KINDS = {K.RIGID_SURJECTION, K.NONEXPANSIVE_RIGID_SURJECTION}
_EDGE_ORDER_KINDS = {K.QUOTIENT_RIGID_SURJECTION, K.QUOTIENT_RIGID_MAP}
_SURJECTIVE_KINDS = {
    K.SURJECTIVE_HOM, K.QUOTIENT, K.RIGID_SURJECTION, K.NONEXPANSIVE_SURJECTION,
    K.NONEXPANSIVE_RIGID_SURJECTION, K.QUOTIENT_RIGID_SURJECTION, K.QUOTIENT_RIGID_MAP,
}

# Inclusion tree used to downgrade compositions of mixed kinds.
_PARENT = {
    K.SURJECTIVE_HOM: K.HOM,
    K.EMBEDDING: K.HOM,
    K.QUOTIENT: K.SURJECTIVE_HOM,
    K.QUOTIENT_RIGID_SURJECTION: K.QUOTIENT,
    K.QUOTIENT_RIGID_MAP: K.QUOTIENT,
    K.NONEXPANSIVE_SURJECTION: K.HOM,
    K.NONEXPANSIVE_RIGID_SURJECTION: K.NONEXPANSIVE_SURJECTION,
    K.RIGID_SURJECTION: K.HOM,
}
# Orders on the middle object need not agree for these, so they are not closed.
_NOT_CLOSED = {K.QUOTIENT_RIGID_MAP}


@dataclass(frozen=True)
class Morphism:
    dom_size: int
    cod_size: int
    map: tuple
    kind: MorphismKind = K.HOM

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        object.__setattr__(self, "kind", MorphismKind.parse(self.kind))
        if len(self.map) != self.dom_size:
            raise ParameterError("map length must equal the domain size")
        if any(not 0 <= v < self.cod_size for v in self.map):
            raise ParameterError("map value outside the codomain")
        if self.kind in _SURJECTIVE_KINDS and len(set(self.map)) != self.cod_size:
            raise ParameterError(f"{self.kind.value} morphism must be surjective")

    def __call__(self, x):
        return self.map[x]

    def to_json(self):
        return {"map": list(self.map), "kind": self.kind.value}

    @classmethod
    def from_json(cls, obj, cod_size=None):
        m = tuple(obj["map"])
        if cod_size is None:
            cod_size = max(m) + 1
        return cls(len(m), cod_size, m, obj.get("kind", "hom"))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


_OK = CheckResult(True)


def _natural_order(S, given):
    if given is not None:
        return given
    if isinstance(S, Chain):
        return LinearOrder.identity(S.size)
    return None


def _min_positions(values, position_of_source):
    """Map each image value to the least source position (in the domain order) hitting it."""
    best = {}
    for src, val in values:
        p = position_of_source[src]
        if val not in best or p < best[val][0]:
            best[val] = (p, src)
    return best


def _rigid_linear(fmap, order_X: LinearOrder, order_Y: LinearOrder):
    rankX = order_X.rank
    best = _min_positions(enumerate(fmap), rankX)
    for b1, b2 in zip(order_Y.perm, order_Y.perm[1:]):
        if best[b1][0] > best[b2][0]:
            return CheckResult(False, "not_rigid", (b1, b2, best[b1][1], best[b2][1]))
    return _OK


def _edge_images(fmap, edges):
    return [((x, y), (fmap[x], fmap[y])) for x, y in edges]


def _rigid_edges(fmap, order_X: EdgeOrder, order_Y: EdgeOrder, surjective: bool):
    pos = order_X.position
    best = _min_positions(_edge_images(fmap, order_X.edges), pos)
    targets = list(order_Y.edges)
    if surjective:
        for e in targets:
            if e not in best:
                return CheckResult(False, "edge_not_hit", (e,))
    stray = [e for e in best if e not in set(targets)]
    if stray:
        return CheckResult(False, "edge_not_preserved", (stray[0],))
    image = [e for e in targets if e in best]
    for e1, e2 in zip(image, image[1:]):
        if best[e1][0] > best[e2][0]:
            return CheckResult(False, "edge_map_not_rigid", (e1, e2, best[e1][1], best[e2][1]))
    return _OK


def _check_surjective(fmap, cod_n):
    hit = set(fmap)
    for b in range(cod_n):
        if b not in hit:
            return CheckResult(False, "not_surjective", (b,))
    return _OK


def _check_preserves(fmap, X: ReflexiveDigraph, Y: ReflexiveDigraph):
    for x, y in X.non_loops():
        if not Y.has_edge(fmap[x], fmap[y]):
            return CheckResult(False, "not_preserved", (x, y))
    return _OK


def _check_reflects(fmap, X: ReflexiveDigraph, Y: ReflexiveDigraph):
    image = sorted(set(fmap))
    pre = {b: [x for x in range(X.n) if fmap[x] == b] for b in image}
    for b1 in image:
        for b2 in image:
            if Y.has_edge(b1, b2) and not any(
                X.has_edge(x, y) for x in pre[b1] for y in pre[b2]
            ):
                return CheckResult(False, "not_reflected", (b1, b2))
    return _OK


def _check_nonexpansive(fmap, X: MetricSpace, Y: MetricSpace):
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if Y.d[fmap[x]][fmap[y]] > X.d[x][y]:
                return CheckResult(False, "expands", (x, y))
    return _OK


def _validate_orders(kind, X, Y, order_X, order_Y):
    if kind in _LINEAR_ORDER_KINDS:
        oX, oY = _natural_order(X, order_X), _natural_order(Y, order_Y)
        if oX is None or oY is None:
            raise ParameterError(f"{kind.value} needs linear orders on both sides")
        if not isinstance(oX, LinearOrder) or not isinstance(oY, LinearOrder):
            raise ParameterError(f"{kind.value} takes LinearOrder arguments")
        if oX.n != X.n or oY.n != Y.n:
            raise ParameterError("order size disagrees with structure size")
        return oX, oY
    if kind in _EDGE_ORDER_KINDS:
        if not isinstance(order_X, EdgeOrder) or not isinstance(order_Y, EdgeOrder):
            raise ParameterError(f"{kind.value} needs edge orders on both sides")
        dom_edges = X.non_loops() if kind is K.QUOTIENT_RIGID_MAP else X.edges()
        if set(order_X.edges) != set(dom_edges):
            raise ParameterError("domain edge order does not cover the required edges")
        if not order_Y.covers(Y):
            raise ParameterError("codomain edge order does not cover the edge set")
        return order_X, order_Y
    if order_X is not None or order_Y is not None:
        raise ParameterError(f"{kind.value} takes no orders")
    return None, None


def _metric_hom(kind, X):
    return kind is K.HOM and isinstance(X, MetricSpace)


def _as_map(f):
    return tuple(f.map) if isinstance(f, Morphism) else tuple(f)


def check(f, X, Y, kind, order_X=None, order_Y=None) -> CheckResult:
    """Decide whether ``f`` is a ``kind`` morphism X -> Y; failures carry a witness."""
    kind = MorphismKind.parse(kind)
    fmap = _as_map(f)
    if len(fmap) != X.n or any(not (isinstance(v, int) and 0 <= v < Y.n) for v in fmap):
        raise ParameterError("map does not fit the given domain/codomain sizes")
    oX, oY = _validate_orders(kind, X, Y, order_X, order_Y)

    if kind in _DIGRAPH_KINDS and not _metric_hom(kind, X):
        if not (isinstance(X, ReflexiveDigraph) and isinstance(Y, ReflexiveDigraph)):
            raise ParameterError(f"{kind.value} is defined for reflexive digraphs")
        steps = [lambda: _check_preserves(fmap, X, Y)]
        if kind is K.EMBEDDING:
            if len(set(fmap)) != len(fmap):
                seen = {}
                for x, v in enumerate(fmap):
                    if v in seen:
                        return CheckResult(False, "not_injective", (seen[v], x))
                    seen[v] = x
            steps.append(lambda: _check_reflects(fmap, X, Y))
        if kind in _SURJECTIVE_KINDS:
            steps.insert(0, lambda: _check_surjective(fmap, Y.n))
        if kind in {K.QUOTIENT, K.QUOTIENT_RIGID_SURJECTION, K.QUOTIENT_RIGID_MAP}:
            steps.append(lambda: _check_reflects(fmap, X, Y))
        if kind is K.QUOTIENT_RIGID_SURJECTION:
            steps.append(lambda: _rigid_edges(fmap, oX, oY, surjective=True))
        if kind is K.QUOTIENT_RIGID_MAP:
            steps.append(lambda: _rigid_edges(fmap, oX, oY, surjective=False))
        for step in steps:
            res = step()
            if not res:
                return res
        return _OK

    if kind in _METRIC_KINDS:
        if not (isinstance(X, MetricSpace) and isinstance(Y, MetricSpace)):
            raise ParameterError(f"{kind.value} is defined for metric spaces")
        if kind is not K.HOM:
            res = _check_surjective(fmap, Y.n)
            if not res:
                return res
        res = _check_nonexpansive(fmap, X, Y)
        if not res or kind is not K.NONEXPANSIVE_RIGID_SURJECTION:
            return res
        return _rigid_linear(fmap, oX, oY)

    # rigid surjection between ordered carriers; relations are ignored
    res = _check_surjective(fmap, Y.n)
    if not res:
        return res
    return _rigid_linear(fmap, oX, oY)


def edge_map(f, X: ReflexiveDigraph, Y: ReflexiveDigraph, order: Optional[EdgeOrder] = None):
    """The coordinatewise map on edges, keyed in the domain's edge order."""
    fmap = _as_map(f)
    if not check(fmap, X, Y, K.HOM):
        raise PreconditionError("edge map needs a homomorphism")
    edges = order.edges if order is not None else X.edges()
    return dict(_edge_images(fmap, edges))


# -- enumeration ---------------------------------------------------------------

def _pair_constraint(kind, X, Y):
    """Return ``ok(u, fu, v, fv)`` for pairwise pruning, or None."""
    if kind in _DIGRAPH_KINDS and not _metric_hom(kind, X):
        injective = kind is K.EMBEDDING

        def ok(u, a, v, b):
            if injective and a == b:
                return False
            if X.has_edge(u, v) and not Y.has_edge(a, b):
                return False
            if X.has_edge(v, u) and not Y.has_edge(b, a):
                return False
            if injective and (Y.has_edge(a, b) and not X.has_edge(u, v) or Y.has_edge(b, a) and not X.has_edge(v, u)):
                return False
            return True

        return ok
    if kind in _METRIC_KINDS:
        return lambda u, a, v, b: Y.d[a][b] <= X.d[u][v]
    return None


def enumerate_morphisms(
    X, Y, kind, order_X=None, order_Y=None, *, method="backtrack", max_morphisms=DEFAULT_MAX_MORPHISMS
):
    """All ``kind`` morphisms X -> Y, lexicographic in the map array.

    ``method="naive"`` scans every map and filters with :func:`check`; it is
    the cross-validation oracle for the pruned backtracking path.
    """
    kind = MorphismKind.parse(kind)
    oX, oY = _validate_orders(kind, X, Y, order_X, order_Y)
    n, m = X.n, Y.n
    out = []

    def emit(fmap):
        if len(out) >= max_morphisms:
            raise BudgetExceeded(
                f"more than {max_morphisms} morphisms in hom-set", bound="max_morphisms", needed=len(out) + 1
            )
        out.append(Morphism(n, m, fmap, kind))

    if method == "naive":
        if n * max(1, (m - 1).bit_length()) > NAIVE_SCAN_BITS:
            raise BudgetExceeded(f"naive scan of {m}^{n} maps exceeds 2^{NAIVE_SCAN_BITS}", bound="naive_scan_bits", needed=m**n)
        for fmap in itertools.product(range(m), repeat=n):
            if check(fmap, X, Y, kind, order_X, order_Y):
                emit(fmap)
        return out
    if method != "backtrack":
        raise ParameterError(f"unknown enumeration method {method!r}")

    surjective = kind in _SURJECTIVE_KINDS
    if surjective and m > n:
        return out
    pair_ok = _pair_constraint(kind, X, Y)
    # growth pruning is valid when the domain order is the label order
    rigid_prefix = kind in _LINEAR_ORDER_KINDS and oX.perm == tuple(range(n))
    rankY = oY.rank if rigid_prefix else None
    fmap = [0] * n
    hits = [0] * m

    def rec(v, unhit, top_rank):
        if v == n:
            t = tuple(fmap)
            if check(t, X, Y, kind, order_X, order_Y):
                emit(t)
            return
        remaining = n - v
        for b in range(m):
            if surjective and unhit - (hits[b] == 0) > remaining - 1:
                continue
            if rigid_prefix and rankY[b] > top_rank + 1:
                continue
            if pair_ok is not None and not all(pair_ok(u, fmap[u], v, b) for u in range(v)):
                continue
            fmap[v] = b
            new = hits[b] == 0
            hits[b] += 1
            rec(v + 1, unhit - new, max(top_rank, rankY[b]) if rigid_prefix else top_rank)
            hits[b] -= 1

    rec(0, m, -1)
    return out


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g . f`` (apply f first)."""
    if f.cod_size != g.dom_size:
        raise ParameterError("cannot compose: codomain of f differs from domain of g")
    return Morphism(f.dom_size, g.cod_size, tuple(g.map[x] for x in f.map), _meet(g.kind, f.kind))


def _ancestors(kind):
    chain_ = [kind]
    while chain_[-1] in _PARENT:
        chain_.append(_PARENT[chain_[-1]])
    return chain_


def _meet(a, b):
    if a == b and a not in _NOT_CLOSED:
        return a
    up_b = _ancestors(b)
    for k in _ancestors(a):
        if k in up_b and k not in _NOT_CLOSED:
            return k
    return K.HOM


# -- dual restrictions -----------------------------------------------------------

def induced_dual_restriction(f, order, X=None, Y=None, *, cod_size=None, strict=True):
    """The unique codomain order making ``f`` rigid with respect to ``order``.

    With a :class:`LinearOrder` the result is a LinearOrder on the codomain.
    With an :class:`EdgeOrder` (and the digraphs X, Y) the result is an
    EdgeOrder on Y's edges; ``strict=False`` orders only the image of the
    edge map (the rigid-map variant).  Check ``.is_tidy`` on the result.
    """
    fmap = _as_map(f)
    if isinstance(order, LinearOrder):
        if cod_size is None:
            cod_size = f.cod_size if isinstance(f, Morphism) else (Y.n if Y is not None else max(fmap) + 1)
        if not _check_surjective(fmap, cod_size):
            raise PreconditionError("dual restriction needs a surjection")
        best = _min_positions(enumerate(fmap), order.rank)
        return LinearOrder(tuple(sorted(best, key=lambda b: best[b][0])))
    if isinstance(order, EdgeOrder):
        if X is None or Y is None:
            raise ParameterError("edge dual restriction needs both digraphs")
        if not check(fmap, X, Y, K.HOM):
            raise PreconditionError("edge dual restriction needs a homomorphism")
        best = _min_positions(_edge_images(fmap, order.edges), order.position)
        if strict and set(best) != set(Y.edges()):
            raise PreconditionError("edge map is not onto the codomain edge set")
        return EdgeOrder(tuple(sorted(best, key=lambda e: best[e][0])))
    raise ParameterError("order must be a LinearOrder or an EdgeOrder")


def all_linear_orders(n):
    return [LinearOrder(p) for p in itertools.permutations(range(n))]
