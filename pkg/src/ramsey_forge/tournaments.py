"""Reflexive tournaments: inflations, siblings, and the B_n certificate.

The family member T_j is the rotational tournament on 2j + 1 vertices.

Labeled tournaments on s vertices are coded as integers: bit b belongs to
the b-th pair (i, j), i < j, in lexicographic order, and is set when j -> i.
Code 0 is the transitive tournament, and the rotational T_3 is the least
strongly connected code on three vertices.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import structures as st
from .config import Budget
from .errors import BudgetExceeded, DoubleMatchError, InternalCheckError, ParameterError
from .morphisms import MorphismKind, check, enumerate_morphisms
from .parallel import ordered_map
from .structures import ReflexiveDigraph

DEFAULT_NODE_BUDGET = 10**7
SHARD_BITS = 16


def family_member(j):
    """T_j, of size 2j + 1."""
    if j < 1:
        raise ParameterError("family index starts at 1")
    return st.rotational_tournament(2 * j + 1)


def _require_tournament(T, name):
    if not isinstance(T, ReflexiveDigraph) or not st.classify(T).is_tournament:
        raise ParameterError(f"{name} must be a reflexive tournament")


# -- inflations -------------------------------------------------------------------

def is_inflation(S: ReflexiveDigraph, T: ReflexiveDigraph, *, node_budget=DEFAULT_NODE_BUDGET):
    """Lexicographically least surjective homomorphism S -> T, or None."""
    n, m = S.n, T.n
    if m > n:
        return None
    adjS = [[S.has_edge(x, y) for y in range(n)] for x in range(n)]
    adjT = [[T.has_edge(x, y) for y in range(m)] for x in range(m)]
    f = [0] * n
    hits = [0] * m
    nodes = 0

    def rec(v, unhit):
        nonlocal nodes
        if v == n:
            return unhit == 0
        for b in range(m):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("inflation search exceeded its node budget", bound="nodes", needed=nodes)
            if unhit - (hits[b] == 0) > n - v - 1:
                continue
            ok = True
            for u in range(v):
                a = f[u]
                if a != b and ((adjS[u][v] and not adjT[a][b]) or (adjS[v][u] and not adjT[b][a])):
                    ok = False
                    break
            if not ok:
                continue
            f[v] = b
            new = hits[b] == 0
            hits[b] += 1
            if rec(v + 1, unhit - new):
                return True
            hits[b] -= 1
        return False

    if not rec(0, m):
        return None
    witness = tuple(f)
    if not check(witness, S, T, MorphismKind.SURJECTIVE_HOM):
        raise InternalCheckError("inflation search returned a non-homomorphism")
    return witness


def incidence_matrix(f, g, m, n):
    """a[i][j] = 1 iff some vertex v has f(v) = i and g(v) = j."""
    a = [[0] * n for _ in range(m)]
    for x, y in zip(f, g):
        a[x][y] = 1
    return a


def matrix_covers(a):
    return all(any(row) for row in a) and all(any(col) for col in zip(*a))


# -- B_n ----------------------------------------------------------------------------

@dataclass(frozen=True)
class BTournament:
    n: int
    digraph: ReflexiveDigraph
    blocks: tuple  # (start, stop) per block: first singleton, T_1..T_n, last singleton

    def block_of(self, v):
        for i, (a, b) in enumerate(self.blocks):
            if a <= v < b:
                return i
        raise IndexError(v)


def build_B(n):
    """1 => T_1 => ... => T_n => 1, with block boundaries retained."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    size = 2 + sum(2 * j + 1 for j in range(1, n + 1))
    if size > st.MAX_VERTICES:
        raise ParameterError(f"B_{n} has {size} vertices, above the cap {st.MAX_VERTICES}")
    point = ReflexiveDigraph.from_edges(1, [])
    parts = [point] + [family_member(j) for j in range(1, n + 1)] + [point]
    D = parts[0]
    blocks = [(0, 1)]
    for P in parts[1:]:
        blocks.append((D.n, D.n + P.n))
        D = st.arrow_sum(D, P)
    return BTournament(n, D, tuple(blocks))


def phi(i, n, B: Optional[BTournament] = None):
    """B_n -> A_3 sending blocks before T_i to 0, T_i to 1, and the rest to 2."""
    if not 1 <= i <= n:
        raise ParameterError(f"phi index must lie in 1..{n}")
    B = B or build_B(n)
    f = tuple(0 if B.block_of(v) < i else (1 if B.block_of(v) == i else 2) for v in range(B.digraph.n))
    res = check(f, B.digraph, st.acyclic_tournament(3), MorphismKind.SURJECTIVE_HOM)
    if not res:
        raise InternalCheckError(f"phi({i}) is not a surjective homomorphism: {res}")
    return f


@dataclass
class ChiResult:
    maps: list
    colors: list
    matches: list = field(default_factory=list)

    def color_of(self, fmap):
        return self.colors[self.maps.index(tuple(fmap))]


def chi(S: ReflexiveDigraph, n, *, budget: Optional[Budget] = None):
    """Color each f in Surj(S, A_3) by the j whose T_j the middle fiber inflates.

    Default color 1 when no j matches.  Two matches would mean two family
    members are siblings, which is raised as :class:`DoubleMatchError`.
    """
    _require_tournament(S, "S")
    budget = budget or Budget()
    homs = enumerate_morphisms(S, st.acyclic_tournament(3), MorphismKind.SURJECTIVE_HOM, max_morphisms=budget.morphisms)
    maps, colors, matches = [], [], []
    for h in homs:
        middle = [v for v, c in enumerate(h.map) if c == 1]
        sub = st.induced_substructure(S, middle)
        found = [j for j in range(1, n + 1) if len(middle) >= 2 * j + 1 and is_inflation(sub, family_member(j))]
        if len(found) > 1:
            raise DoubleMatchError(f"middle fiber of {list(h.map)} inflates T_{found[0]} and T_{found[1]}")
        maps.append(h.map)
        colors.append(found[0] if found else 1)
        matches.append(found)
    return ChiResult(maps, colors, matches)


def no_degree_certificate(n, *, budget: Optional[Budget] = None):
    """Colors of Surj(B_n, A_3) under chi; phi_i must receive color i."""
    B = build_B(n)
    res = chi(B.digraph, n, budget=budget)
    witnesses = []
    for i in range(1, n + 1):
        f = phi(i, n, B)
        c = res.color_of(f)
        if c != i:
            raise InternalCheckError(f"chi(phi_{i}) = {c}, expected {i}")
        witnesses.append({"i": i, "map": list(f), "color": c})
    distinct = sorted(set(res.colors))
    return {
        "n": n,
        "size": B.digraph.n,
        "blocks": [list(b) for b in B.blocks],
        "surjections": len(res.maps),
        "colors": [{"map": list(m), "color": c} for m, c in zip(res.maps, res.colors)],
        "distinct_colors": len(distinct),
        "witnesses": witnesses,
        "holds": len(distinct) >= n,
    }


# -- sibling search ------------------------------------------------------------------

def pairs(s):
    return [(i, j) for i in range(s) for j in range(i + 1, s)]


def from_code(code, s):
    return ReflexiveDigraph.from_edges(s, [(j, i) if code >> b & 1 else (i, j) for b, (i, j) in enumerate(pairs(s))])


def to_code(T: ReflexiveDigraph):
    return sum(1 << b for b, (i, j) in enumerate(pairs(T.n)) if T.has_edge(j, i))


@functools.lru_cache(maxsize=None)
def _onto_masks(s, a):
    """(mask, pattern) per surjection g: s -> T_a with g(0) = 0.

    A code is a homomorphism along g iff ``code & mask == pattern``.  The
    rotation group acts transitively on T_a, so fixing g(0) loses nothing.
    """
    T = st.rotational_tournament(a)
    P = pairs(s)
    out = []
    for rest in itertools.product(range(a), repeat=s - 1):
        g = (0,) + rest
        if len(set(g)) < a:
            continue
        mask = pattern = 0
        for b, (i, j) in enumerate(P):
            if g[i] != g[j]:
                mask |= 1 << b
                if T.has_edge(g[j], g[i]):
                    pattern |= 1 << b
        out.append((mask, pattern))
    return np.array(out, dtype=np.uint64).reshape(-1, 2)


def _strong(codes, s):
    """Landau: strongly connected iff sorted score prefix sums exceed C(k, 2) for k < s."""
    deg = np.zeros((len(codes), s), dtype=np.int16)
    for b, (i, j) in enumerate(pairs(s)):
        bit = ((codes >> np.uint64(b)) & np.uint64(1)).astype(np.int16)
        deg[:, j] += bit
        deg[:, i] += 1 - bit
    deg.sort(axis=1)
    cs = np.cumsum(deg, axis=1)
    ok = np.ones(len(codes), dtype=bool)
    for k in range(1, s):
        ok &= cs[:, k - 1] > k * (k - 1) // 2
    return ok


def _onto(codes, masks):
    ok = np.zeros(len(codes), dtype=bool)
    for mask, pattern in masks:
        ok |= (codes & mask) == pattern
    return ok


def _scan_shard(task):
    s, lo, hi, targets = task
    codes = np.arange(lo, hi, dtype=np.uint64)
    if s > 1:
        codes = codes[_strong(codes, s)]
    strong = len(codes)
    for a in targets:
        if not len(codes):
            break
        codes = codes[_onto(codes, _onto_masks(s, a))]
    return (int(codes[0]) if len(codes) else None), strong


def sibling_search(a, b, max_T, *, workers=1, budget: Optional[Budget] = None):
    """Least labeled tournament on at most ``max_T`` vertices inflating both T_a and T_b.

    ``a`` and ``b`` are vertex counts (odd, >= 3).  Sizes are scanned upward
    from max(a, b); within a size, codes are scanned in increasing order and
    filtered by strong connectivity (necessary to map onto a strongly
    connected tournament) before the homomorphism tests.
    """
    budget = budget or Budget()
    for x in (a, b):
        if not isinstance(x, int) or x < 3 or x % 2 == 0:
            raise ParameterError("sibling targets are odd sizes >= 3")
    if max_T > budget.tournament_size:
        raise BudgetExceeded(
            f"tournament size {max_T} above the cap {budget.tournament_size}", bound="tournament_size", needed=max_T
        )
    targets = tuple(sorted({a, b}))
    scanned = []
    for s in range(max(a, b), max_T + 1):
        total = 1 << (s * (s - 1) // 2)
        step = 1 << SHARD_BITS
        tasks = [(s, lo, min(total, lo + step), targets) for lo in range(0, total, step)]
        strong = 0
        hit = None
        for code, n_strong in ordered_map(_scan_shard, tasks, workers, stop=lambda r: r[0] is not None):
            strong += n_strong
            if code is not None:
                hit = code
                break
        scanned.append({"size": s, "codes": total, "strong_scanned": strong, "complete": hit is None})
        if hit is not None:
            T = from_code(hit, s)
            fa = is_inflation(T, st.rotational_tournament(a))
            fb = is_inflation(T, st.rotational_tournament(b))
            if fa is None or fb is None:
                raise InternalCheckError(f"code {hit} passed the vectorized test but has no witness")
            if not matrix_covers(incidence_matrix(fa, fb, a, b)):
                raise InternalCheckError("sibling witnesses leave an empty row or column")
            return {
                "a": a, "b": b, "max_T": max_T, "found": True, "size": s, "code": hit,
                "tournament": st.to_json(T), "witness_a": list(fa), "witness_b": list(fb), "scanned": scanned,
            }
    return {"a": a, "b": b, "max_T": max_T, "found": False, "scanned": scanned}
