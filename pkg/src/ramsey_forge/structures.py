"""Finite structures: chains, reflexive digraphs, metric spaces, and orders on them.

Every structure lives on the vertex set ``0..n-1`` and is immutable.  Digraph
adjacency is stored as one Python int per row (bit ``y`` of ``rows[x]`` is set
iff ``x -> y``); metric distances are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ParameterError

MAX_VERTICES = 64


def _check_size(n, what="structure"):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"{what} size must be a positive integer, got {n!r}")
    if n > MAX_VERTICES:
        raise ParameterError(f"{what} size {n} exceeds the cap of {MAX_VERTICES}")


@dataclass(frozen=True)
class Chain:
    """The chain ``0 < 1 < ... < size-1``."""

    size: int

    def __post_init__(self):
        _check_size(self.size, "chain")

    @property
    def n(self):
        return self.size


@dataclass(frozen=True)
class ReflexiveDigraph:
    n: int
    rows: tuple

    def __post_init__(self):
        _check_size(self.n, "digraph")
        if len(self.rows) != self.n:
            raise ParameterError("digraph needs exactly n adjacency rows")
        full = (1 << self.n) - 1
        for x, row in enumerate(self.rows):
            if row & ~full:
                raise ParameterError(f"row {x} references a vertex outside 0..{self.n - 1}")
            if not (row >> x) & 1:
                raise ParameterError(f"digraph is not reflexive at vertex {x}")

    @classmethod
    def from_edges(cls, n, edges: Iterable[tuple]):
        """Build from non-loop (or loop) pairs; loops are always added."""
        rows = [1 << x for x in range(n)]
        for x, y in edges:
            if not (0 <= x < n and 0 <= y < n):
                raise ParameterError(f"edge {(x, y)} outside 0..{n - 1}")
            rows[x] |= 1 << y
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, adj: Sequence[Sequence]):
        n = len(adj)
        rows = []
        for x, line in enumerate(adj):
            if len(line) != n:
                raise ParameterError("adjacency matrix must be square")
            rows.append(sum(1 << y for y, v in enumerate(line) if v))
        return cls(n, tuple(rows))

    def has_edge(self, x, y):
        return bool((self.rows[x] >> y) & 1)

    def matrix(self):
        return [[int(self.has_edge(x, y)) for y in range(self.n)] for x in range(self.n)]

    def loops(self):
        return [(x, x) for x in range(self.n)]

    def non_loops(self):
        return [(x, y) for x in range(self.n) for y in range(self.n) if x != y and self.has_edge(x, y)]

    def edges(self):
        """Canonical edge listing: loops by vertex, then non-loops lexicographically."""
        return self.loops() + self.non_loops()

    @property
    def num_non_loops(self):
        return sum(bin(r).count("1") for r in self.rows) - self.n

    def isolated_vertices(self):
        """Vertices touching no non-loop edge."""
        out = []
        for x in range(self.n):
            if self.rows[x] == 1 << x and not any(
                self.has_edge(y, x) for y in range(self.n) if y != x
            ):
                out.append(x)
        return out


@dataclass(frozen=True)
class MetricSpace:
    n: int
    d: tuple

    def __post_init__(self):
        _check_size(self.n, "metric space")
        if len(self.d) != self.n or any(len(r) != self.n for r in self.d):
            raise ParameterError("distance matrix must be n x n")
        d = self.d
        for i in range(self.n):
            for j in range(self.n):
                if not isinstance(d[i][j], Fraction):
                    raise ParameterError("distances must be exact Fractions")
                if i == j and d[i][j] != 0:
                    raise ParameterError(f"d({i},{i}) must be 0")
                if i != j and d[i][j] <= 0:
                    raise ParameterError(f"d({i},{j}) must be positive")
                if d[i][j] != d[j][i]:
                    raise ParameterError(f"distance matrix not symmetric at ({i},{j})")
        for i, j, k in itertools.product(range(self.n), repeat=3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise ParameterError(f"triangle inequality fails for ({i},{j},{k})")

    @classmethod
    def from_matrix(cls, rows):
        return cls(len(rows), tuple(tuple(Fraction(v) for v in r) for r in rows))

    def dist(self, x, y):
        return self.d[x][y]


Structure = Union[Chain, ReflexiveDigraph, MetricSpace]


@dataclass(frozen=True)
class LinearOrder:
    """``perm[k]`` is the k-th smallest element."""

    perm: tuple

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ParameterError(f"{self.perm!r} is not a permutation of 0..{len(self.perm) - 1}")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @property
    def n(self):
        return len(self.perm)

    @property
    def rank(self):
        r = [0] * len(self.perm)
        for k, x in enumerate(self.perm):
            r[x] = k
        return r


@dataclass(frozen=True)
class EdgeOrder:
    """A linear listing of edges, smallest first."""

    edges: tuple

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(set(edges)) != len(edges):
            raise ParameterError("edge order lists an edge twice")

    @property
    def is_tidy(self):
        seen_non_loop = False
        for x, y in self.edges:
            if x != y:
                seen_non_loop = True
            elif seen_non_loop:
                return False
        return True

    @property
    def position(self):
        return {e: i for i, e in enumerate(self.edges)}

    def covers(self, D: ReflexiveDigraph):
        return set(self.edges) == set(D.edges())


@dataclass(frozen=True)
class PropertyFlags:
    is_graph: bool
    is_oriented: bool
    is_acyclic: bool
    is_transitive: bool
    is_poset: bool
    is_tournament: bool


def _has_cycle(D: ReflexiveDigraph):
    succ = [[y for y in range(D.n) if y != x and D.has_edge(x, y)] for x in range(D.n)]
    color = [0] * D.n  # 0 new, 1 on stack, 2 done
    for root in range(D.n):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            x, it = stack[-1]
            for y in it:
                if color[y] == 1:
                    return True
                if color[y] == 0:
                    color[y] = 1
                    stack.append((y, iter(succ[y])))
                    break
            else:
                color[x] = 2
                stack.pop()
    return False


def classify(D: ReflexiveDigraph) -> PropertyFlags:
    n = D.n
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    graph = all(D.has_edge(y, x) for x, y in pairs if D.has_edge(x, y))
    oriented = not any(D.has_edge(x, y) and D.has_edge(y, x) for x, y in pairs)
    acyclic = not _has_cycle(D)
    transitive = all(
        D.has_edge(x, z)
        for x in range(n)
        for y in range(n)
        if D.has_edge(x, y)
        for z in range(n)
        if D.has_edge(y, z)
    )
    tournament = all(D.has_edge(x, y) != D.has_edge(y, x) for x, y in pairs)
    return PropertyFlags(
        is_graph=graph,
        is_oriented=oriented,
        is_acyclic=acyclic,
        is_transitive=transitive,
        is_poset=acyclic and transitive,
        is_tournament=tournament,
    )


# -- canonical families -------------------------------------------------------

def chain(n):
    return Chain(n)


def acyclic_tournament(n):
    """A_n: ``x -> y`` iff ``x <= y``."""
    return ReflexiveDigraph.from_edges(n, [(x, y) for x in range(n) for y in range(x + 1, n)])


def rotational_tournament(n):
    """T_n for odd n >= 3: vertex v dominates v+1, ..., v+(n-1)/2 (mod n)."""
    if not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise ParameterError(f"rotational tournament needs odd size >= 3, got {n!r}")
    h = (n - 1) // 2
    return ReflexiveDigraph.from_edges(n, [(v, (v + s) % n) for v in range(n) for s in range(1, h + 1)])


def copies_of_A2(n):
    """n disjoint copies of A_2; copy j occupies vertices 2j (tail) and 2j+1 (head)."""
    _check_size(2 * n, "digraph")
    return ReflexiveDigraph.from_edges(2 * n, [(2 * j, 2 * j + 1) for j in range(n)])


def complete_graph(n):
    return ReflexiveDigraph.from_edges(n, [(x, y) for x in range(n) for y in range(n)])


def equilateral(n, delta=1):
    delta = Fraction(delta)
    return MetricSpace(
        n, tuple(tuple(Fraction(0) if i == j else delta for j in range(n)) for i in range(n))
    )


def omega_truncation(n):
    """Points 0..n-1 with d(x, y) = max(x, y) for x != y."""
    return MetricSpace(
        n, tuple(tuple(Fraction(0) if i == j else Fraction(max(i, j)) for j in range(n)) for i in range(n))
    )


FAMILIES = {
    "chain": chain,
    "acyclic_tournament": acyclic_tournament,
    "rotational_tournament": rotational_tournament,
    "copies_of_A2": copies_of_A2,
    "equilateral": equilateral,
    "omega_truncation": omega_truncation,
    "complete_graph": complete_graph,
}


def build_canonical(family, *params):
    try:
        factory = FAMILIES[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None
    for p in params:
        if Fraction(p) <= 0:
            raise ParameterError(f"family parameters must be positive, got {p!r}")
    return factory(*params)


# -- constructions -------------------------------------------------------------

def arrow_sum(S: ReflexiveDigraph, T: ReflexiveDigraph) -> ReflexiveDigraph:
    """S => T: disjoint union, S relabeled first, every s -> t added."""
    off = S.n
    edges = [(x, y) for x, y in S.non_loops()]
    edges += [(x + off, y + off) for x, y in T.non_loops()]
    edges += [(s, t + off) for s in range(S.n) for t in range(T.n)]
    return ReflexiveDigraph.from_edges(S.n + T.n, edges)


def induced_substructure(D: Structure, X: Iterable[int]) -> Structure:
    verts = sorted(set(X))
    if not verts:
        raise ParameterError("induced substructure needs a nonempty vertex set")
    if verts[0] < 0 or verts[-1] >= D.n:
        raise ParameterError("vertex subset outside the carrier")
    if isinstance(D, Chain):
        return Chain(len(verts))
    if isinstance(D, ReflexiveDigraph):
        idx = {v: i for i, v in enumerate(verts)}
        return ReflexiveDigraph.from_edges(
            len(verts), [(idx[x], idx[y]) for x in verts for y in verts if D.has_edge(x, y)]
        )
    if isinstance(D, MetricSpace):
        return MetricSpace(len(verts), tuple(tuple(D.d[i][j] for j in verts) for i in verts))
    raise ParameterError(f"unsupported structure {type(D).__name__}")


def symmetrize(D: ReflexiveDigraph) -> ReflexiveDigraph:
    return ReflexiveDigraph.from_edges(D.n, D.non_loops() + [(y, x) for x, y in D.non_loops()])


def spectrum(M: MetricSpace):
    return sorted({M.d[i][j] for i in range(M.n) for j in range(M.n) if i != j})


def isomorphic(X: ReflexiveDigraph, Y: ReflexiveDigraph):
    """Brute-force isomorphism test; intended for small desk instances."""
    if X.n != Y.n or X.num_non_loops != Y.num_non_loops:
        return False
    edges = X.non_loops()
    return any(
        all(Y.has_edge(p[x], p[y]) for x, y in edges) for p in itertools.permutations(range(X.n))
    )


# -- JSON ----------------------------------------------------------------------

def format_fraction(q: Fraction):
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParameterError(f"not an exact rational: {text!r}") from exc


def to_json(S: Structure) -> dict:
    if isinstance(S, Chain):
        return {"kind": "chain", "n": S.size}
    if isinstance(S, ReflexiveDigraph):
        return {"kind": "digraph", "n": S.n, "adj": S.matrix()}
    if isinstance(S, MetricSpace):
        return {"kind": "metric", "n": S.n, "d": [[format_fraction(v) for v in row] for row in S.d]}
    raise ParameterError(f"unsupported structure {type(S).__name__}")


def from_json(obj) -> Structure:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        kind, n = obj["kind"], obj["n"]
    except (KeyError, TypeError) as exc:
        raise ParameterError("structure JSON needs 'kind' and 'n'") from exc
    if kind == "chain":
        return Chain(n)
    if kind == "digraph":
        D = ReflexiveDigraph.from_matrix(obj["adj"])
        if D.n != n:
            raise ParameterError("'n' disagrees with adjacency matrix size")
        return D
    if kind == "metric":
        M = MetricSpace(len(obj["d"]), tuple(tuple(parse_fraction(v) for v in row) for row in obj["d"]))
        if M.n != n:
            raise ParameterError("'n' disagrees with distance matrix size")
        return M
    raise ParameterError(f"unknown structure kind {kind!r}")
