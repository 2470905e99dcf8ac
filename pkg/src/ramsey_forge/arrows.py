"""Exhaustive decision of dual Ramsey arrows on finite instances.

For an instance (A, B, C, k, t, kind) the arrow holds when every k-coloring
of hom(C, A) admits some w in hom(C, B) whose composites g . w, g in hom(B, A),
receive at most t colors.

Colorings are searched in restricted-growth form (first occurrences of colors
appear in increasing order) and in the canonical morphism order, so the first
bad coloring found is the lexicographically least one up to color renaming.
A prefix is abandoned as soon as some w is guaranteed to stay within t colors
whatever the completion; those (prefix, w) pairs form a cover certificate
when the arrow holds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import structures as st
from .config import Budget
from .errors import BudgetExceeded, InternalCheckError, ParameterError
from .morphisms import (
    LinearOrder,
    MorphismKind,
    all_linear_orders,
    compose,
    enumerate_morphisms,
    induced_dual_restriction,
)
from .parallel import ordered_map

SHARD_DEPTH = 8


@dataclass(frozen=True)
class DualArrowInstance:
    A: object
    B: object
    C: object
    k: int
    t: int
    kind: MorphismKind
    order_A: Optional[object] = None
    order_B: Optional[object] = None
    order_C: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MorphismKind.parse(self.kind))
        if self.k < 1 or self.t < 1:
            raise ParameterError("k and t must be positive")

    def with_t(self, t):
        return DualArrowInstance(self.A, self.B, self.C, self.k, t, self.kind, self.order_A, self.order_B, self.order_C)

    def to_json(self):
        out = {
            "A": st.to_json(self.A),
            "B": st.to_json(self.B),
            "C": st.to_json(self.C),
            "k": self.k,
            "t": self.t,
            "kind": self.kind.value,
        }
        for name in ("order_A", "order_B", "order_C"):
            o = getattr(self, name)
            if o is not None:
                out[name] = list(o.perm) if isinstance(o, LinearOrder) else [list(e) for e in o.edges]
        return out


@dataclass(frozen=True)
class Coloring:
    target: str
    colors: tuple
    provenance: str = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.provenance not in {"explicit", "canonical_order", "adversarial"}:
            raise ParameterError(f"unknown coloring provenance {self.provenance!r}")

    @property
    def num_colors(self):
        return len(set(self.colors))


@dataclass
class Verdict:
    holds: Optional[bool]
    mode: str = "exhaustive"
    bad_coloring: Optional[tuple] = None
    per_w_counts: Optional[list] = None
    cover: Optional[list] = None
    cover_size: int = 0
    cover_truncated: bool = False
    shards: int = 0
    samples: int = 0
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {"holds": self.holds, "mode": self.mode}
        if self.bad_coloring is not None:
            out["bad_coloring"] = list(self.bad_coloring)
            out["per_w_counts"] = list(self.per_w_counts)
        if self.cover is not None:
            out["cover"] = [{"prefix": list(p), "w": w} for p, w in self.cover]
            out["cover_size"] = self.cover_size
            out["cover_truncated"] = self.cover_truncated
        if self.mode == "sampling":
            out["samples"] = self.samples
        return out


def _hom(X, Y, kind, oX, oY, budget):
    return enumerate_morphisms(X, Y, kind, oX, oY, max_morphisms=budget.morphisms)


class HomTables:
    """Enumerated hom-sets of an instance and the composite index table."""

    def __init__(self, inst: DualArrowInstance, budget: Budget = Budget()):
        self.inst = inst
        kind = inst.kind
        self.CA = _hom(inst.C, inst.A, kind, inst.order_C, inst.order_A, budget)
        self.CB = _hom(inst.C, inst.B, kind, inst.order_C, inst.order_B, budget)
        self.BA = _hom(inst.B, inst.A, kind, inst.order_B, inst.order_A, budget)
        self.index = {f.map: i for i, f in enumerate(self.CA)}
        self.w_sets = []
        for w in self.CB:
            idx = set()
            for g in self.BA:
                h = compose(g, w).map
                if h not in self.index:
                    raise InternalCheckError(f"composite {h} left the hom-set; class not closed under composition")
                idx.add(self.index[h])
            self.w_sets.append(tuple(sorted(idx)))

    @property
    def target_id(self):
        return f"hom(C,A)[{self.inst.kind.value}]#{len(self.CA)}"

    def image_counts(self, colors):
        return [len({colors[i] for i in s}) for s in self.w_sets]


# -- search kernel ---------------------------------------------------------------

def _search(problem, prefix, depth_limit, max_cover):
    """DFS over restricted-growth colorings extending ``prefix``.

    Returns ``(bad, cover, covered_count, shards)`` where ``bad`` is the first
    bad coloring found (or None), ``cover`` lists (prefix, w) entries up to
    ``max_cover`` and ``shards`` lists unexplored prefixes at ``depth_limit``.
    """
    N, k, t, w_sets, member = problem
    W = len(w_sets)
    counts = [[0] * k for _ in range(W)]
    distinct = [0] * W
    uncolored = [len(s) for s in w_sets]
    colors = [-1] * N
    cover, shards = [], []
    covered = 0

    def settled(w):
        return min(k, distinct[w] + uncolored[w]) <= t

    def assign(i, c):
        colors[i] = c
        for w in member[i]:
            if counts[w][c] == 0:
                distinct[w] += 1
            counts[w][c] += 1
            uncolored[w] -= 1

    def unassign(i):
        c = colors[i]
        for w in member[i]:
            counts[w][c] -= 1
            if counts[w][c] == 0:
                distinct[w] -= 1
            uncolored[w] += 1
        colors[i] = -1

    def add_cover(length, w):
        nonlocal covered
        covered += 1
        if len(cover) < max_cover:
            cover.append((tuple(colors[:length]), w))

    top = -1
    for i, c in enumerate(prefix):
        assign(i, c)
        top = max(top, c)
    start = len(prefix)
    done = next((w for w in range(W) if settled(w)), None)
    if done is not None:
        add_cover(start, done)
        return None, cover, covered, shards

    def rec(i, top):
        if i == N:
            return tuple(colors)
        for c in range(min(top + 2, k)):
            assign(i, c)
            good = next((w for w in member[i] if settled(w)), None)
            if good is not None:
                add_cover(i + 1, good)
            elif depth_limit is not None and i + 1 >= depth_limit and i + 1 < N:
                shards.append(tuple(colors[: i + 1]))
            else:
                res = rec(i + 1, max(top, c))
                if res is not None:
                    unassign(i)
                    return res
            unassign(i)
        return None

    bad = rec(start, top)
    return bad, cover, covered, shards


def _run_shard(args):
    problem, prefix, max_cover = args
    return _search(problem, prefix, None, max_cover)


def _problem(tables, k, t):
    N = len(tables.CA)
    member = [[] for _ in range(N)]
    for w, s in enumerate(tables.w_sets):
        for i in s:
            member[i].append(w)
    return (N, k, t, tables.w_sets, member)


def dual_arrow_check(
    inst: DualArrowInstance,
    *,
    budget: Budget = Budget(),
    workers=1,
    mode="exhaustive",
    samples=10000,
    seed=0,
    tables: Optional[HomTables] = None,
) -> Verdict:
    tables = tables or HomTables(inst, budget)
    if not tables.CB:
        raise ParameterError("hom(C, B) is empty; the arrow statement is meaningless")
    N = len(tables.CA)
    if mode == "sampling":
        return _sample(inst, tables, samples, seed)
    if mode != "exhaustive":
        raise ParameterError(f"unknown mode {mode!r}")
    space = inst.k**N
    if space > budget.colorings:
        raise BudgetExceeded(
            f"{inst.k}^{N} colorings exceed the budget of {budget.colorings}; use sampling mode",
            bound="colorings",
            needed=space,
        )
    problem = _problem(tables, inst.k, inst.t)
    bad, cover, covered, shards = _search(problem, (), SHARD_DEPTH, budget.cover_entries)
    cover_total = covered
    if bad is None and shards:
        tasks = [(problem, p, budget.cover_entries) for p in shards]
        for res in ordered_map(_run_shard, tasks, workers, stop=lambda r: r[0] is not None):
            s_bad, s_cover, s_covered, _ = res
            room = budget.cover_entries - len(cover)
            cover.extend(s_cover[: max(0, room)])
            cover_total += s_covered
            if s_bad is not None:
                bad = s_bad
                break
    verdict = Verdict(holds=bad is None, shards=len(shards))
    if bad is not None:
        verdict.bad_coloring = bad
        verdict.per_w_counts = tables.image_counts(bad)
        if min(verdict.per_w_counts) <= inst.t:
            raise InternalCheckError("search returned a coloring that some w keeps within t colors")
    else:
        verdict.cover = cover
        verdict.cover_size = cover_total
        verdict.cover_truncated = cover_total > len(cover)
    return verdict


def _sample(inst, tables, samples, seed):
    rng = random.Random(seed)
    N = len(tables.CA)
    for trial in range(samples):
        colors = tuple(rng.randrange(inst.k) for _ in range(N))
        counts = tables.image_counts(colors)
        if min(counts) > inst.t:
            return Verdict(False, mode="sampling", bad_coloring=colors, per_w_counts=counts, samples=trial + 1)
    return Verdict(None, mode="sampling", samples=samples)


def rescore(inst: DualArrowInstance, colors, method="naive"):
    """Per-w color counts computed straight from the definitions.

    Independent of :class:`HomTables`: hom-sets come from the naive scan and
    composites are looked up by map value.
    """
    kind = inst.kind
    CA = enumerate_morphisms(inst.C, inst.A, kind, inst.order_C, inst.order_A, method=method)
    CB = enumerate_morphisms(inst.C, inst.B, kind, inst.order_C, inst.order_B, method=method)
    BA = enumerate_morphisms(inst.B, inst.A, kind, inst.order_B, inst.order_A, method=method)
    if len(colors) != len(CA):
        raise ParameterError("coloring length does not match |hom(C, A)|")
    color_of = {f.map: c for f, c in zip(CA, colors)}
    counts = []
    for w in CB:
        seen = set()
        for g in BA:
            seen.add(color_of[tuple(g.map[w.map[x]] for x in range(inst.C.n))])
        counts.append(len(seen))
    return counts


def verify_cover(inst: DualArrowInstance, cover, tables: Optional[HomTables] = None):
    """Check that cover entries are individually sound and jointly exhaustive.

    Every restricted-growth coloring must extend exactly one prefix in the
    cover, and the named w must stay within t colors for every completion.
    """
    tables = tables or HomTables(inst)
    N, k, t = len(tables.CA), inst.k, inst.t
    entries = {tuple(p): w for p, w in cover}
    for p, w in entries.items():
        s = tables.w_sets[w]
        fixed = {p[i] for i in s if i < len(p)}
        free = sum(1 for i in s if i >= len(p))
        if min(k, len(fixed) + free) > t:
            return False

    def walk(prefix, top):
        if prefix in entries:
            return True
        if len(prefix) == N:
            return False
        return all(walk(prefix + (c,), max(top, c)) for c in range(min(top + 2, k)))

    return walk((), -1)


def min_t(inst: DualArrowInstance, **kwargs):
    """Smallest t for which the arrow holds, with the verdict for every t tried."""
    budget = kwargs.get("budget", Budget())
    tables = kwargs.pop("tables", None) or HomTables(inst, budget)
    ceiling = min(inst.k, len(tables.BA))
    verdicts = {}
    for t in range(1, ceiling + 1):
        v = dual_arrow_check(inst.with_t(t), tables=tables, **kwargs)
        verdicts[t] = v
        if v.holds:
            return t, verdicts
    raise InternalCheckError(f"arrow failed at t = {ceiling}, which bounds every image size")


# -- colorings -----------------------------------------------------------------

def canonical_order_coloring(C, order_C: LinearOrder, A, kind, order_A=None, budget: Budget = Budget()):
    """Color each surjection by the order it induces on A (index among all |A|! orders)."""
    kind = MorphismKind.parse(kind)
    oc = order_C if kind in {MorphismKind.RIGID_SURJECTION, MorphismKind.NONEXPANSIVE_RIGID_SURJECTION} else None
    oa = order_A if oc is not None else None
    if oc is not None and oa is None and isinstance(A, st.Chain):
        oa = LinearOrder.identity(A.n)
    homs = enumerate_morphisms(C, A, kind, oc, oa, max_morphisms=budget.morphisms)
    orders = {o.perm: i for i, o in enumerate(all_linear_orders(A.n))}
    colors = tuple(orders[induced_dual_restriction(f, order_C).perm] for f in homs)
    return Coloring(f"hom(C,A)[{kind.value}]#{len(homs)}", colors, "canonical_order")


def coloring_floor(tables: HomTables, coloring) -> int:
    """min over w of the number of colors on w's composites."""
    colors = coloring.colors if isinstance(coloring, Coloring) else tuple(coloring)
    if not tables.CB:
        raise ParameterError("hom(C, B) is empty; the floor is undefined")
    if len(colors) != len(tables.CA):
        raise ParameterError("coloring length does not match |hom(C, A)|")
    return min(tables.image_counts(colors))


def find_arrow_size(A, B, k, t, kind, *, start=None, cap=32, budget: Budget = Budget(), workers=1):
    """Search chain sizes upward for the first C with C -> (B)^A_{k,t}.

    Returns a dict with the size found (or None) and per-size outcomes; a
    size whose coloring space exceeds the budget stops the search with
    outcome ``"budget_exceeded"``.
    """
    start = start or B.n
    trail = []
    for size in range(start, cap + 1):
        C = st.Chain(size)
        inst = DualArrowInstance(A, B, C, k, t, kind)
        try:
            v = dual_arrow_check(inst, budget=budget, workers=workers)
        except BudgetExceeded as exc:
            trail.append({"size": size, "outcome": "budget_exceeded", "needed": exc.needed})
            return {"found": None, "trail": trail, "stopped": "budget_exceeded"}
        trail.append({"size": size, "outcome": "holds" if v.holds else "fails"})
        if v.holds:
            return {"found": size, "trail": trail, "stopped": "found"}
    return {"found": None, "trail": trail, "stopped": "cap"}


__all__ = [
    "Coloring",
    "DualArrowInstance",
    "HomTables",
    "Verdict",
    "canonical_order_coloring",
    "coloring_floor",
    "dual_arrow_check",
    "find_arrow_size",
    "min_t",
    "rescore",
    "verify_cover",
]
