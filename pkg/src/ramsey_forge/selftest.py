"""Micro-suites run by ``ramsey-forge selftest``; each finishes in seconds."""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

from . import arrows, expansions, metric, preadjunction, tournaments
from . import structures as st
from .morphisms import MorphismKind, check, enumerate_morphisms


def _stirling2(n, k):
    row = [1] + [0] * k
    for i in range(1, n + 1):
        row = [0] + [j * row[j] + row[j - 1] for j in range(1, k + 1)]
    return row[k] if n else int(k == 0)


def rigid_counts():
    bad = [
        (m, k)
        for m in range(1, 7)
        for k in range(1, m + 1)
        if len(enumerate_morphisms(st.Chain(m), st.Chain(k), MorphismKind.RIGID_SURJECTION)) != _stirling2(m, k)
    ]
    return not bad, {"mismatches": bad}


def arrow_certificate():
    inst = arrows.DualArrowInstance(st.Chain(2), st.Chain(3), st.Chain(4), 2, 1, "rigid")
    v = arrows.dual_arrow_check(inst)
    counts = arrows.rescore(inst, v.bad_coloring) if v.bad_coloring else []
    t, _ = arrows.min_t(inst)
    ok = v.holds is False and all(c > 1 for c in counts) and t == 2
    return ok, {"bad_coloring": list(v.bad_coloring or ()), "min_t": t}


def tidy_fibers():
    bad = []
    for n in range(1, 4):
        for D in preadjunction.all_reflexive_digraphs(n):
            got = len(expansions.fibers(D, "tidy_edge_order"))
            if got != math.factorial(n) * math.factorial(D.num_non_loops):
                bad.append(st.to_json(D))
    return not bad, {"mismatches": len(bad)}


def pa_micro():
    rep = preadjunction.pa_sweep(max_x=4)
    return rep["ok"], {"instances": rep["instances"], "failures": len(rep["failures"])}


def no_degree():
    rep = tournaments.no_degree_certificate(2)
    return rep["holds"], {"distinct_colors": rep["distinct_colors"]}


def siblings_small():
    same = tournaments.sibling_search(3, 3, 3)
    apart = tournaments.sibling_search(3, 5, 5)
    return same["found"] and not apart["found"], {"3_3_3": same.get("code"), "3_5_5": apart["found"]}


def projections():
    rng = random.Random(7)
    checked = 0
    for _ in range(40):
        n = rng.randint(1, 5)
        d = [[Fraction(0)] * n for _ in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            d[i][j] = d[j][i] = Fraction(rng.randint(1, 10))
        try:
            M = st.MetricSpace.from_matrix(d)
        except ValueError:
            continue
        N, q = metric.universal_projection(M)
        if not check(q, st.omega_truncation(N), M, MorphismKind.NONEXPANSIVE_SURJECTION):
            return False, {"failed": st.to_json(M)}
        checked += 1
    return True, {"checked": checked}


def self_similar():
    for n in range(1, 6):
        for p in itertools.permutations(range(n)):
            res = metric.self_similar_rigid(p)
            if not res.complete:
                return False, {"incomplete": list(p)}
    return True, {}


def bounds():
    rep = expansions.bound_report(st.copies_of_A2(1), "digraph")
    return [b["bound"] for b in rep["bounds"]] == [2, 8], {"bounds": [b["bound"] for b in rep["bounds"]]}


SUITES = [
    ("rigid_counts", rigid_counts),
    ("arrow_certificate", arrow_certificate),
    ("tidy_fibers", tidy_fibers),
    ("pa_micro", pa_micro),
    ("no_degree", no_degree),
    ("siblings_small", siblings_small),
    ("projections", projections),
    ("self_similar", self_similar),
    ("bounds", bounds),
]


def run(timings=False):
    results = []
    for name, fn in SUITES:
        t0 = time.perf_counter()
        ok, detail = fn()
        row = {"suite": name, "passed": bool(ok), "detail": detail}
        if timings:
            row["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(row)
    return {"suites": results, "passed": all(r["passed"] for r in results)}
