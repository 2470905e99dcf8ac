import itertools

import pytest

from ramsey_forge import structures as st
from ramsey_forge.arrows import (
    Coloring,
    DualArrowInstance,
    HomTables,
    canonical_order_coloring,
    coloring_floor,
    dual_arrow_check,
    find_arrow_size,
    min_t,
    rescore,
    verify_cover,
)
from ramsey_forge.config import Budget
from ramsey_forge.errors import BudgetExceeded, ParameterError
from ramsey_forge.morphisms import all_linear_orders, enumerate_morphisms
from ramsey_forge.structures import Chain, LinearOrder

FANO_MINUS_LINE = {(0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0)}


def brute_holds(inst):
    """Oracle: try every k-coloring of hom(C, A) directly."""
    CA = [f.map for f in enumerate_morphisms(inst.C, inst.A, inst.kind, method="naive")]
    CB = [f.map for f in enumerate_morphisms(inst.C, inst.B, inst.kind, method="naive")]
    BA = [f.map for f in enumerate_morphisms(inst.B, inst.A, inst.kind, method="naive")]
    for colors in itertools.product(range(inst.k), repeat=len(CA)):
        color = dict(zip(CA, colors))
        if all(len({color[tuple(g[x] for x in w)] for g in BA}) > inst.t for w in CB):
            return False
    return True


def brute_min_t(inst):
    t = 1
    while not brute_holds(inst.with_t(t)):
        t += 1
    return t


def chains(a, b, c, k, t=1):
    return DualArrowInstance(Chain(a), Chain(b), Chain(c), k, t, "rigid")


def test_trivial_holds():
    assert dual_arrow_check(chains(2, 2, 3, 2)).holds
    assert dual_arrow_check(chains(2, 3, 4, 2, t=2)).holds


def test_certificate_reproduced():
    inst = chains(2, 3, 4, 2)
    v = dual_arrow_check(inst)
    assert v.holds is False
    CA = [f.map for f in enumerate_morphisms(Chain(4), Chain(2), "rigid")]
    assert {f for f, c in zip(CA, v.bad_coloring) if c == 1} == FANO_MINUS_LINE
    assert v.bad_coloring == (0, 0, 1, 0, 1, 1, 0)
    assert rescore(inst, v.bad_coloring) == v.per_w_counts
    assert len(v.per_w_counts) == 6 and all(c == 2 for c in v.per_w_counts)


def test_certificate_is_lex_least_bad_coloring():
    inst = chains(2, 3, 4, 2)
    tables = HomTables(inst)
    for colors in itertools.product(range(2), repeat=len(tables.CA)):
        if min(tables.image_counts(colors)) > 1:
            break
    assert dual_arrow_check(inst).bad_coloring == colors


@pytest.mark.parametrize("sizes,k,expected", [((2, 2, 3), 2, 1), ((2, 3, 4), 2, 2)])
def test_min_t_examples(sizes, k, expected):
    t, verdicts = min_t(chains(*sizes, k))
    assert t == expected
    assert verdicts[t].holds and all(not v.holds for s, v in verdicts.items() if s < t)


def test_min_t_against_oracle_k3():
    inst = chains(2, 3, 3, 3)
    assert min_t(inst)[0] == brute_min_t(inst)


ORACLE_CASES = [(s, k) for s in [(1, 2, 3), (2, 2, 4), (2, 3, 4), (2, 3, 5), (3, 4, 4), (2, 4, 4)] for k in (2, 3)
                if k ** len(enumerate_morphisms(Chain(s[2]), Chain(s[0]), "rigid")) <= 2**15]


@pytest.mark.parametrize("sizes,k", ORACLE_CASES)
def test_dfs_agrees_with_exhaustive_oracle(sizes, k):
    inst = chains(*sizes, k)
    for t in range(1, k + 1):
        assert dual_arrow_check(inst.with_t(t)).holds == brute_holds(inst.with_t(t))


def test_nonexpansive_instance_against_oracle():
    E = st.equilateral
    inst = DualArrowInstance(E(2, 1), E(3, 1), E(4, 1), 2, 1, "nonexpansive_surjection")
    assert dual_arrow_check(inst).holds == brute_holds(inst)


def test_monotonicity_grid():
    grid = {}
    for c in range(3, 6):
        for k in (1, 2, 3):
            for t in (1, 2, 3):
                grid[c, k, t] = dual_arrow_check(chains(2, 3, c, k, t)).holds
    for (c, k, t), holds in grid.items():
        if not holds:
            continue
        if (c + 1, k, t) in grid:
            assert grid[c + 1, k, t], "larger C keeps the arrow"
        if (c, k, t + 1) in grid:
            assert grid[c, k, t + 1], "larger t keeps the arrow"
        if (c, k - 1, t) in grid:
            assert grid[c, k - 1, t], "fewer colors keeps the arrow"


def test_cover_verifies_when_arrow_holds():
    for inst in (chains(2, 2, 3, 2), chains(2, 3, 4, 2, t=2), chains(2, 3, 4, 3, t=2), chains(1, 2, 4, 3)):
        v = dual_arrow_check(inst)
        assert v.holds
        assert not v.cover_truncated
        assert verify_cover(inst, v.cover)


def test_tampered_cover_rejected():
    inst = chains(2, 3, 4, 3, t=2)
    v = dual_arrow_check(inst)
    assert v.cover_size > 1
    assert not verify_cover(inst, v.cover[1:])
    assert not verify_cover(inst.with_t(1), v.cover)


def test_sharding_independent_of_workers():
    inst = chains(2, 3, 5, 2)
    a = dual_arrow_check(inst, workers=1).to_json()
    b = dual_arrow_check(inst, workers=3).to_json()
    assert a == b


def test_sampling_seeded():
    inst = chains(2, 3, 4, 2)
    a = dual_arrow_check(inst, mode="sampling", samples=500, seed=5)
    b = dual_arrow_check(inst, mode="sampling", samples=500, seed=5)
    assert a.to_json() == b.to_json()
    if a.bad_coloring is not None:
        assert a.holds is False and min(rescore(inst, a.bad_coloring)) > 1
    held = dual_arrow_check(chains(2, 2, 3, 2), mode="sampling", samples=50, seed=1)
    assert held.holds is None and held.samples == 50


def test_budget_exceeded_suggests_sampling():
    with pytest.raises(BudgetExceeded, match="sampling"):
        dual_arrow_check(chains(2, 3, 9, 2), budget=Budget(colorings=2**20))


def test_empty_hom_rejected():
    with pytest.raises(ParameterError):
        dual_arrow_check(chains(2, 4, 3, 2))
    with pytest.raises(ParameterError):
        DualArrowInstance(Chain(1), Chain(1), Chain(1), 0, 1, "rigid")


def test_canonical_order_coloring_examples():
    E3, E2 = st.equilateral(3, 1), st.equilateral(2, 1)
    col = canonical_order_coloring(E3, LinearOrder.identity(3), E2, "nonexpansive_surjection")
    homs = [f.map for f in enumerate_morphisms(E3, E2, "nonexpansive_surjection")]
    orders = [o.perm for o in all_linear_orders(2)]
    by_map = dict(zip(homs, col.colors))
    assert orders[by_map[(0, 0, 1)]] == (0, 1)
    assert orders[by_map[(1, 0, 0)]] == (1, 0)
    assert col.provenance == "canonical_order"
    rigid = canonical_order_coloring(Chain(4), LinearOrder.identity(4), Chain(2), "rigid")
    assert set(rigid.colors) == {orders.index((0, 1))}


def test_canonical_coloring_uses_all_orders_on_equilateral():
    E4, E3 = st.equilateral(4, 1), st.equilateral(3, 1)
    col = canonical_order_coloring(E4, LinearOrder.identity(4), E3, "nonexpansive_surjection")
    assert col.num_colors == 6


def test_coloring_floor_examples():
    E = st.equilateral
    inst = DualArrowInstance(E(2, 1), E(3, 1), E(4, 1), 2, 1, "nonexpansive_surjection")
    tables = HomTables(inst)
    col = canonical_order_coloring(E(4, 1), LinearOrder.identity(4), E(2, 1), "nonexpansive_surjection")
    assert coloring_floor(tables, col) == 2
    assert coloring_floor(tables, [0] * len(tables.CA)) == 1
    cert = chains(2, 3, 4, 2)
    v = dual_arrow_check(cert)
    assert coloring_floor(HomTables(cert), Coloring("x", v.bad_coloring)) == 2
    with pytest.raises(ParameterError):
        coloring_floor(tables, [0])


@pytest.mark.parametrize("sizes,k", [((2, 3, 4), 2), ((2, 3, 5), 2), ((2, 2, 3), 3)])
def test_floor_never_exceeds_min_t(sizes, k):
    inst = chains(*sizes, k)
    t, _ = min_t(inst)
    tables = HomTables(inst)
    for colors in itertools.product(range(k), repeat=len(tables.CA)):
        assert coloring_floor(tables, colors) <= t
        if len(tables.CA) > 8:
            break


def test_find_arrow_size_small():
    res = find_arrow_size(Chain(2), Chain(2), 2, 1, "rigid")
    assert res["found"] == 2 and res["stopped"] == "found"
    res = find_arrow_size(Chain(2), Chain(3), 2, 1, "rigid", cap=5)
    assert res["trail"][:2] == [{"size": 3, "outcome": "fails"}, {"size": 4, "outcome": "fails"}]
    assert res["found"] in (5, None)


def test_find_arrow_size_budget_path():
    res = find_arrow_size(Chain(2), Chain(3), 2, 1, "rigid", cap=12, budget=Budget(colorings=2**12))
    assert res["stopped"] in ("budget_exceeded", "found")
    if res["stopped"] == "budget_exceeded":
        assert res["trail"][-1]["outcome"] == "budget_exceeded"


def test_verdict_json_shape():
    v = dual_arrow_check(chains(2, 3, 4, 2)).to_json()
    assert v == {"holds": False, "mode": "exhaustive", "bad_coloring": [0, 0, 1, 0, 1, 1, 0], "per_w_counts": [2] * 6}
    inst = chains(2, 3, 4, 2)
    assert inst.to_json()["kind"] == "rigid_surjection"
