import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from ramsey_forge import structures as st
from ramsey_forge.errors import BudgetExceeded, ParameterError, PreconditionError
from ramsey_forge.morphisms import (
    Morphism,
    MorphismKind,
    all_linear_orders,
    check,
    compose,
    edge_map,
    enumerate_morphisms,
    induced_dual_restriction,
)
from ramsey_forge.structures import Chain, EdgeOrder, LinearOrder

from conftest import all_digraphs, all_graphs, stirling2

K = MorphismKind


def maps(X, Y, kind, **kw):
    return [f.map for f in enumerate_morphisms(X, Y, kind, **kw)]


def test_check_examples():
    assert check([0, 0, 1], Chain(3), Chain(2), "rigid")
    res = check([1, 0], Chain(2), Chain(2), "rigid")
    assert not res and res.reason == "not_rigid" and res.witness == (0, 1, 1, 0)
    assert check([0, 0, 1], st.equilateral(3, 1), st.equilateral(2, 1), "nonexpansive_surjection")


def test_check_failure_witnesses():
    A2, A3 = st.acyclic_tournament(2), st.acyclic_tournament(3)
    assert check([0, 0], A2, A2, "quotient").reason == "not_surjective"
    assert check([1, 0], A2, A2, "hom").reason == "not_preserved"
    K2 = st.complete_graph(2)
    assert check([0, 1], A2, K2, "quotient").reason == "not_reflected"
    assert check([0, 0], st.acyclic_tournament(2), st.acyclic_tournament(1), "embedding").reason == "not_injective"
    assert check([0, 1], st.equilateral(2, 1), st.equilateral(2, 2), "nonexpansive_surjection").reason == "expands"
    assert check([0, 0, 1], A3, A2, "quotient")


def test_orders_required_and_rejected():
    M = st.equilateral(2, 1)
    with pytest.raises(ParameterError):
        check([0, 1], M, M, "nonexpansive_rigid_surjection")
    with pytest.raises(ParameterError):
        check([0, 1], M, M, "nonexpansive_surjection", LinearOrder((0, 1)), LinearOrder((0, 1)))
    with pytest.raises(ParameterError):
        check([0, 1], st.copies_of_A2(1), st.copies_of_A2(1), "qrs")
    with pytest.raises(ParameterError):
        check([0, 2], Chain(2), Chain(2), "rigid")


def test_edge_map_examples():
    A2 = st.acyclic_tournament(2)
    assert edge_map([0, 1], A2, A2) == {(0, 0): (0, 0), (1, 1): (1, 1), (0, 1): (0, 1)}
    assert set(edge_map([0, 0], A2, st.acyclic_tournament(1)).values()) == {(0, 0)}
    em = edge_map([0, 1, 1], st.acyclic_tournament(3), A2)
    assert em[(0, 1)] == (0, 1) and em[(0, 2)] == (0, 1) and em[(1, 2)] == (1, 1)
    with pytest.raises(PreconditionError):
        edge_map([1, 0], A2, A2)


def test_enumerate_examples():
    assert maps(Chain(3), Chain(2), "rigid") == [(0, 0, 1), (0, 1, 0), (0, 1, 1)]
    for n in range(1, 6):
        assert maps(Chain(n), Chain(n), "rigid") == [tuple(range(n))]
    assert maps(st.acyclic_tournament(3), st.acyclic_tournament(2), "quotient") == [(0, 0, 1), (0, 1, 1)]


@pytest.mark.parametrize("m", range(1, 9))
def test_rigid_counts_are_stirling(m):
    for k in range(1, m + 1):
        assert len(enumerate_morphisms(Chain(m), Chain(k), "rigid")) == stirling2(m, k)


def test_budget_guard():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_morphisms(Chain(8), Chain(3), "rigid", max_morphisms=100)
    assert exc.value.bound == "max_morphisms"


def _pairs_for_cross_validation():
    yield Chain(4), Chain(3), "rigid", None, None
    yield Chain(5), Chain(2), "rigid", None, None
    yield Chain(4), Chain(3), "rigid", LinearOrder((2, 0, 3, 1)), LinearOrder((1, 2, 0))
    for n in (1, 2, 3):
        for D in all_digraphs(n):
            for kind in ("hom", "surjective_hom", "quotient", "embedding"):
                yield D, st.acyclic_tournament(2), kind, None, None
                yield st.rotational_tournament(3), D, kind, None, None
    E3, E2, O3 = st.equilateral(3, 1), st.equilateral(2, 1), st.omega_truncation(3)
    for X, Y in ((E3, E2), (O3, E2), (O3, st.equilateral(2, 2)), (st.omega_truncation(4), O3)):
        yield X, Y, "nonexpansive_surjection", None, None
        yield X, Y, "hom", None, None
        for oX in all_linear_orders(X.n):
            yield X, Y, "nonexpansive_rigid_surjection", oX, LinearOrder.identity(Y.n)
    A3, A2 = st.acyclic_tournament(3), st.copies_of_A2(1)
    for eo in itertools.permutations(A3.loops()):
        for nl in itertools.permutations(A3.non_loops()):
            yield A3, A2, "qrs", EdgeOrder(eo + nl), EdgeOrder(A2.edges())
            yield A3, A2, "qrm", EdgeOrder(nl), EdgeOrder(A2.edges())


def test_backtracking_matches_naive_scan():
    cases = 0
    for X, Y, kind, oX, oY in _pairs_for_cross_validation():
        fast = maps(X, Y, kind, order_X=oX, order_Y=oY)
        slow = maps(X, Y, kind, order_X=oX, order_Y=oY, method="naive")
        assert fast == slow, (kind, X, Y)
        assert fast == sorted(fast)
        cases += 1
    assert cases > 100


def test_compose_examples():
    f = Morphism(4, 3, (0, 0, 1, 2), K.RIGID_SURJECTION)
    g = Morphism(3, 2, (0, 1, 1), K.RIGID_SURJECTION)
    h = compose(g, f)
    assert h.map == (0, 0, 1, 1) and h.kind is K.RIGID_SURJECTION
    assert check(h.map, Chain(4), Chain(2), "rigid")
    ident = Morphism(2, 2, (0, 1), K.RIGID_SURJECTION)
    assert compose(ident, g).map == g.map
    q1 = Morphism(3, 2, (0, 0, 1), K.QUOTIENT)
    q2 = Morphism(2, 1, (0, 0), K.QUOTIENT)
    assert compose(q2, q1).map == (0, 0, 0)
    with pytest.raises(ParameterError):
        compose(g, g)


def test_compose_mixed_kinds_downgrade():
    f = Morphism(3, 2, (0, 0, 1), K.QUOTIENT)
    g = Morphism(2, 2, (0, 1), K.SURJECTIVE_HOM)
    assert compose(g, f).kind is K.SURJECTIVE_HOM


@pytest.mark.parametrize(
    "kind,structs",
    [
        ("rigid", [Chain(n) for n in (1, 2, 3, 4)]),
        ("quotient", [st.acyclic_tournament(1), st.acyclic_tournament(2), st.acyclic_tournament(3),
                      st.rotational_tournament(3), st.copies_of_A2(2)]),
        ("nonexpansive_surjection", [st.equilateral(1), st.equilateral(2, 1), st.omega_truncation(3),
                                     st.equilateral(3, 1), st.omega_truncation(4)]),
    ],
)
def test_composition_closure(kind, structs):
    for X, Y, Z in itertools.product(structs, repeat=3):
        for f in enumerate_morphisms(X, Y, kind):
            for g in enumerate_morphisms(Y, Z, kind):
                h = compose(g, f)
                assert check(h.map, X, Z, kind), (kind, f.map, g.map)


def test_restriction_examples():
    assert induced_dual_restriction([1, 0, 0], LinearOrder((0, 1, 2))) == LinearOrder((1, 0))
    assert induced_dual_restriction([0, 0, 1], LinearOrder((0, 1, 2))) == LinearOrder((0, 1))
    A2, pt = st.copies_of_A2(1), st.acyclic_tournament(1)
    r = induced_dual_restriction([0, 0], EdgeOrder(((0, 0), (1, 1), (0, 1))), A2, pt)
    assert r == EdgeOrder(((0, 0),)) and r.is_tidy
    with pytest.raises(PreconditionError):
        induced_dual_restriction([0, 0], LinearOrder((0, 1)), cod_size=2)


def test_restriction_is_unique_rigidifier():
    for n in range(1, 6):
        for m in range(1, min(n, 5) + 1):
            for f in itertools.product(range(m), repeat=n):
                if len(set(f)) < m:
                    continue
                for oX in (LinearOrder.identity(n), LinearOrder(tuple(reversed(range(n))))):
                    hits = [o for o in all_linear_orders(m) if check(f, Chain(n), Chain(m), "rigid", oX, o)]
                    assert hits == [induced_dual_restriction(f, oX, cod_size=m)]


@settings(max_examples=200, deadline=None)
@given(hs.integers(1, 6), hs.data())
def test_restriction_unique_random_orders(n, data):
    m = data.draw(hs.integers(1, min(n, 5)))
    f = data.draw(hs.lists(hs.integers(0, m - 1), min_size=n, max_size=n).filter(lambda v: len(set(v)) == m))
    oX = LinearOrder(tuple(data.draw(hs.permutations(range(n)))))
    hits = [o for o in all_linear_orders(m) if check(f, Chain(n), Chain(m), "rigid", oX, o)]
    assert hits == [induced_dual_restriction(f, oX, cod_size=m)]


def test_symmetrized_quotient_stays_quotient():
    checked = 0
    for n in range(1, 5):
        digraphs = list(all_digraphs(n)) if n <= 3 else [st.acyclic_tournament(4), st.rotational_tournament(3)]
        for D in digraphs:
            for m in range(1, min(n, 3) + 1):
                for G in all_graphs(m):
                    for f in enumerate_morphisms(D, G, "quotient"):
                        assert check(f.map, st.symmetrize(D), G, "quotient")
                        checked += 1
    assert checked > 50


def test_morphism_validation_and_json():
    with pytest.raises(ParameterError):
        Morphism(3, 2, (0, 0, 0), K.RIGID_SURJECTION)
    f = Morphism(3, 2, (0, 1, 1), K.QUOTIENT)
    assert Morphism.from_json(f.to_json(), cod_size=2) == f
    assert f.to_json() == {"map": [0, 1, 1], "kind": "quotient"}


def test_kind_aliases():
    assert K.parse("qrs") is K.QUOTIENT_RIGID_SURJECTION
    with pytest.raises(ParameterError):
        K.parse("bijection")


def test_quotient_rigid_surjection_counts_small():
    # identity is the only tidy-order-preserving automorphism-like qrs A_2 -> A_2 with matching orders
    A2 = st.copies_of_A2(1)
    o = EdgeOrder(((0, 0), (1, 1), (0, 1)))
    assert maps(A2, A2, "qrs", order_X=o, order_Y=o) == [(0, 1)]
    swapped = EdgeOrder(((1, 1), (0, 0), (0, 1)))
    assert maps(A2, A2, "qrs", order_X=o, order_Y=swapped) == []
    assert math.factorial(2) == len([e for e in (o, swapped)])
