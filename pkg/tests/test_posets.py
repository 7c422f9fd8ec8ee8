from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymut import lie
from polymut.polytope import box, count_lattice_points, hull, lattice_points
from polymut.posets import (
    AssumptionViolated,
    MarkedPoset,
    NotPure,
    PosetError,
    admissible_u,
    chain_order_polytope,
    chain_polytope,
    counterexample_poset,
    counterexample_witness,
    dumps,
    full_transfer,
    is_admissible,
    is_pure,
    loads,
    order_polytope,
    rank,
    run_factorization,
    shear_datum,
    top_down_order,
    transfer,
    transfer_factorization,
)

# bottom 0, two incomparable middle elements, top 2
DIAMOND = MarkedPoset(("a", "b", "lo", "hi"), [("lo", "a"), ("lo", "b"), ("a", "hi"), ("b", "hi")], {"lo": 0, "hi": 2})
CHAIN = MarkedPoset(("p", "q", "lo", "hi"), [("lo", "p"), ("p", "q"), ("q", "hi")], {"lo": 0, "hi": 3})


def test_validation():
    with pytest.raises(PosetError):
        MarkedPoset(("a", "b"), [("a", "b")], {"a": 0})
    with pytest.raises(PosetError):
        MarkedPoset(("a", "b"), [("a", "b")], {"a": 1, "b": 0})
    with pytest.raises(PosetError):
        MarkedPoset(("a", "b"), [("a", "b"), ("b", "a")], {"a": 0, "b": 0})
    mp = MarkedPoset(("x", "lo", "hi"), [("lo", "x"), ("x", "hi"), ("lo", "hi")], {"lo": 0, "hi": 1})
    assert mp.covers == (("x", "hi"), ("lo", "x"))
    assert mp.less("lo", "hi")


def test_order_and_chain_polytopes_by_hand():
    assert order_polytope(DIAMOND) == box((0, 0), (2, 2))
    # a and b lie on different maximal chains, so nothing couples them
    assert chain_polytope(DIAMOND) == box((0, 0), (2, 2))
    assert order_polytope(CHAIN) == hull([(0, 0), (0, 3), (3, 3)])
    assert chain_polytope(CHAIN) == hull([(0, 0), (3, 0), (0, 3)])


def test_ranks_and_purity():
    assert is_pure(DIAMOND)
    assert rank(DIAMOND) == {"lo": 0, "a": 1, "b": 1, "hi": 2}
    skew = MarkedPoset(("x", "y", "lo", "hi"), [("lo", "x"), ("x", "y"), ("y", "hi"), ("lo", "hi")], {"lo": 0, "hi": 1})
    assert is_pure(skew)
    lopsided = MarkedPoset(
        ("x", "y", "z", "lo", "hi"),
        [("lo", "x"), ("x", "y"), ("y", "hi"), ("lo", "z"), ("z", "hi")],
        {"lo": 0, "hi": 1},
    )
    assert not is_pure(lopsided)
    with pytest.raises(NotPure):
        rank(lopsided)
    with pytest.raises(NotPure):
        transfer_factorization(lopsided)


def test_transfer_values():
    # x_p - max of lower covers, with marked values as constants
    assert full_transfer(DIAMOND, (1, 2)) == (1, 2)
    assert full_transfer(CHAIN, (1, 3)) == (1, 2)
    assert transfer(CHAIN, ["q"], (1, 3)) == (1, 2)
    assert transfer(CHAIN, ["p"], (1, 3)) == (1, 3)


@pytest.mark.parametrize("t,n,lam", [("A", 2, (1, 1)), ("A", 2, (2, 2)), ("C", 2, (1, 1)), ("A", 3, (1, 0, 1))])
def test_transfer_is_a_lattice_bijection(t, n, lam):
    mp = lie.gt_marked_poset(t, n, lam)
    src = lattice_points(order_polytope(mp))
    img = sorted(full_transfer(mp, p) for p in src)
    assert img == lattice_points(chain_polytope(mp))
    assert len(set(img)) == len(src)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=3, max_size=3), st.data())
def test_intermediate_polytopes_are_images(mask, data):
    mp = lie.gt_marked_poset("A", 2, (1, 1))
    pi = [p for p, keep in zip(mp.unmarked, mask) if keep]
    P = order_polytope(mp)
    x = data.draw(st.sampled_from(lattice_points(P)))
    assert chain_order_polytope(mp, pi).contains(transfer(mp, pi, x))
    assert count_lattice_points(chain_order_polytope(mp, pi)) == count_lattice_points(P)


def test_admissible_points():
    assert admissible_u(DIAMOND) == (1, 1)
    assert is_admissible(DIAMOND, (1, 1))
    assert not is_admissible(DIAMOND, (1, 2))
    assert not is_admissible(DIAMOND, (Fraction(1, 2), Fraction(1, 2)))
    assert admissible_u(lie.gt_marked_poset("A", 2, (2, 2))) == (3, 1, 2)
    # markers equal to their ranks give the rank vector
    ranked = MarkedPoset(("p", "q", "lo", "hi"), [("lo", "p"), ("p", "q"), ("q", "hi")], {"lo": 0, "hi": 3})
    assert admissible_u(ranked) == (1, 2)


def test_assumption_violated_on_uneven_markers():
    mp = counterexample_poset((0, 1, 2, 3))
    with pytest.raises(AssumptionViolated):
        admissible_u(mp)
    even = counterexample_poset((0, 2, 2, 4))
    assert is_admissible(even, admissible_u(even))


def test_shear_data_and_order():
    mp = lie.gt_marked_poset("A", 2, (1, 1))
    order = top_down_order(mp)
    assert sorted(order) == sorted(mp.unmarked)
    r = rank(mp)
    assert [r[p] for p in order] == sorted((r[p] for p in order), reverse=True)
    d = shear_datum(CHAIN, "q")
    assert d.w == (0, -1)
    assert d.F == hull([(-1, 0)])
    d = shear_datum(CHAIN, "p")
    assert d.F == hull([(0, 0)])


@pytest.mark.parametrize("t,n,lam", [("A", 2, (2, 2)), ("A", 2, (1, 3)), ("C", 2, (2, 2)), ("C", 2, (1, 0))])
def test_factorization_steps_match(t, n, lam):
    mp = lie.gt_marked_poset(t, n, lam)
    fact = transfer_factorization(mp)
    final, checks = run_factorization(fact)
    assert all(c.matches and c.lattice for c in checks)
    assert fact.image_of_u == full_transfer(mp, fact.u)
    pts = [tuple(a - b for a, b in zip(p, fact.u)) for p in lattice_points(order_polytope(mp))]
    assert count_lattice_points(final) == len(pts)


def test_factorization_of_chain_and_diamond():
    for mp in (CHAIN, DIAMOND):
        final, checks = run_factorization(transfer_factorization(mp))
        assert all(c.matches for c in checks)


def test_counterexample_certificate():
    rep = counterexample_witness((0, 1, 2, 3))
    assert rep.branch_mismatches == []
    assert (rep.coefficient_rank, rep.augmented_rank) == (4, 5)
    assert rep.passed
    with pytest.raises(ValueError):
        counterexample_witness((0, 2, 2, 3))


def test_json_round_trip():
    for mp in (DIAMOND, lie.gt_marked_poset("C", 2, (1, 2)), counterexample_poset()):
        assert loads(dumps(mp)) == mp
