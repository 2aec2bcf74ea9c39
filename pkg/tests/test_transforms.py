import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from passalloc.problem import GENERAL, classify_subdomain, derived_indices, revenue, validate
from passalloc.rules import CANONICAL, allocate
from passalloc.transforms import (
    ConsortiumSplitSpec,
    MuseumSplitSpec,
    TransformError,
    concat,
    reduce_problem,
    restrict,
    split_consortium,
    split_holders,
    split_museum,
)
from passalloc.axioms import random_consortium_split, random_museum_split

from conftest import museum_problem, problems, seeds


def test_concat_round_trip(ex1):
    d1, d2 = split_holders(ex1, {5})
    assert d1.all_holders() == [5]
    pooled = concat(d1, d2)
    assert sorted(map(str, pooled.all_holders())) == sorted(map(str, ex1.all_holders()))
    for rule in CANONICAL:
        assert allocate(rule, pooled) == allocate(rule, ex1)


def test_concat_empty_is_identity(ex1):
    full, empty = split_holders(ex1, set(ex1.all_holders()))
    assert concat(full, empty) == ex1


def test_concat_two_single_holders():
    base = dict(m=2, consortia=[(1, 2)], prices={0: 4, 1: 3, -1: 2, -2: 1})
    d1 = museum_problem(**base, passes={0: {"a": {1}}})
    d2 = museum_problem(**base, passes={0: {"b": {1, 2}}})
    mat = concat(d1, d2).consumption[GENERAL]
    assert mat.cols == ("a", "b") and mat.cells == ((1, 1), (0, 1))


def test_concat_rejects_mismatch(ex1):
    d1, d2 = split_holders(ex1, {5})
    with pytest.raises(TransformError):
        concat(d1, d1)
    from passalloc.transforms import with_price
    with pytest.raises(TransformError):
        concat(d1, with_price(d2, 0, 5))


def test_split_museum_example1(ex1):
    out = split_museum(ex1, MuseumSplitSpec(2, (1, 1)))
    d = out.problem
    assert validate(d).ok and d.m == 4 and out.pieces == (2, 4)
    assert d.consortia[0] == (1, 2, 4)
    assert set(d.holders(-2)) == {1, 2, 3} and set(d.holders(-4)) == {"1#2", "2#2", "3#2"}
    assert derived_indices(d).visits[5] == {1, 2, 3, 4}


def test_split_museum_rejects_one_piece(ex1):
    with pytest.raises(TransformError):
        split_museum(ex1, MuseumSplitSpec(2, (2,)))
    with pytest.raises(TransformError):
        split_museum(ex1, MuseumSplitSpec(2, (1, 2)))


def test_split_museum_without_individual_sales_keeps_revenue(ex1):
    d = restrict(ex1, 0)
    assert revenue(split_museum(d, MuseumSplitSpec(1, (F(1, 3), F(2, 3)))).problem) == revenue(d)


def test_split_consortium_example1(ex1):
    out = split_consortium(ex1, ConsortiumSplitSpec(2, (2, 1)))
    d = out.problem
    assert validate(d).ok and d.m == 4 and d.s == 3
    assert out.copies == (2, 3) and out.museum_copies == {3: (3, 4)}
    assert set(d.holders(2)) == {9, 10} and set(d.holders(3)) == {"9#2", "10#2"}
    assert out.revenue_delta == 0


def test_split_consortium_rejects_one_copy(ex1):
    with pytest.raises(TransformError):
        split_consortium(ex1, ConsortiumSplitSpec(2, (3,)))


def test_split_consortium_widens_general_visits(ex1):
    d = split_consortium(ex1, ConsortiumSplitSpec(2, (2, 1))).problem
    idx = derived_indices(d)
    assert idx.general_consortia[5] == {1, 2, 3}
    assert idx.general_consortia[6] == {2, 3}


def test_reduce_example1(ex1):
    r = reduce_problem(restrict(ex1, 0))
    assert r.m == 2 and r.consortia == ((1,), (2,))
    mat = r.consumption[GENERAL]
    assert mat.cols == (5, 6) and mat.cells == ((1, 0), (1, 1))
    assert r.price(-1) == r.price(1) == 2 and r.price(-2) == r.price(2) == 3


def test_reduce_needs_general_only(ex1):
    with pytest.raises(TransformError):
        reduce_problem(ex1)


def test_restrict_example1(ex1):
    parts = [revenue(restrict(ex1, s)) for s in ex1.sigmas]
    assert parts == [0, 6, 1, 8, 4, 6]
    d = restrict(ex1, 0)
    assert classify_subdomain(d) == 0 and d.all_holders() == [5, 6]
    assert restrict(d, 0) == d


@given(problems, seeds)
def test_museum_split_preserves_individual_revenue(d, seed):
    spec = random_museum_split(d, random.Random(seed))
    out = split_museum(d, spec)
    i = spec.target
    before = d.price(-i) * len(d.holders(-i))
    after = sum(out.problem.price(-p) * len(out.problem.holders(-p)) for p in out.pieces)
    assert before == after
    assert revenue(out.problem) == revenue(d)


@given(problems, seeds)
def test_consortium_split_preserves_visited_price_sums(d, seed):
    spec = random_consortium_split(d, random.Random(seed))
    out = split_consortium(d, spec)
    old, new = derived_indices(d), derived_indices(out.problem)
    for a in d.holders(GENERAL):
        assert sum(d.price(t) for t in old.general_consortia[a]) == sum(
            out.problem.price(t) for t in new.general_consortia[a])
    assert out.revenue_delta == 0


@given(problems)
def test_reduce_preserves_general_revenue(d):
    d0 = restrict(d, GENERAL)
    r = reduce_problem(d0)
    assert revenue(r) == revenue(d0) and classify_subdomain(r) == 0


@given(problems, seeds, st.sampled_from(CANONICAL))
def test_concat_commutes_under_canonical_rules(d, seed, rule):
    rng = random.Random(seed)
    first = {a for a in d.all_holders() if rng.random() < 0.5}
    d1, d2 = split_holders(d, first)
    assert allocate(rule, concat(d1, d2)) == allocate(rule, concat(d2, d1))
