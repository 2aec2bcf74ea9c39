import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import passalloc
from passalloc.io import (
    ProblemFileError,
    format_fraction,
    parse_fraction,
    parse_problem,
    problem_from_dict,
    problem_to_dict,
    serialize_problem,
)
from passalloc.problem import InvalidProblemError, revenue

from conftest import museum_problem

EX1_PATH = passalloc.__path__[0] + "/example1.json"


def small(price="2.50"):
    return {
        "museums": 2,
        "consortia": [[1, 2]],
        "passes": [
            {"sigma": 0, "price": price, "holders": ["a"], "visits": [[1], [0]]},
            {"sigma": 1, "price": "1/3"},
            {"sigma": -1, "price": "1"},
            {"sigma": -2, "price": "2", "holders": ["b"]},
        ],
    }


def _entry(d, sigma):
    return next(p for p in problem_to_dict(d)["passes"] if p["sigma"] == sigma)


def test_shipped_example1(ex1):
    d = parse_problem(EX1_PATH)
    assert d == ex1 and d.m == 3 and d.consortia == ((1, 2), (3,)) and revenue(d) == 25


def test_decimal_price():
    assert problem_from_dict(small()).price(0) == F(5, 2)


def test_float_price_refused():
    with pytest.raises(ProblemFileError):
        parse_fraction(2.5)
    with pytest.raises(ProblemFileError, match="passes/0/price"):
        problem_from_dict(small(2.5))


def test_duplicate_holder():
    data = small()
    data["passes"][3]["holders"] = ["a"]
    with pytest.raises(InvalidProblemError, match="holder sets must be disjoint"):
        problem_from_dict(data)


def test_json_error_names_line():
    with pytest.raises(ProblemFileError, match="line 3"):
        parse_problem('{"museums": 1,\n "consortia": [[1]]\n "passes": []}')


def test_missing_field_named():
    data = small()
    del data["passes"][1]["price"]
    with pytest.raises(ProblemFileError, match="passes/1"):
        problem_from_dict(data)


def test_visits_required_with_holders():
    data = small()
    del data["passes"][0]["visits"]
    with pytest.raises(ProblemFileError, match="visits"):
        problem_from_dict(data)


def test_singleton_individual_pass_derived():
    data = {"museums": 1, "consortia": [[1]], "passes": [{"sigma": 0, "price": 2}, {"sigma": 1, "price": "3"}]}
    d = problem_from_dict(data)
    assert d.price(-1) == 3 and d.holders(-1) == ()


def test_singleton_sales_normalized_on_request():
    data = {"museums": 1, "consortia": [[1]],
            "passes": [{"sigma": 0, "price": 2}, {"sigma": 1, "price": 3},
                       {"sigma": -1, "price": 3, "holders": ["x"]}]}
    with pytest.raises(InvalidProblemError, match="singleton holder convention"):
        problem_from_dict(data)
    assert problem_from_dict(data, normalize=True).holders(1) == ("x",)


def test_round_trip(ex1):
    text = serialize_problem(ex1)
    assert parse_problem(text) == ex1
    assert serialize_problem(parse_problem(text)) == text


def test_third_is_a_fraction():
    d = problem_from_dict(small())
    assert _entry(d, 1)["price"] == "1/3"
    assert b'"1/3"' in serialize_problem(d)


def test_omitted_passes_restored_empty():
    d = problem_from_dict(small())
    entry = _entry(d, 1)
    assert entry["holders"] == [] and entry["visits"] == [[], []]


def test_canonical_keys_sorted(ex1):
    text = serialize_problem(ex1).decode()
    assert json.dumps(json.loads(text), sort_keys=True, indent=1) + "\n" == text


@given(st.fractions(min_value=0, max_value=1000).filter(lambda x: x > 0))
def test_fraction_format_round_trip(x):
    assert parse_fraction(format_fraction(x)) == x


def test_fraction_format_examples():
    assert format_fraction(F(5, 2)) == "2.5"
    assert format_fraction(F(1, 3)) == "1/3"
    assert format_fraction(F(7)) == "7"
    assert format_fraction(F(1, 40)) == "0.025"
