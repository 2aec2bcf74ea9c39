import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

import passalloc
from passalloc.problem import GENERAL, ConsumptionMatrix, Problem, single_row
from passalloc.randgen import GenConfig, generate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL = GenConfig(museums=(1, 6), consortia=(1, 3), max_holders=10)

seeds = st.integers(min_value=0, max_value=2**63 - 1)
problems = seeds.map(lambda s: generate(SMALL.with_seed(s)))


@pytest.fixture
def ex1():
    return passalloc.example1()


def single_holder(d: Problem, sigma: int, rng: random.Random) -> Problem:
    """Prices and partition of ``d`` with one holder of pass ``sigma``."""
    mats = {s: ConsumptionMatrix.empty(m.rows) for s, m in d.consumption.items()}
    rows = d.consumption[sigma].rows
    if sigma < 0:
        mats[sigma] = single_row(-sigma, ["a"])
    else:
        picked = {i for i in rows if rng.random() < 0.6} or {rng.choice(rows)}
        mats[sigma] = ConsumptionMatrix.from_visits(rows, {"a": picked})
    return d.replace(consumption=mats)


def museum_problem(m, consortia, prices, passes):
    """Small hand-built problem; ``passes`` maps sigma -> {holder: visited museums}."""
    prices = {k: Fraction(v) for k, v in prices.items()}
    for t, b in enumerate(consortia, 1):
        if len(b) == 1:
            prices.setdefault(-b[0], prices[t])
    d = Problem(m=m, consortia=consortia, prices=prices, consumption={})
    mats = {}
    for sigma, visits in passes.items():
        mats[sigma] = ConsumptionMatrix.from_visits(d.expected_rows(sigma), visits)
    return d.replace(consumption=mats)


def singletons(d):
    """Same museums and general-pass holders, one consortium per museum."""
    prices = {GENERAL: d.price(GENERAL)}
    mats = {GENERAL: d.consumption[GENERAL]}
    for i in d.museums:
        prices[i] = prices[-i] = d.price(-i)
        mats[i] = ConsumptionMatrix.empty((i,))
        mats[-i] = single_row(i, [])
    return Problem(m=d.m, consortia=[(i,) for i in d.museums], prices=prices, consumption=mats)
