"""Revenue allocation rules.

The four two-stage rules split each general-pass fee first among the
consortia a holder visited and then among the visited museums inside each
consortium; consortium-pass fees are split among the visited museums and
individual tickets go to their museum.  Stages use either equal shares or
shares proportional to a price.

The ten remark rules ``r1``..``r10`` are the counterexamples used to show
that the axioms behind each characterization are independent.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping

from .problem import GENERAL, Problem, require_valid, revenue

ZERO = Fraction(0)


class RuleId(str, enum.Enum):
    EE = "ee"
    PP = "pp"
    PE = "pe"
    EP = "ep"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    R4 = "r4"
    R5 = "r5"
    R6 = "r6"
    R7 = "r7"
    R8 = "r8"
    R9 = "r9"
    R10 = "r10"

    @classmethod
    def parse(cls, tag) -> "RuleId":
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            raise ValueError(f"unknown rule {tag!r}; expected one of {[r.value for r in cls]}") from None

    @property
    def canonical(self) -> bool:
        return self in CANONICAL


CANONICAL = (RuleId.EE, RuleId.PP, RuleId.PE, RuleId.EP)
REMARK = tuple(r for r in RuleId if r not in CANONICAL)


class Allocation(tuple):
    """Per-museum payouts; ``alloc[i]`` is museum ``i`` (1-based)."""

    def __new__(cls, payouts: Iterable):
        return super().__new__(cls, (Fraction(x) for x in payouts))

    def __getitem__(self, i):
        if isinstance(i, slice):
            return tuple.__getitem__(self, i)
        if i < 1:
            raise IndexError(f"museum ids start at 1, got {i}")
        return tuple.__getitem__(self, i - 1)

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError("allocations over different museum sets")
        return Allocation(a + b for a, b in zip(self.payouts, other.payouts))

    @property
    def payouts(self) -> tuple:
        return tuple(self)

    @property
    def total(self) -> Fraction:
        return sum(self.payouts, ZERO)

    def as_dict(self) -> Dict[int, Fraction]:
        return {i: x for i, x in enumerate(self.payouts, 1)}

    def aggregate(self, museums: Iterable[int]) -> Fraction:
        return sum((self[i] for i in museums), ZERO)

    def __repr__(self):
        return f"Allocation({', '.join(str(x) for x in self.payouts)})"


# ---------------------------------------------------------------------------
# weight functions: each returns {key: share} with shares summing to one


def _equal(keys) -> Dict:
    keys = tuple(keys)
    w = Fraction(1, len(keys))
    return {k: w for k in keys}


def _proportional(keys, weight: Callable) -> Dict:
    keys = tuple(keys)
    total = sum((weight(k) for k in keys), ZERO)
    return {k: weight(k) / total for k in keys}


def _equal_consortia(d: Problem, ks):
    return _equal(ks)


def _price_consortia(d: Problem, ks):
    return _proportional(ks, d.price)


def _summed_price_consortia(d: Problem, ks):
    return _proportional(ks, lambda t: sum((d.price(-j) for j in d.block(t)), ZERO))


def _equal_museums(d: Problem, museums):
    return _equal(museums)


def _price_museums(d: Problem, museums):
    return _proportional(museums, lambda i: d.price(-i))


# ---------------------------------------------------------------------------
# the three revenue layers


def _two_stage_general(stage1, stage2):
    """General-pass layer: consortia first, then museums inside each."""

    def part(d: Problem, out):
        fee = d.price(GENERAL) if d.holders(GENERAL) else ZERO
        idx = d.index
        for a in d.holders(GENERAL):
            visited = idx.visits[a]
            for k, w1 in stage1(d, sorted(idx.general_consortia[a])).items():
                inside = sorted(i for i in visited if idx.consortium_of[i] == k)
                for i, w2 in stage2(d, inside).items():
                    out[i] += w1 * w2 * fee

    return part


def _flat_general(d: Problem, out):
    # no consortium stage: shares over all visited museums by individual price
    idx = d.index
    for a in d.holders(GENERAL):
        for i, w in _price_museums(d, sorted(idx.visits[a])).items():
            out[i] += w * d.price(GENERAL)


def _consortium_blanket_general(d: Problem, out):
    # equal over visited consortia, then over the whole consortium by price
    idx = d.index
    for a in d.holders(GENERAL):
        ks = idx.general_consortia[a]
        for k in ks:
            for i, w in _price_museums(d, d.block(k)).items():
                out[i] += w * Fraction(1, len(ks)) * d.price(GENERAL)


def _per_holder_pass(weights):
    """Consortium-pass layer splitting each holder's fee over the museums they visited."""

    def part(d: Problem, out):
        idx = d.index
        for t in range(1, d.s + 1):
            for a in d.holders(t):
                for i, w in weights(d, sorted(idx.visits[a])).items():
                    out[i] += w * d.price(t)

    return part


def _pooled_pass(weight: Callable):
    """Consortium-pass layer splitting the consortium's whole pass revenue at once.

    ``weight(d, t, i)`` scores museum ``i`` of consortium ``t``; museums are
    paid in proportion to their score.
    """

    def part(d: Problem, out):
        for t in range(1, d.s + 1):
            n = len(d.holders(t))
            if not n:
                continue
            scores = {i: weight(d, t, i) for i in d.block(t)}
            total = sum(scores.values(), ZERO)
            for i, x in scores.items():
                out[i] += x / total * n * d.price(t)

    return part


def _visit_count(d: Problem, t, i):
    return Fraction(d.consumption[t].row_sum(i))


def _priced_indicator(d: Problem, t, i):
    return d.price(-i) if d.consumption[t].row_sum(i) else ZERO


def _individual_price(d: Problem, t, i):
    return d.price(-i)


def _one(d: Problem, t, i):
    return Fraction(1)


def _individual(d: Problem, out):
    for i in d.museums:
        out[i] += len(d.holders(-i)) * d.price(-i)


_EE_GENERAL = _two_stage_general(_equal_consortia, _equal_museums)
_PP_GENERAL = _two_stage_general(_price_consortia, _price_museums)
_PE_GENERAL = _two_stage_general(_price_consortia, _equal_museums)
_EP_GENERAL = _two_stage_general(_equal_consortia, _price_museums)
_EQUAL_PASS = _per_holder_pass(_equal_museums)
_PRICE_PASS = _per_holder_pass(_price_museums)

_LAYERS = {
    RuleId.EE: (_EE_GENERAL, _EQUAL_PASS),
    RuleId.PP: (_PP_GENERAL, _PRICE_PASS),
    RuleId.PE: (_PE_GENERAL, _EQUAL_PASS),
    RuleId.EP: (_EP_GENERAL, _PRICE_PASS),
    RuleId.R1: (_EE_GENERAL, _pooled_pass(_visit_count)),
    RuleId.R3: (_PP_GENERAL, _pooled_pass(_priced_indicator)),
    RuleId.R4: (_PP_GENERAL, _pooled_pass(_individual_price)),
    RuleId.R5: (_flat_general, _PRICE_PASS),
    RuleId.R6: (_PE_GENERAL, _pooled_pass(_visit_count)),
    RuleId.R7: (_PE_GENERAL, _pooled_pass(_one)),
    RuleId.R8: (_two_stage_general(_summed_price_consortia, _equal_museums), _PRICE_PASS),
    RuleId.R9: (_EP_GENERAL, _pooled_pass(_priced_indicator)),
    RuleId.R10: (_consortium_blanket_general, _PRICE_PASS),
}


def _layered(rule: RuleId, d: Problem) -> Allocation:
    general, consortium = _LAYERS[rule]
    out = {i: ZERO for i in d.museums}
    general(d, out)
    consortium(d, out)
    _individual(d, out)
    return Allocation(out[i] for i in d.museums)


def _uniform_over_structure(d: Problem) -> Allocation:
    # r2 ignores consumption entirely
    e = revenue(d)
    return Allocation(e / (d.s * len(d.block(d.consortium_of(i)))) for i in d.museums)


def allocate(rule, problem: Problem) -> Allocation:
    """Allocate the total revenue of ``problem`` with ``rule``."""
    rule = RuleId.parse(rule)
    require_valid(problem)
    if rule is RuleId.R2:
        return _uniform_over_structure(problem)
    return _layered(rule, problem)


def allocate_ee(problem: Problem) -> Allocation:
    return allocate(RuleId.EE, problem)


def allocate_pp(problem: Problem) -> Allocation:
    return allocate(RuleId.PP, problem)


def allocate_pe(problem: Problem) -> Allocation:
    return allocate(RuleId.PE, problem)


def allocate_ep(problem: Problem) -> Allocation:
    return allocate(RuleId.EP, problem)


def allocate_remark(rule, problem: Problem) -> Allocation:
    rule = RuleId.parse(rule)
    if rule.canonical:
        raise ValueError(f"{rule.value} is not a remark rule")
    return allocate(rule, problem)


def shapley_rule(problem: Problem) -> Allocation:
    """Each general-pass fee split equally over the museums its holder visited.

    Only meaningful on problems where nothing but general passes sold.
    """
    require_valid(problem)
    out = {i: ZERO for i in problem.museums}
    for a in problem.holders(GENERAL):
        visited = problem.index.visits[a]
        for i in visited:
            out[i] += problem.price(GENERAL) / len(visited)
    return Allocation(out[i] for i in problem.museums)


def allocate_all(problem: Problem, rules: Iterable = tuple(RuleId)) -> Mapping[RuleId, Allocation]:
    return {RuleId.parse(r): allocate(r, problem) for r in rules}
