"""Instance-level axiom checks, randomized audits and independence witnesses.

A check evaluates one axiom for one rule on one concrete instance (plus the
transformation the axiom talks about) and returns a :class:`CheckResult`.
Failures carry a witness record holding everything needed to replay them.
"""
from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from .io import format_ratio, problem_from_dict, problem_to_dict
from .problem import (
    GENERAL,
    ConsumptionMatrix,
    Problem,
    classify_subdomain,
    dummy_set,
    require_valid,
    single_row,
)
from .randgen import GenConfig, derive_seed, generate, random_rational_partition, stream
from .rules import RuleId, allocate
from .transforms import (
    ConsortiumSplitSpec,
    MuseumSplitSpec,
    TransformError,
    concat,
    drop_museum_visits,
    reduce_problem,
    restrict,
    split_consortium,
    split_holders,
    split_museum,
)


class AxiomId(str, enum.Enum):
    COMPOSITION = "composition"
    SYM_WITHIN = "sym_within"
    SYM_BETWEEN = "sym_between"
    DUMMY = "dummy"
    SPLIT_MUSEUMS = "split_museums"
    SPLIT_CONSORTIA = "split_consortia"
    CONSORTIA_CONSISTENCY = "consortia_consistency"

    @classmethod
    def parse(cls, tag) -> "AxiomId":
        if isinstance(tag, cls):
            return tag
        key = str(tag).strip().lower().replace("-", "_")
        for a in cls:
            if key in (a.value, a.name.lower()):
                return a
        raise ValueError(f"unknown axiom {tag!r}; expected one of {[a.value for a in cls]}")


A = AxiomId
THEOREM_RULE = {2: RuleId.EE, 3: RuleId.PP, 4: RuleId.PE, 5: RuleId.EP}
CHARACTERIZING = {
    RuleId.EE: (A.COMPOSITION, A.SYM_WITHIN, A.SYM_BETWEEN, A.DUMMY),
    RuleId.PP: (A.COMPOSITION, A.DUMMY, A.SPLIT_MUSEUMS, A.SPLIT_CONSORTIA, A.CONSORTIA_CONSISTENCY),
    RuleId.PE: (A.COMPOSITION, A.DUMMY, A.SYM_WITHIN, A.SPLIT_CONSORTIA, A.CONSORTIA_CONSISTENCY),
    RuleId.EP: (A.COMPOSITION, A.DUMMY, A.SYM_BETWEEN, A.SPLIT_MUSEUMS),
}
# (rule, the one axiom of the theorem it is claimed to violate)
INDEPENDENCE = {
    2: ((RuleId.R1, A.COMPOSITION), (RuleId.EP, A.SYM_WITHIN), (RuleId.PE, A.SYM_BETWEEN), (RuleId.R2, A.DUMMY)),
    3: ((RuleId.R3, A.COMPOSITION), (RuleId.EP, A.SPLIT_CONSORTIA), (RuleId.PE, A.SPLIT_MUSEUMS),
        (RuleId.R4, A.DUMMY), (RuleId.R5, A.CONSORTIA_CONSISTENCY)),
    4: ((RuleId.R6, A.COMPOSITION), (RuleId.EE, A.SPLIT_CONSORTIA), (RuleId.PP, A.SYM_WITHIN),
        (RuleId.R7, A.DUMMY), (RuleId.R8, A.CONSORTIA_CONSISTENCY)),
    5: ((RuleId.R9, A.COMPOSITION), (RuleId.EE, A.SPLIT_MUSEUMS), (RuleId.PP, A.SYM_BETWEEN),
        (RuleId.R10, A.DUMMY)),
}

PASSED, FAILED, NOT_APPLICABLE = "passed", "failed", "not_applicable"


def axioms_for(rule) -> tuple:
    """Axioms of the rule's characterization, or all seven for remark rules."""
    rule = RuleId.parse(rule)
    return CHARACTERIZING.get(rule, tuple(AxiomId))


@dataclass(frozen=True)
class CheckResult:
    axiom: AxiomId
    rule: RuleId
    status: str
    witness: Optional[dict] = None
    vacuous: bool = False
    reason: str = ""

    def __post_init__(self):
        if self.status == FAILED and self.witness is None:
            raise ValueError("a failed check needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASSED

    @property
    def failed(self) -> bool:
        return self.status == FAILED

    @property
    def applicable(self) -> bool:
        return self.status != NOT_APPLICABLE


def _ok(axiom, rule, *, vacuous=False, reason=""):
    return CheckResult(axiom, rule, PASSED, vacuous=vacuous, reason=reason)


def _na(axiom, rule, reason):
    return CheckResult(axiom, rule, NOT_APPLICABLE, reason=reason)


def _fail(axiom, rule, problems: Dict[str, Problem], params: dict, lhs, rhs):
    witness = {
        "axiom": axiom.value,
        "rule": rule.value,
        "params": params,
        "lhs": _ratios(lhs),
        "rhs": _ratios(rhs),
    }
    witness.update({k: problem_to_dict(p) for k, p in problems.items()})
    return CheckResult(axiom, rule, FAILED, witness=witness)


def _ratios(x):
    if isinstance(x, (list, tuple)):
        return [format_ratio(v) for v in x]
    return format_ratio(x)


# ---------------------------------------------------------------------------
# single-instance checkers


def check_composition(rule, d1: Problem, d2: Problem) -> CheckResult:
    rule = RuleId.parse(rule)
    pooled = allocate(rule, concat(d1, d2))
    parts = allocate(rule, d1) + allocate(rule, d2)
    if pooled == parts:
        return _ok(A.COMPOSITION, rule, vacuous=not d2.all_holders() or not d1.all_holders())
    return _fail(A.COMPOSITION, rule, {"problem": d1, "problem2": d2}, {}, list(pooled), list(parts))


def symmetric_museums(d: Problem, i: int, j: int) -> Optional[str]:
    """``None`` when museums i and j meet the symmetry-within conditions, else the reason."""
    if d.consortium_of(i) != d.consortium_of(j):
        return "museums in different consortia"
    idx = d.index
    for sigma, label in ((GENERAL, "general"), (d.consortium_of(i), "consortium")):
        for a in d.holders(sigma):
            if (i in idx.visits[a]) != (j in idx.visits[a]):
                return f"{label}-pass holder {a!r} visits only one of them"
    if d.price(-i) * len(d.holders(-i)) != d.price(-j) * len(d.holders(-j)):
        return "individual revenues differ"
    return None


def check_symmetry_within(rule, d: Problem, i: int, j: int) -> CheckResult:
    rule = RuleId.parse(rule)
    require_valid(d)
    if i == j:
        return _ok(A.SYM_WITHIN, rule, vacuous=True)
    why = symmetric_museums(d, i, j)
    if why:
        return _na(A.SYM_WITHIN, rule, why)
    alloc = allocate(rule, d)
    if alloc[i] == alloc[j]:
        return _ok(A.SYM_WITHIN, rule)
    return _fail(A.SYM_WITHIN, rule, {"problem": d}, {"i": i, "j": j}, alloc[i], alloc[j])


def symmetric_consortia(d: Problem, r: int, t: int, condition: str = "per_holder") -> Optional[str]:
    """``None`` when consortia r and t meet the symmetry-between conditions.

    ``condition="per_holder"`` asks every general-pass holder to visit both
    consortia or neither.  ``condition="aggregate"`` only asks that both or
    neither receive some general-pass visit.
    """
    idx = d.index
    if condition == "per_holder":
        for a in d.holders(GENERAL):
            ks = idx.general_consortia[a]
            if (r in ks) != (t in ks):
                return f"general-pass holder {a!r} visits only one of them"
    elif condition == "aggregate":
        touched = [any(d.consumption[GENERAL].row_sum(i) for i in d.block(k)) for k in (r, t)]
        if touched[0] != touched[1]:
            return "only one consortium has general-pass visits"
    else:
        raise ValueError(f"unknown condition {condition!r}")
    if d.price(r) * len(d.holders(r)) != d.price(t) * len(d.holders(t)):
        return "consortium-pass revenues differ"
    ind = [sum((d.price(-i) * len(d.holders(-i)) for i in d.block(k)), Fraction(0)) for k in (r, t)]
    if ind[0] != ind[1]:
        return "individual revenues differ"
    return None


def check_symmetry_between(rule, d: Problem, r: int, t: int, condition: str = "per_holder") -> CheckResult:
    rule = RuleId.parse(rule)
    require_valid(d)
    if r == t:
        return _ok(A.SYM_BETWEEN, rule, vacuous=True)
    why = symmetric_consortia(d, r, t, condition)
    if why:
        return _na(A.SYM_BETWEEN, rule, why)
    alloc = allocate(rule, d)
    lhs, rhs = alloc.aggregate(d.block(r)), alloc.aggregate(d.block(t))
    if lhs == rhs:
        return _ok(A.SYM_BETWEEN, rule)
    return _fail(A.SYM_BETWEEN, rule, {"problem": d}, {"r": r, "t": t, "condition": condition}, lhs, rhs)


def check_dummy(rule, d: Problem) -> CheckResult:
    rule = RuleId.parse(rule)
    dummies = sorted(dummy_set(d))
    if not dummies:
        return _ok(A.DUMMY, rule, vacuous=True)
    alloc = allocate(rule, d)
    paid = [i for i in dummies if alloc[i] != 0]
    if not paid:
        return _ok(A.DUMMY, rule)
    return _fail(A.DUMMY, rule, {"problem": d}, {"dummies": dummies},
                 [alloc[i] for i in paid], [0] * len(paid))


def check_splitting_museums(rule, d: Problem, spec: MuseumSplitSpec) -> CheckResult:
    rule = RuleId.parse(rule)
    split = split_museum(d, spec)
    before, after = allocate(rule, d), allocate(rule, split.problem)
    others = [j for j in d.museums if j != spec.target]
    lhs, rhs = [before[j] for j in others], [after[j] for j in others]
    if lhs == rhs:
        return _ok(A.SPLIT_MUSEUMS, rule)
    params = {"target": spec.target, "piece_prices": [format_ratio(p) for p in spec.piece_prices]}
    return _fail(A.SPLIT_MUSEUMS, rule, {"problem": d}, params, lhs, rhs)


def check_splitting_consortia(rule, d: Problem, spec: ConsortiumSplitSpec) -> CheckResult:
    rule = RuleId.parse(rule)
    split = split_consortium(d, spec)
    before, after = allocate(rule, d), allocate(rule, split.problem)
    others = [r for r in range(1, d.s + 1) if r != spec.target]
    lhs = [before.aggregate(d.block(r)) for r in others]
    rhs = [after.aggregate(split.problem.block(r)) for r in others]
    if lhs == rhs:
        return _ok(A.SPLIT_CONSORTIA, rule, vacuous=not others)
    params = {
        "target": spec.target,
        "copy_pass_prices": [format_ratio(p) for p in spec.copy_pass_prices],
        "copy_museum_prices": [[format_ratio(p) for p in row] for row in spec.copy_museum_prices],
    }
    return _fail(A.SPLIT_CONSORTIA, rule, {"problem": d}, params, lhs, rhs)


def check_consortia_consistency(rule, d: Problem) -> CheckResult:
    rule = RuleId.parse(rule)
    if classify_subdomain(d) != GENERAL:
        raise TransformError("consortia consistency is only defined when only general passes sold")
    alloc = allocate(rule, d)
    reduced = allocate(rule, reduce_problem(d))
    lhs = [alloc.aggregate(d.block(k)) for k in range(1, d.s + 1)]
    rhs = list(reduced)
    if lhs == rhs:
        return _ok(A.CONSORTIA_CONSISTENCY, rule, vacuous=not d.holders(GENERAL))
    return _fail(A.CONSORTIA_CONSISTENCY, rule, {"problem": d}, {}, lhs, rhs)


def replay(witness: dict) -> CheckResult:
    """Re-run the check recorded in a witness."""
    rule = RuleId.parse(witness["rule"])
    axiom = AxiomId.parse(witness["axiom"])
    d = problem_from_dict(witness["problem"])
    p = witness.get("params", {})
    if axiom is A.COMPOSITION:
        return check_composition(rule, d, problem_from_dict(witness["problem2"]))
    if axiom is A.SYM_WITHIN:
        return check_symmetry_within(rule, d, p["i"], p["j"])
    if axiom is A.SYM_BETWEEN:
        return check_symmetry_between(rule, d, p["r"], p["t"], p.get("condition", "per_holder"))
    if axiom is A.DUMMY:
        return check_dummy(rule, d)
    if axiom is A.SPLIT_MUSEUMS:
        return check_splitting_museums(rule, d, MuseumSplitSpec(p["target"], [Fraction(x) for x in p["piece_prices"]]))
    if axiom is A.SPLIT_CONSORTIA:
        spec = ConsortiumSplitSpec(
            p["target"],
            [Fraction(x) for x in p["copy_pass_prices"]],
            [[Fraction(x) for x in row] for row in p["copy_museum_prices"]],
        )
        return check_splitting_consortia(rule, d, spec)
    return check_consortia_consistency(rule, d)


# ---------------------------------------------------------------------------
# instance builders used by the audit driver


def symmetrize_museums(d: Problem, i: int, j: int, rng: random.Random) -> Problem:
    """Make museums i and j (same consortium) satisfy the symmetry-within conditions.

    Visits to either become visits to both.  Individual sales of both are
    dropped, or (half the time) j copies i's price and sales.
    """
    k = d.consortium_of(i)
    mats = {}
    for sigma in (GENERAL, k):
        mat = d.consumption[sigma]
        visits = {a: set(v) | {i, j} if v & {i, j} else v for a, v in mat.columns().items()}
        mats[sigma] = ConsumptionMatrix.from_visits(mat.rows, visits)
    prices = dict(d.prices)
    if rng.random() < 0.5:
        mats[-i] = single_row(i, ())
        mats[-j] = single_row(j, ())
    else:
        prices[-j] = prices[-i]
        mats[-j] = single_row(j, [f"{a}#sym" for a in d.holders(-i)])
    return require_valid(d.replace(prices=prices, consumption=mats))


def symmetrize_consortia(d: Problem, r: int, t: int, rng: random.Random) -> Problem:
    """Make consortia r and t satisfy the (per-holder) symmetry-between conditions.

    A general-pass holder visiting only one of them also visits a random
    museum of the other; consortium-pass and individual sales of both are
    dropped.
    """
    idx = d.index
    visits = {}
    for a, v in d.consumption[GENERAL].columns().items():
        ks = idx.general_consortia[a]
        v = set(v)
        if (r in ks) != (t in ks):
            other = t if r in ks else r
            v.add(rng.choice(d.block(other)))
        visits[a] = v
    mats = {GENERAL: ConsumptionMatrix.from_visits(d.consumption[GENERAL].rows, visits)}
    for k in (r, t):
        mats[k] = ConsumptionMatrix.empty(d.consumption[k].rows)
        for i in d.block(k):
            mats[-i] = single_row(i, ())
    return require_valid(d.replace(consumption=mats))


def random_museum_split(d: Problem, rng: random.Random) -> MuseumSplitSpec:
    i = rng.choice(list(d.museums))
    return MuseumSplitSpec(i, random_rational_partition(rng, d.price(-i), rng.choice((2, 3))))


def random_consortium_split(d: Problem, rng: random.Random) -> ConsortiumSplitSpec:
    k = rng.randint(1, d.s)
    t = rng.choice((2, 3))
    block = d.block(k)
    pass_prices = random_rational_partition(rng, d.price(k), t)
    if len(block) == 1:
        return ConsortiumSplitSpec(k, pass_prices, tuple((p,) for p in pass_prices))
    columns = [random_rational_partition(rng, d.price(-i), t) for i in block]
    return ConsortiumSplitSpec(k, pass_prices, tuple(zip(*columns)))


def instance_checks(rule, d: Problem, axiom, rng: random.Random, condition: str = "per_holder") -> List[CheckResult]:
    """Every check of ``axiom`` the audit runs on one random instance."""
    rule, axiom = RuleId.parse(rule), AxiomId.parse(axiom)
    if axiom is A.COMPOSITION:
        first = {a for a in d.all_holders() if rng.random() < 0.5}
        return [check_composition(rule, *split_holders(d, first))]
    if axiom is A.SYM_WITHIN:
        pairs = [(i, j) for b in d.consortia for i, j in itertools.combinations(sorted(b), 2)]
        out = [check_symmetry_within(rule, d, i, j) for i, j in pairs]
        if pairs:
            i, j = rng.choice(pairs)
            out.append(check_symmetry_within(rule, symmetrize_museums(d, i, j, rng), i, j))
        return out
    if axiom is A.SYM_BETWEEN:
        pairs = list(itertools.combinations(range(1, d.s + 1), 2))
        out = [check_symmetry_between(rule, d, r, t, condition) for r, t in pairs]
        if pairs:
            r, t = rng.choice(pairs)
            out.append(check_symmetry_between(rule, symmetrize_consortia(d, r, t, rng), r, t, condition))
        return out
    if axiom is A.DUMMY:
        i = rng.choice(list(d.museums))
        return [check_dummy(rule, d), check_dummy(rule, drop_museum_visits(d, i))]
    if axiom is A.SPLIT_MUSEUMS:
        return [check_splitting_museums(rule, d, random_museum_split(d, rng))]
    if axiom is A.SPLIT_CONSORTIA:
        return [check_splitting_consortia(rule, d, random_consortium_split(d, rng))]
    return [check_consortia_consistency(rule, restrict(d, GENERAL))]


# ---------------------------------------------------------------------------
# audits


@dataclass
class AxiomTally:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    not_applicable: int = 0
    vacuous: int = 0
    failures: list = field(default_factory=list)

    def add(self, result: CheckResult, keep: int):
        self.checked += 1
        if result.status == PASSED:
            self.passed += 1
            self.vacuous += result.vacuous
        elif result.status == FAILED:
            self.failed += 1
            if len(self.failures) < keep:
                self.failures.append(result.witness)
        else:
            self.not_applicable += 1

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "passed": self.passed,
            "failed": self.failed,
            "not_applicable": self.not_applicable,
            "vacuous": self.vacuous,
            "failures": self.failures,
        }


@dataclass
class AuditReport:
    rule: RuleId
    instances: int
    config: GenConfig
    condition: str
    tallies: Dict[AxiomId, AxiomTally]

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "instances": self.instances,
            "config": self.config.to_dict(),
            "sym_between_condition": self.condition,
            "axioms": {a.value: t.to_dict() for a, t in self.tallies.items()},
            "ok": self.ok,
        }


DEFAULT_AUDIT_CONFIG = GenConfig(museums=(1, 6), consortia=(1, 3), max_holders=10)


def audit(rule, config: GenConfig = DEFAULT_AUDIT_CONFIG, axioms: Iterable = None, instances: int = 200,
          condition: str = "per_holder", keep_witnesses: int = 3) -> AuditReport:
    """Run the selected axiom checks over ``instances`` seeded random problems.

    Instance ``n`` and its transformation parameters are drawn from streams
    derived from ``(config.seed, n)``, so the report only depends on the
    arguments.
    """
    rule = RuleId.parse(rule)
    axioms = axioms_for(rule) if axioms is None else tuple(AxiomId.parse(a) for a in axioms)
    tallies = {a: AxiomTally() for a in axioms}
    for n in range(instances):
        d = generate(config.with_seed(derive_seed(config.seed, "audit", n)))
        for a in axioms:
            rng = stream(config.seed, "audit-params", n, a.value)
            for result in instance_checks(rule, d, a, rng, condition):
                tallies[a].add(result, keep_witnesses)
    return AuditReport(rule, instances, config, condition, tallies)


@dataclass
class IndependenceEntry:
    theorem: int
    rule: RuleId
    axiom: AxiomId
    searched: int
    witness: Optional[dict]
    others: Dict[AxiomId, AxiomTally]

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def discrepancies(self) -> List[AxiomId]:
        """Other axioms of the theorem the rule was claimed to satisfy but failed."""
        return [a for a, t in self.others.items() if t.failed]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "rule": self.rule.value,
            "axiom": self.axiom.value,
            "found": self.found,
            "instances_searched": self.searched,
            "witness": self.witness,
            "other_axioms": {a.value: {k: v for k, v in t.to_dict().items() if k != "failures"}
                             for a, t in self.others.items()},
            "discrepancies": [a.value for a in self.discrepancies],
        }


def find_witness(rule, axiom, config: GenConfig = DEFAULT_AUDIT_CONFIG, budget: int = 500,
                 condition: str = "per_holder"):
    """First failing check of ``axiom`` for ``rule`` over at most ``budget`` instances.

    Returns ``(witness or None, instances searched)``.
    """
    rule, axiom = RuleId.parse(rule), AxiomId.parse(axiom)
    for n in range(budget):
        d = generate(config.with_seed(derive_seed(config.seed, "witness", rule.value, axiom.value, n)))
        rng = stream(config.seed, "witness-params", rule.value, axiom.value, n)
        for result in instance_checks(rule, d, axiom, rng, condition):
            if result.failed:
                return result.witness, n + 1
    return None, budget


def independence_witnesses(theorem: int, config: GenConfig = DEFAULT_AUDIT_CONFIG, budget: int = 500,
                           sample: int = 50, condition: str = "per_holder") -> List[IndependenceEntry]:
    """Counterexamples showing each axiom of a characterization is needed.

    For each designated remark rule the search looks for a violation of its
    designated axiom, then samples the theorem's other axioms for that rule
    and reports any that fail too.
    """
    if theorem not in INDEPENDENCE:
        raise ValueError(f"theorem must be one of {sorted(INDEPENDENCE)}")
    axioms = CHARACTERIZING[THEOREM_RULE[theorem]]
    out = []
    for rule, axiom in INDEPENDENCE[theorem]:
        witness, searched = find_witness(rule, axiom, config, budget, condition)
        others = [a for a in axioms if a is not axiom]
        report = audit(rule, config, others, sample, condition, keep_witnesses=1)
        out.append(IndependenceEntry(theorem, rule, axiom, searched, witness, report.tallies))
    return out
