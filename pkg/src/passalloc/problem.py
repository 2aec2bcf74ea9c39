"""Museum pass problems with a priori consortia.

A problem bundles the museums ``1..m``, a partition of them into consortia,
the pass prices and one consumption matrix per pass.  Passes are indexed by
an integer ``sigma``:

* ``-i`` for the individual ticket of museum ``i``,
* ``0`` for the general pass covering every museum,
* ``t`` for the pass of consortium ``t`` (1-based position in the partition).

The holders of a pass are the columns of its consumption matrix, so the two
can never disagree.  All values are exact :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Union

Holder = Union[int, str]

GENERAL = 0


class InvalidProblemError(ValueError):
    """Raised when an operation needs a valid problem and gets an invalid one."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid problem: {lines}")


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ConsumptionMatrix:
    """Binary museum x holder matrix.

    ``cells[r][c]`` is 1 when museum ``rows[r]`` was visited by holder
    ``cols[c]``.  A pass nobody bought has zero columns.
    """

    rows: tuple
    cols: tuple = ()
    cells: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        cells = self.cells
        if not cells:
            cells = tuple(() for _ in self.rows)
        object.__setattr__(self, "cells", tuple(tuple(r) for r in cells))

    @classmethod
    def from_visits(cls, rows: Iterable[int], visits: Mapping[Holder, Iterable[int]]):
        """Build a matrix from ``holder -> visited museums`` (insertion order kept)."""
        rows = tuple(rows)
        cols = tuple(visits)
        seen = {a: frozenset(v) for a, v in visits.items()}
        cells = tuple(tuple(int(i in seen[a]) for a in cols) for i in rows)
        return cls(rows, cols, cells)

    @classmethod
    def empty(cls, rows: Iterable[int]):
        return cls(tuple(rows))

    def __len__(self):
        return len(self.cols)

    def column(self, c: int) -> frozenset:
        return frozenset(i for i, row in zip(self.rows, self.cells) if row[c])

    def columns(self) -> dict:
        """``holder -> frozenset of visited museums``."""
        return {a: self.column(c) for c, a in enumerate(self.cols)}

    def row_sum(self, museum: int) -> int:
        try:
            r = self.rows.index(museum)
        except ValueError:
            return 0
        return sum(self.cells[r])


@dataclass(frozen=True)
class Indices:
    """Derived lookup tables of a valid problem."""

    consortium_of: Mapping[int, int]
    pass_of: Mapping[Holder, int]
    visits: Mapping[Holder, frozenset]
    general_consortia: Mapping[Holder, frozenset]

    def visitors(self, problem: "Problem", museum: int, sigma: int) -> tuple:
        """Holders of pass ``sigma`` who visited ``museum`` (N^sigma_i)."""
        return tuple(a for a in problem.holders(sigma) if museum in self.visits[a])


@dataclass(frozen=True, eq=True)
class Problem:
    """The 5-tuple (M, P, N, pi, C).

    Parameters
    ----------
    m : int
        Number of museums; museums are ``1..m``.
    consortia : sequence of sequences of int
        The partition; consortium ``t`` is ``consortia[t - 1]``.
    prices : mapping sigma -> Fraction
        One price per pass ``-m..s``.
    consumption : mapping sigma -> ConsumptionMatrix
        Missing entries are filled with zero-column matrices.
    """

    m: int
    consortia: tuple
    prices: Mapping[int, Fraction]
    consumption: Mapping[int, ConsumptionMatrix] = field(default_factory=dict)

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.consortia)
        object.__setattr__(self, "consortia", blocks)
        prices = {int(k): Fraction(v) for k, v in self.prices.items()}
        object.__setattr__(self, "prices", MappingProxyType(dict(sorted(prices.items()))))
        mats = dict(self.consumption)
        for sigma in self.sigmas:
            if sigma not in mats:
                mats[sigma] = ConsumptionMatrix.empty(self.expected_rows(sigma))
        object.__setattr__(self, "consumption", MappingProxyType(dict(sorted(mats.items()))))

    def __hash__(self):
        return hash((self.m, self.consortia, tuple(self.prices.items()), tuple(self.consumption.items())))

    # basic shape -----------------------------------------------------------
    @property
    def s(self) -> int:
        return len(self.consortia)

    @property
    def museums(self) -> range:
        return range(1, self.m + 1)

    @property
    def sigmas(self) -> range:
        return range(-self.m, self.s + 1)

    def expected_rows(self, sigma: int) -> tuple:
        if sigma < 0:
            return (-sigma,)
        if sigma == GENERAL:
            return tuple(self.museums)
        if sigma <= self.s:
            return tuple(sorted(self.consortia[sigma - 1]))
        return ()

    def block(self, t: int) -> tuple:
        return self.consortia[t - 1]

    def holders(self, sigma: int) -> tuple:
        mat = self.consumption.get(sigma)
        return mat.cols if mat is not None else ()

    def price(self, sigma: int) -> Fraction:
        return self.prices[sigma]

    def all_holders(self) -> list:
        return [a for sigma in self.sigmas for a in self.holders(sigma)]

    # derived ---------------------------------------------------------------
    @cached_property
    def index(self) -> Indices:
        return derived_indices(self)

    def consortium_of(self, museum: int) -> int:
        return self.index.consortium_of[museum]

    def replace(self, *, prices=None, consumption=None, consortia=None, m=None) -> "Problem":
        """Copy with some fields swapped; ``consumption`` entries are merged."""
        mats = dict(self.consumption)
        if consumption is not None:
            mats.update(consumption)
        return Problem(
            m=self.m if m is None else m,
            consortia=self.consortia if consortia is None else consortia,
            prices=self.prices if prices is None else prices,
            consumption=mats,
        )


def single_row(museum: int, holders: Iterable[Holder]) -> ConsumptionMatrix:
    """All-ones individual-ticket matrix."""
    holders = tuple(holders)
    return ConsumptionMatrix((museum,), holders, ((1,) * len(holders),))


# ---------------------------------------------------------------------------
# validation


def validate(problem: Problem) -> ValidationReport:
    """Check every structural invariant; violations are returned, never raised."""
    out = []

    def bad(code, detail):
        out.append(Violation(code, detail))

    m = problem.m
    if not isinstance(m, int) or m < 1:
        bad("museum count", f"m must be a positive integer, got {m!r}")
        return ValidationReport(tuple(out))

    # partition
    seen = {}
    if not problem.consortia:
        bad("partition", "at least one consortium is required")
    for t, block in enumerate(problem.consortia, 1):
        if not block:
            bad("partition", f"consortium {t} is empty")
        for i in block:
            if not isinstance(i, int) or not 1 <= i <= m:
                bad("unknown museum", f"consortium {t} lists museum {i!r} outside 1..{m}")
            elif i in seen:
                bad("partition", f"museum {i} is in consortia {seen[i]} and {t}")
            else:
                seen[i] = t
    missing = sorted(set(range(1, m + 1)) - set(seen))
    if missing:
        bad("partition", f"museums {missing} belong to no consortium")
    partition_ok = not any(v.code in ("partition", "unknown museum") for v in out)

    # prices
    for sigma in problem.sigmas:
        if sigma not in problem.prices:
            bad("price", f"pass {sigma} has no price")
        elif problem.prices[sigma] <= 0:
            bad("price", f"pass {sigma} has non-positive price {problem.prices[sigma]}")
    for sigma in problem.prices:
        if sigma not in problem.sigmas:
            bad("unknown pass", f"price given for nonexistent pass {sigma}")

    # matrices
    owner = {}
    for sigma, mat in problem.consumption.items():
        if sigma not in problem.sigmas:
            bad("unknown pass", f"consumption matrix for nonexistent pass {sigma}")
            continue
        if partition_ok and tuple(sorted(mat.rows)) != problem.expected_rows(sigma):
            bad("matrix rows", f"pass {sigma} rows {list(mat.rows)} != {list(problem.expected_rows(sigma))}")
        if len(mat.cells) != len(mat.rows):
            bad("matrix shape", f"pass {sigma} has {len(mat.cells)} rows of cells for {len(mat.rows)} labels")
            continue
        for r, row in enumerate(mat.cells):
            if len(row) != len(mat.cols):
                bad("matrix shape", f"pass {sigma} row {mat.rows[r]} has {len(row)} cells for {len(mat.cols)} holders")
            for x in row:
                if x not in (0, 1):
                    bad("binary", f"pass {sigma} row {mat.rows[r]} has non-binary entry {x!r}")
        for c, a in enumerate(mat.cols):
            if a in owner:
                bad("holder sets must be disjoint", f"holder {a!r} holds passes {owner[a]} and {sigma}")
            else:
                owner[a] = sigma
            col = [row[c] for row in mat.cells if c < len(row)]
            if not any(x == 1 for x in col):
                bad("empty visit column", f"holder {a!r} of pass {sigma} visits no museum")
            elif sigma < 0 and not all(x == 1 for x in col):
                bad("individual visits", f"individual-ticket holder {a!r} of pass {sigma} has a 0 entry")

    # singleton-consortium convention
    if partition_ok:
        for t, block in enumerate(problem.consortia, 1):
            if len(block) != 1:
                continue
            (i,) = block
            if problem.holders(-i):
                bad("singleton holder convention",
                    f"museum {i} is consortium {t} on its own, so its individual pass must be unsold")
            if -i in problem.prices and t in problem.prices and problem.prices[-i] != problem.prices[t]:
                bad("singleton price convention",
                    f"price of pass {-i} ({problem.prices[-i]}) must equal consortium {t} price ({problem.prices[t]})")
    return ValidationReport(tuple(out))


def require_valid(problem: Problem) -> Problem:
    report = validate(problem)
    if not report.ok:
        raise InvalidProblemError(report.violations)
    return problem


def normalize_singletons(problem: Problem) -> Problem:
    """Rewrite a problem to satisfy the singleton-consortium convention.

    Individual tickets of a museum that forms a consortium on its own are
    turned into consortium-pass purchases and the individual price is set to
    the consortium price.
    """
    prices = dict(problem.prices)
    mats = {}
    for t, block in enumerate(problem.consortia, 1):
        if len(block) != 1:
            continue
        (i,) = block
        if t in prices:
            prices[-i] = prices[t]
        moved = problem.holders(-i)
        if moved:
            visits = problem.consumption[t].columns()
            visits.update({a: {i} for a in moved})
            mats[t] = ConsumptionMatrix.from_visits((i,), visits)
            mats[-i] = ConsumptionMatrix.empty((i,))
    return problem.replace(prices=prices, consumption=mats)


# ---------------------------------------------------------------------------
# derived quantities


def revenue(problem: Problem) -> Fraction:
    """Total pass revenue E."""
    require_valid(problem)
    return sum((len(problem.holders(s)) * problem.price(s) for s in problem.sigmas), Fraction(0))


def derived_indices(problem: Problem) -> Indices:
    consortium_of = {i: t for t, block in enumerate(problem.consortia, 1) for i in block}
    pass_of, visits, general = {}, {}, {}
    for sigma in problem.sigmas:
        for a, museums in problem.consumption[sigma].columns().items():
            pass_of[a] = sigma
            visits[a] = museums
            if sigma == GENERAL:
                general[a] = frozenset(consortium_of[i] for i in museums)
    return Indices(
        MappingProxyType(consortium_of),
        MappingProxyType(pass_of),
        MappingProxyType(visits),
        MappingProxyType(general),
    )


def visited_museums(problem: Problem, holder: Holder) -> frozenset:
    """M_a, the museums visited by ``holder``."""
    try:
        return problem.index.visits[holder]
    except KeyError:
        raise KeyError(f"unknown holder {holder!r}") from None


def visited_consortia(problem: Problem, holder: Holder) -> frozenset:
    """K0_a, the consortia a general-pass holder visited."""
    try:
        return problem.index.general_consortia[holder]
    except KeyError:
        raise KeyError(f"{holder!r} is not a general-pass holder") from None


def visitors(problem: Problem, museum: int, sigma: int) -> tuple:
    if museum not in problem.museums:
        raise KeyError(f"unknown museum {museum!r}")
    return problem.index.visitors(problem, museum, sigma)


def own_pass(problem: Problem, museum: int) -> int:
    """sigma of the consortium pass covering ``museum`` (the (i) superscript)."""
    return problem.consortium_of(museum)


def dummy_set(problem: Problem) -> frozenset:
    """Museums nobody visited under their individual, general or consortium pass."""
    require_valid(problem)
    out = set()
    for i in problem.museums:
        if any(problem.consumption[s].row_sum(i) for s in (-i, GENERAL, own_pass(problem, i))):
            continue
        out.add(i)
    return frozenset(out)


def classify_subdomain(problem: Problem):
    """Return ``0``, ``t`` or ``-i`` when only that pass sold, else ``None``.

    A problem with no holders at all lies in every subclass; ``0`` is
    returned for it.
    """
    require_valid(problem)
    sold = [s for s in problem.sigmas if problem.holders(s)]
    if not sold:
        return GENERAL
    if len(sold) == 1:
        return sold[0]
    return None


def subdomain_name(label) -> str:
    if label is None:
        return "general"
    return f"D^{label}"
