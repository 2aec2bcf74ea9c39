"""Problem transformations that the axioms quantify over.

Every constructor returns a fresh, validated :class:`Problem`.  Split
transforms also return a relabel map so payouts can be compared across the
original and the transformed problem.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .problem import (
    GENERAL,
    ConsumptionMatrix,
    Problem,
    classify_subdomain,
    require_valid,
    revenue,
    single_row,
)


class TransformError(ValueError):
    pass


def copy_id(holder, copy: int):
    """Id of the ``copy``-th duplicate of a holder; copy 1 keeps the original id."""
    return holder if copy == 1 else f"{holder}#{copy}"


@dataclass(frozen=True)
class MuseumSplitSpec:
    target: int
    piece_prices: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "piece_prices", tuple(Fraction(p) for p in self.piece_prices))


@dataclass(frozen=True)
class ConsortiumSplitSpec:
    """Split consortium ``target`` into ``len(copy_pass_prices)`` full copies.

    ``copy_museum_prices[l][h]`` is the individual price, in copy ``l``, of
    the ``h``-th museum of the consortium (block order).  For a singleton
    consortium it may be omitted and then equals the copy's pass price.
    """

    target: int
    copy_pass_prices: Tuple[Fraction, ...]
    copy_museum_prices: Tuple[Tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "copy_pass_prices", tuple(Fraction(p) for p in self.copy_pass_prices))
        object.__setattr__(
            self, "copy_museum_prices",
            tuple(tuple(Fraction(p) for p in row) for row in self.copy_museum_prices),
        )


@dataclass(frozen=True)
class MuseumSplit:
    problem: Problem
    pieces: Tuple[int, ...]
    """Ids of the pieces replacing the target (the first equals the target)."""


@dataclass(frozen=True)
class ConsortiumSplit:
    problem: Problem
    copies: Tuple[int, ...]
    """Consortium indices of the copies (the first equals the target)."""
    museum_copies: Dict[int, Tuple[int, ...]]
    """Original museum of the split consortium -> its id in each copy."""
    revenue_delta: Fraction


def concat(d1: Problem, d2: Problem) -> Problem:
    """Pool two problems over the same museums, partition and prices."""
    require_valid(d1)
    require_valid(d2)
    if d1.m != d2.m or d1.consortia != d2.consortia or dict(d1.prices) != dict(d2.prices):
        raise TransformError("concat needs identical museums, consortia and prices")
    clash = set(d1.all_holders()) & set(d2.all_holders())
    if clash:
        raise TransformError(f"holder ids shared by both problems: {sorted(map(str, clash))}")
    mats = {}
    for sigma in d1.sigmas:
        a, b = d1.consumption[sigma], d2.consumption[sigma]
        rows = a.rows
        b_cells = {i: row for i, row in zip(b.rows, b.cells)}
        cells = tuple(row + b_cells[i] for i, row in zip(rows, a.cells))
        mats[sigma] = ConsumptionMatrix(rows, a.cols + b.cols, cells)
    return require_valid(d1.replace(consumption=mats))


def split_holders(d: Problem, first: set) -> Tuple[Problem, Problem]:
    """Partition the holders of ``d`` into (holders in ``first``, the rest)."""
    require_valid(d)
    parts = []
    for keep in (lambda a: a in first, lambda a: a not in first):
        mats = {}
        for sigma, mat in d.consumption.items():
            visits = {a: v for a, v in mat.columns().items() if keep(a)}
            mats[sigma] = ConsumptionMatrix.from_visits(mat.rows, visits)
        parts.append(d.replace(consumption=mats))
    return parts[0], parts[1]


def restrict(d: Problem, sigma: int) -> Problem:
    """Keep only the holders of pass ``sigma``."""
    require_valid(d)
    if sigma not in d.sigmas:
        raise TransformError(f"unknown pass {sigma}")
    mats = {s: ConsumptionMatrix.empty(mat.rows) for s, mat in d.consumption.items() if s != sigma}
    return d.replace(consumption=mats)


def split_museum(d: Problem, spec: MuseumSplitSpec) -> MuseumSplit:
    """Replace a museum by ``r`` pieces inside its consortium.

    Pieces inherit the target's general-pass and consortium-pass visits; the
    target's individual-ticket holders are duplicated onto every piece.
    Piece 1 keeps the target id, the others are numbered ``m+1, m+2, ...``.
    """
    require_valid(d)
    i = spec.target
    if i not in d.museums:
        raise TransformError(f"unknown museum {i}")
    prices = spec.piece_prices
    if len(prices) < 2:
        raise TransformError("a museum split needs at least two pieces")
    if any(p <= 0 for p in prices):
        raise TransformError("piece prices must be positive")
    if sum(prices) != d.price(-i):
        raise TransformError(f"piece prices sum to {sum(prices)}, not {d.price(-i)}")

    m2 = d.m + len(prices) - 1
    pieces = (i,) + tuple(range(d.m + 1, m2 + 1))
    k = d.consortium_of(i)
    consortia = [tuple(b) + pieces[1:] if t == k else b for t, b in enumerate(d.consortia, 1)]

    new_prices = dict(d.prices)
    for piece, p in zip(pieces, prices):
        new_prices[-piece] = p

    def widen(mat: ConsumptionMatrix) -> ConsumptionMatrix:
        visits = {a: set(v) | set(pieces[1:]) if i in v else v for a, v in mat.columns().items()}
        return ConsumptionMatrix.from_visits(sorted(set(mat.rows) | set(pieces[1:])), visits)

    mats = {}
    for sigma, mat in d.consumption.items():
        if sigma < 0:
            continue
        mats[sigma] = widen(mat) if sigma in (GENERAL, k) else mat
    for j in range(1, m2 + 1):
        if j in pieces:
            h = pieces.index(j) + 1
            mats[-j] = single_row(j, [copy_id(a, h) for a in d.holders(-i)])
        else:
            mats[-j] = d.consumption[-j]

    out = Problem(m=m2, consortia=consortia, prices=new_prices, consumption=mats)
    return MuseumSplit(require_valid(out), pieces)


def split_consortium(d: Problem, spec: ConsortiumSplitSpec) -> ConsortiumSplit:
    """Replace consortium ``k`` by ``t`` full copies.

    Each copy gets the consortium-pass holders and the individual-ticket
    holders of every member (duplicated under fresh ids), and every general
    pass visit to a member becomes a visit to that member in every copy.
    Copy 1 keeps the original museum ids and index ``k``; copy ``l > 1`` gets
    index ``s + l - 1`` and museums numbered after ``m``.
    """
    require_valid(d)
    k = spec.target
    if not 1 <= k <= d.s:
        raise TransformError(f"unknown consortium {k}")
    block = tuple(d.block(k))
    t = len(spec.copy_pass_prices)
    if t < 2:
        raise TransformError("a consortium split needs at least two copies")
    museum_prices = spec.copy_museum_prices
    if not museum_prices and len(block) == 1:
        museum_prices = tuple((p,) for p in spec.copy_pass_prices)
    if len(museum_prices) != t or any(len(row) != len(block) for row in museum_prices):
        raise TransformError(f"need {t} rows of {len(block)} museum prices")
    if any(p <= 0 for p in spec.copy_pass_prices) or any(p <= 0 for row in museum_prices for p in row):
        raise TransformError("copy prices must be positive")
    if sum(spec.copy_pass_prices) != d.price(k):
        raise TransformError(f"copy pass prices sum to {sum(spec.copy_pass_prices)}, not {d.price(k)}")
    for h, i in enumerate(block):
        total = sum(row[h] for row in museum_prices)
        if total != d.price(-i):
            raise TransformError(f"copy prices of museum {i} sum to {total}, not {d.price(-i)}")

    r = len(block)
    ids = {i: [i] for i in block}
    nxt = d.m + 1
    for _ in range(1, t):
        for i in block:
            ids[i].append(nxt)
            nxt += 1
    m2 = nxt - 1
    copies = (k,) + tuple(range(d.s + 1, d.s + t))
    consortia = list(d.consortia) + [tuple(ids[i][l] for i in block) for l in range(1, t)]

    prices = {sigma: p for sigma, p in d.prices.items() if sigma >= 0}
    for j in d.museums:
        prices[-j] = d.price(-j)
    for l, c in enumerate(copies):
        prices[c] = spec.copy_pass_prices[l]
        for h, i in enumerate(block):
            prices[-ids[i][l]] = museum_prices[l][h]

    mats = {}
    general = d.consumption[GENERAL]
    gvisits = {}
    for a, v in general.columns().items():
        extra = {ids[i][l] for i in v if i in ids for l in range(1, t)}
        gvisits[a] = set(v) | extra
    mats[GENERAL] = ConsumptionMatrix.from_visits(range(1, m2 + 1), gvisits)
    for sigma in range(1, d.s + 1):
        if sigma != k:
            mats[sigma] = d.consumption[sigma]
    kvisits = d.consumption[k].columns()
    for l, c in enumerate(copies):
        rows = sorted(ids[i][l] for i in block)
        mats[c] = ConsumptionMatrix.from_visits(
            rows, {copy_id(a, l + 1): {ids[i][l] for i in v} for a, v in kvisits.items()}
        )
    for j in d.museums:
        if j in ids:
            for l in range(t):
                mats[-ids[j][l]] = single_row(ids[j][l], [copy_id(a, l + 1) for a in d.holders(-j)])
        else:
            mats[-j] = d.consumption[-j]

    out = require_valid(Problem(m=m2, consortia=consortia, prices=prices, consumption=mats))
    return ConsortiumSplit(
        out, copies, {i: tuple(ids[i]) for i in block}, revenue(out) - revenue(d)
    )


def reduce_problem(d: Problem) -> Problem:
    """Collapse each consortium of a general-pass-only problem into one museum."""
    require_valid(d)
    if classify_subdomain(d) != GENERAL:
        raise TransformError("the reduced problem is only defined when only general passes sold")
    s = d.s
    prices = {GENERAL: d.price(GENERAL)}
    for t in range(1, s + 1):
        prices[t] = d.price(t)
        prices[-t] = d.price(t)
    visits = {a: set(d.index.general_consortia[a]) for a in d.holders(GENERAL)}
    mats = {GENERAL: ConsumptionMatrix.from_visits(range(1, s + 1), visits)}
    return require_valid(Problem(m=s, consortia=[(t,) for t in range(1, s + 1)], prices=prices, consumption=mats))


def drop_museum_visits(d: Problem, museum: int) -> Problem:
    """Make ``museum`` a dummy: erase its visits and individual sales.

    Holders left with no visit at all are removed.
    """
    require_valid(d)
    mats = {}
    for sigma, mat in d.consumption.items():
        if sigma == -museum:
            mats[sigma] = ConsumptionMatrix.empty(mat.rows)
            continue
        visits = {a: set(v) - {museum} for a, v in mat.columns().items()}
        mats[sigma] = ConsumptionMatrix.from_visits(mat.rows, {a: v for a, v in visits.items() if v})
    return require_valid(d.replace(consumption=mats))


def with_price(d: Problem, sigma: int, price) -> Problem:
    """Change one price, keeping the singleton-consortium convention."""
    prices = dict(d.prices)
    prices[sigma] = Fraction(price)
    if sigma > 0 and len(d.block(sigma)) == 1:
        prices[-d.block(sigma)[0]] = Fraction(price)
    elif sigma < 0 and len(d.block(d.consortium_of(-sigma))) == 1:
        prices[d.consortium_of(-sigma)] = Fraction(price)
    return require_valid(d.replace(prices=prices))
