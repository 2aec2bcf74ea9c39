"""The cooperative game of a problem, and its Shapley and Owen values.

Coalitions are bitmasks: museum ``i`` is bit ``i - 1``.  The characteristic
function is stored as a dense table over all ``2**m`` coalitions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Tuple, Union

from .problem import Problem, require_valid

DEFAULT_BOUND = 12


class GameBoundError(ValueError):
    pass


def mask_of(museums: Iterable[int]) -> int:
    mask = 0
    for i in museums:
        mask |= 1 << (i - 1)
    return mask


def members(mask: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class CharacteristicFunction:
    player_count: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.player_count:
            raise ValueError("need one value per coalition")

    def __call__(self, coalition: Union[int, Iterable[int]]) -> Fraction:
        mask = coalition if isinstance(coalition, int) else mask_of(coalition)
        return self.values[mask]

    @property
    def grand(self) -> Fraction:
        return self.values[-1]

    def items(self):
        """``(sorted museum list, value)`` for every coalition, by bitmask."""
        for mask, v in enumerate(self.values):
            yield list(members(mask)), v


def _check_bound(m: int, bound: int):
    if m > bound:
        raise GameBoundError(f"{m} players exceed the enumeration bound {bound}")


def build_game(d: Problem, bound: int = DEFAULT_BOUND) -> CharacteristicFunction:
    """v(S) = revenue of the holders whose visits all lie inside S."""
    require_valid(d)
    _check_bound(d.m, bound)
    size = 1 << d.m
    table = [Fraction(0)] * size
    for sigma in d.sigmas:
        price = d.price(sigma)
        for visits in d.consumption[sigma].columns().values():
            table[mask_of(visits)] += price
    # sum over subsets
    for bit in range(d.m):
        step = 1 << bit
        for mask in range(size):
            if mask & step:
                table[mask] += table[mask ^ step]
    return CharacteristicFunction(d.m, tuple(table))


def _weights(n: int):
    """Coefficient |S|!(n-|S|-1)!/n! indexed by |S|."""
    return [Fraction(factorial(k) * factorial(n - k - 1), factorial(n)) for k in range(n)]


def shapley(v: CharacteristicFunction, bound: int = DEFAULT_BOUND) -> Tuple[Fraction, ...]:
    m = v.player_count
    _check_bound(m, bound)
    w = _weights(m)
    out = []
    for i in range(m):
        bit = 1 << i
        total = Fraction(0)
        for mask in range(1 << m):
            if not mask & bit:
                total += w[bin(mask).count("1")] * (v.values[mask | bit] - v.values[mask])
        out.append(total)
    return tuple(out)


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def owen(v: CharacteristicFunction, partition: Sequence[Iterable[int]], bound: int = DEFAULT_BOUND) -> Tuple[Fraction, ...]:
    """Owen value for the a priori unions ``partition``.

    Sums, for player i in union k, over coalitions R of the other unions and
    subsets T of k's other members, the marginal contribution of i to
    (union of R) + T weighted by |R|!(u-|R|-1)!/u! * |T|!(p-|T|-1)!/p!.
    """
    m = v.player_count
    _check_bound(m, bound)
    blocks = [mask_of(b) for b in partition]
    if sum(bin(b).count("1") for b in blocks) != m or mask_of(range(1, m + 1)) != _or(blocks):
        raise ValueError("partition must cover every player exactly once")
    u = len(blocks)
    outer = _weights(u)
    # coalition of unions (bitmask over union indices) -> museum mask
    union_mask = [0] * (1 << u)
    for r in range(1, 1 << u):
        low = (r & -r).bit_length() - 1
        union_mask[r] = union_mask[r & (r - 1)] | blocks[low]

    out = [Fraction(0)] * m
    for k, block in enumerate(blocks):
        others = ((1 << u) - 1) ^ (1 << k)
        size = bin(block).count("1")
        inner = _weights(size)
        for i in members(block):
            bit = 1 << (i - 1)
            rest = block ^ bit
            total = Fraction(0)
            for r in _submasks(others):
                base = union_mask[r]
                wr = outer[bin(r).count("1")]
                for t in _submasks(rest):
                    s = base | t
                    total += wr * inner[bin(t).count("1")] * (v.values[s | bit] - v.values[s])
            out[i - 1] = total
    return tuple(out)


def _or(masks):
    acc = 0
    for x in masks:
        acc |= x
    return acc


def game_report(d: Problem, bound: int = DEFAULT_BOUND) -> dict:
    """Game table, Owen value and EE allocation of a problem, with the verdict."""
    from .rules import allocate_ee

    v = build_game(d, bound)
    ow = owen(v, d.consortia, bound)
    ee = tuple(allocate_ee(d))
    return {"game": v, "owen": ow, "ee": ee, "equal": ow == ee}
