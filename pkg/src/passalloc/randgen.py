"""Seeded random problems.

Streams come from :class:`random.Random` (Mersenne Twister) seeded with the
first 8 bytes of ``sha256("<seed>/<label>/<index>")``, so every
(seed, label, index) triple names an independent, platform-stable stream.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Tuple

from .problem import GENERAL, ConsumptionMatrix, Problem, single_row


def derive_seed(seed: int, *path) -> int:
    key = "/".join(str(p) for p in (seed,) + path).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def stream(seed: int, *path) -> random.Random:
    return random.Random(derive_seed(seed, *path))


@dataclass(frozen=True)
class GenConfig:
    """Knobs for :func:`generate`.  Ranges are inclusive ``(lo, hi)`` pairs."""

    museums: Tuple[int, int] = (1, 6)
    consortia: Tuple[int, int] = (1, 3)
    individual_holders: Tuple[int, int] = (0, 2)
    general_holders: Tuple[int, int] = (0, 4)
    consortium_holders: Tuple[int, int] = (0, 3)
    max_holders: int = 12
    price_numerator: int = 9
    price_denominator: int = 3
    density: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for name in ("museums", "consortia", "individual_holders", "general_holders", "consortium_holders"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (int(lo), int(hi)))
            if lo > hi or lo < 0:
                raise ValueError(f"{name} range {lo}..{hi} is empty or negative")
        if self.museums[0] < 1 or self.consortia[0] < 1:
            raise ValueError("at least one museum and one consortium are required")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.price_numerator < 1 or self.price_denominator < 1:
            raise ValueError("price bounds must be positive")
        if self.max_holders < 0:
            raise ValueError("max_holders must be nonnegative")

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "GenConfig":
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in data.items()})


def random_price(rng: random.Random, config: GenConfig) -> Fraction:
    return Fraction(rng.randint(1, config.price_numerator), rng.randint(1, config.price_denominator))


def random_partition(rng: random.Random, m: int, s: int) -> list:
    order = list(range(1, m + 1))
    rng.shuffle(order)
    blocks = [[i] for i in order[:s]]
    for i in order[s:]:
        blocks[rng.randrange(s)].append(i)
    return sorted((sorted(b) for b in blocks), key=lambda b: b[0])


def random_visits(rng: random.Random, rows, holders, density: float) -> ConsumptionMatrix:
    """Bernoulli(density) cells; an all-zero column gets one random legal 1."""
    rows = tuple(rows)
    visits = {}
    for a in holders:
        v = {i for i in rows if rng.random() < density}
        if not v:
            v = {rows[rng.randrange(len(rows))]}
        visits[a] = v
    return ConsumptionMatrix.from_visits(rows, visits)


def generate(config: GenConfig) -> Problem:
    """A valid random problem, a pure function of ``config``."""
    rng = stream(config.seed, "problem")
    m = rng.randint(*config.museums)
    s = rng.randint(min(config.consortia[0], m), min(config.consortia[1], m))
    blocks = random_partition(rng, m, s)

    prices = {GENERAL: random_price(rng, config)}
    for t, block in enumerate(blocks, 1):
        prices[t] = random_price(rng, config)
        for i in block:
            prices[-i] = prices[t] if len(block) == 1 else random_price(rng, config)

    budget = config.max_holders
    next_id = 1
    mats = {}

    def take(lo_hi):
        nonlocal budget, next_id
        n = min(rng.randint(*lo_hi), budget)
        budget -= n
        ids = list(range(next_id, next_id + n))
        next_id += n
        return ids

    passes = list(range(-m, s + 1))
    rng.shuffle(passes)
    for sigma in passes:
        if sigma < 0:
            i = -sigma
            if len(blocks[[i in b for b in blocks].index(True)]) == 1:
                continue
            mats[sigma] = single_row(i, take(config.individual_holders))
        elif sigma == GENERAL:
            mats[sigma] = random_visits(rng, range(1, m + 1), take(config.general_holders), config.density)
        else:
            mats[sigma] = random_visits(rng, blocks[sigma - 1], take(config.consortium_holders), config.density)
    return Problem(m=m, consortia=blocks, prices=prices, consumption=mats)


def stream_problems(config: GenConfig, count: int, label: str = "instances"):
    """``count`` problems with seeds derived from ``config.seed``."""
    for n in range(count):
        yield generate(config.with_seed(derive_seed(config.seed, label, n)))


def random_rational_partition(rng: random.Random, total: Fraction, pieces: int, spread: int = 4) -> Tuple[Fraction, ...]:
    """Split ``total`` into ``pieces`` positive rationals summing to it exactly."""
    weights = [rng.randint(1, spread) for _ in range(pieces)]
    w = sum(weights)
    return tuple(total * x / w for x in weights)
