"""Reading and writing problem files.

The file is a JSON object::

    {"museums": 3,
     "consortia": [[1, 2], [3]],
     "passes": [{"sigma": -2, "price": "2", "holders": [1, 2, 3],
                 "rows": [2], "visits": [[1, 1, 1]]}, ...]}

Prices are decimal or fraction strings and are converted exactly.  A pass
entry may leave out ``holders``/``rows``/``visits`` when nobody bought it.
The individual pass of a museum that is a consortium on its own may be
left out altogether; its price is the consortium price.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema

from .problem import (
    ConsumptionMatrix,
    InvalidProblemError,
    Problem,
    Violation,
    normalize_singletons,
    validate,
)


class ProblemFileError(ValueError):
    """Malformed problem file; the message names the offending line or field."""


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("passalloc").joinpath("problem.schema.json").read_text("utf-8")
    return json.loads(text)


def parse_fraction(value) -> Fraction:
    """Exact rational from an int, a decimal string or a ``p/q`` string.

    Binary floats are refused so that no rounding ever sneaks in.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ProblemFileError(f"price {value!r} must be a string or integer, not a float")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise ProblemFileError(f"cannot read {value!r} as an exact rational") from None


def format_fraction(x: Fraction) -> str:
    """Decimal string when the expansion terminates, else ``p/q``."""
    x = Fraction(x)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    if x.denominator == 1:
        return str(x.numerator)
    places = max(twos, fives)
    scaled = x * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _load_json(text: str) -> dict:
    try:
        return json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None


def problem_from_dict(data: dict, *, normalize: bool = False, check: bool = True) -> Problem:
    """Build a :class:`Problem` from the decoded JSON object.

    With ``check`` the result is validated and :class:`InvalidProblemError`
    raised on the first violated invariant set.  ``normalize`` rewrites
    singleton-consortium individual sales to the convention instead of
    rejecting them.
    """
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ProblemFileError(f"field {where}: {e.message}") from None

    m = data["museums"]
    consortia = [tuple(b) for b in data["consortia"]]
    prices, mats = {}, {}
    seen_sigma = set()
    for n, entry in enumerate(data["passes"]):
        sigma = entry["sigma"]
        where = f"passes/{n}"
        if sigma in seen_sigma:
            raise ProblemFileError(f"field {where}/sigma: pass {sigma} listed twice")
        if not -m <= sigma <= len(consortia):
            raise ProblemFileError(f"field {where}/sigma: {sigma} outside {-m}..{len(consortia)}")
        seen_sigma.add(sigma)
        prices[sigma] = parse_fraction(entry["price"])
        holders = list(entry.get("holders", []))
        rows = entry.get("rows")
        if rows is None:
            rows = _default_rows(sigma, m, consortia)
        visits = entry.get("visits")
        if visits is None:
            if sigma < 0:
                visits = [[1] * len(holders)]
            elif holders:
                raise ProblemFileError(f"field {where}/visits: required when the pass has holders")
            else:
                visits = [[] for _ in rows]
        if len(visits) != len(rows):
            raise ProblemFileError(f"field {where}/visits: {len(visits)} rows for {len(rows)} row labels")
        for r, row in enumerate(visits):
            if len(row) != len(holders):
                raise ProblemFileError(f"field {where}/visits/{r}: {len(row)} cells for {len(holders)} holders")
        mats[sigma] = ConsumptionMatrix(tuple(rows), tuple(holders), tuple(tuple(r) for r in visits))

    # derived individual prices of singleton consortia
    for t, block in enumerate(consortia, 1):
        if len(block) == 1 and -block[0] not in prices and t in prices:
            prices[-block[0]] = prices[t]

    problem = Problem(m=m, consortia=consortia, prices=prices, consumption=mats)
    if normalize:
        problem = normalize_singletons(problem)
    if check:
        report = validate(problem)
        if not report.ok:
            raise InvalidProblemError(report.violations)
    return problem


def _default_rows(sigma, m, consortia):
    if sigma < 0:
        return [-sigma]
    if sigma == 0:
        return list(range(1, m + 1))
    return sorted(consortia[sigma - 1])


def parse_problem(source: Union[str, bytes, Path], *, normalize: bool = False, check: bool = True) -> Problem:
    """Parse a problem from a path, or from JSON text/bytes."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = Path(source).read_text("utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        text = source
    return problem_from_dict(_load_json(text), normalize=normalize, check=check)


def problem_to_dict(problem: Problem) -> dict:
    passes = []
    for sigma in problem.sigmas:
        mat = problem.consumption[sigma]
        passes.append({
            "sigma": sigma,
            "price": format_fraction(problem.price(sigma)),
            "holders": list(mat.cols),
            "rows": list(mat.rows),
            "visits": [list(r) for r in mat.cells],
        })
    return {
        "museums": problem.m,
        "consortia": [list(b) for b in problem.consortia],
        "passes": passes,
    }


def serialize_problem(problem: Problem) -> bytes:
    """Canonical UTF-8 JSON: sorted keys, lowest-terms prices, every pass listed."""
    return dumps(problem_to_dict(problem)).encode("utf-8")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, Fraction):
        return format_ratio(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def format_ratio(x: Fraction) -> str:
    """Lowest-terms fraction string used in reports (``"21/5"``, ``"5"``)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def violation_to_dict(v: Violation) -> dict:
    return {"code": v.code, "detail": v.detail}
