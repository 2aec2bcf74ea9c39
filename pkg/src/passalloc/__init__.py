"""Revenue sharing for museum passes sold alongside consortium passes."""
from .problem import (
    GENERAL,
    ConsumptionMatrix,
    InvalidProblemError,
    Problem,
    ValidationReport,
    Violation,
    classify_subdomain,
    derived_indices,
    dummy_set,
    normalize_singletons,
    revenue,
    validate,
)
from .rules import (
    Allocation,
    RuleId,
    allocate,
    allocate_ee,
    allocate_ep,
    allocate_pe,
    allocate_pp,
    allocate_remark,
)
from .io import parse_problem, serialize_problem

__version__ = "0.1.0"


def example1() -> Problem:
    """The three-museum, two-consortium worked example shipped with the package."""
    from importlib import resources

    return parse_problem(resources.files(__name__).joinpath("example1.json").read_text("utf-8"))
