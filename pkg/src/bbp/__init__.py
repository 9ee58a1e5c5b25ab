"""Exact solvers for the bottleneck birthday problem.

Given m days, n people, and a per-day cap r, compute the exact probability
that no day collects more than r birthdays, count the valid configurations,
and find the largest n keeping that probability at or above a threshold.
"""

from .exact_arith import BigCount, ExactProbability, binomial, int_pow, ratio
from .search import SearchRequest, SearchResult, find_nmax
from .solvers import (
    AlgorithmId,
    InstanceTooLargeError,
    Mode,
    ProbResult,
    ProblemInstance,
    coeff_next,
    coeff_seed,
    count_T,
    count_valid,
    count_valid_stirling,
    prob_bruteforce,
    prob_counting,
    prob_day_recurrence,
    prob_direct,
    prob_exact,
    prob_stirling,
)
from .stirling import restricted_stirling2, stirling2
from .tabulator import (
    BenchReport,
    ProbabilityCache,
    TableResult,
    TableSpec,
    XCheckReport,
    benchmark,
    cross_check,
    generate_table,
    render,
)

__all__ = [
    "AlgorithmId",
    "BenchReport",
    "BigCount",
    "ExactProbability",
    "InstanceTooLargeError",
    "Mode",
    "ProbResult",
    "ProbabilityCache",
    "ProblemInstance",
    "SearchRequest",
    "SearchResult",
    "TableResult",
    "TableSpec",
    "XCheckReport",
    "benchmark",
    "binomial",
    "coeff_next",
    "coeff_seed",
    "count_T",
    "count_valid",
    "count_valid_stirling",
    "cross_check",
    "find_nmax",
    "generate_table",
    "int_pow",
    "prob_bruteforce",
    "prob_counting",
    "prob_day_recurrence",
    "prob_direct",
    "prob_exact",
    "prob_stirling",
    "ratio",
    "render",
    "restricted_stirling2",
    "stirling2",
]
