"""Binary search for the largest n keeping P(m, n, r) at or above a threshold.

P is nonincreasing in n and hits zero past n = m*r (pigeonhole), so the
search domain [0, m*r] is exact.  Thresholds are exact rationals and all
boundary comparisons are exact; a float-backed search re-verifies both
certificate cells in exact arithmetic and repairs the answer if needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .solvers import (
    AlgorithmId,
    DirectContext,
    FloatDirectContext,
    Mode,
    make_context,
)


@dataclass
class SearchRequest:
    m: int
    r: int
    gamma: Fraction = field(default_factory=lambda: Fraction(1, 2))
    algorithm: AlgorithmId = AlgorithmId.DIRECT
    mode: Mode = Mode.EXACT
    precision: int | None = None  # mantissa bits for float mode, None = doubles


@dataclass
class SearchResult:
    n_max: int
    p_at_nmax: Fraction
    p_at_nmax_plus_1: Fraction


def _check_gamma(gamma: Fraction) -> None:
    if gamma <= 0:
        raise ValueError("gamma must be positive (n_max is unbounded otherwise)")
    if gamma > 1:
        raise ValueError("gamma must be at most 1")


def find_nmax(req: SearchRequest, cache: dict | None = None) -> SearchResult:
    """The unique n in [0, m*r] with P(m, n, r) >= gamma > P(m, n+1, r)."""
    _check_gamma(req.gamma)
    m, r, gamma = req.m, req.r, req.gamma
    hi_bound = m * r

    if req.mode is Mode.FLOAT:
        if req.algorithm is not AlgorithmId.DIRECT:
            raise ValueError("float mode is only available for the direct algorithm")
        candidate = _float_search(m, r, gamma, req.precision, hi_bound)
        return _verify_and_certify(m, r, gamma, candidate, hi_bound, cache)

    if req.algorithm is AlgorithmId.DIRECT:
        ctx = DirectContext(m, r)
        at_least = lambda n: ctx.prob_at_least(n, gamma)
    else:
        ctx = make_context(m, r, req.algorithm)
        at_least = lambda n: ctx.prob(n) >= gamma

    lo, hi = 0, hi_bound
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if at_least(mid):
            lo = mid
        else:
            hi = mid - 1
    n_max = lo
    result = SearchResult(
        n_max=n_max,
        p_at_nmax=ctx.prob(n_max),
        p_at_nmax_plus_1=ctx.prob(n_max + 1) if n_max < hi_bound else Fraction(0),
    )
    if cache is not None:
        cache[(m, n_max, r)] = result.p_at_nmax
        cache[(m, n_max + 1, r)] = result.p_at_nmax_plus_1
    return result


def _float_search(m: int, r: int, gamma: Fraction, precision: int | None,
                  hi_bound: int) -> int:
    ctx = FloatDirectContext(m, r, precision)
    g = float(gamma)
    lo, hi = 0, hi_bound
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ctx.prob(mid) >= g:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _verify_and_certify(m: int, r: int, gamma: Fraction, candidate: int,
                        hi_bound: int, cache: dict | None) -> SearchResult:
    """Exactly re-check the float boundary and walk to the true crossing."""
    ctx = DirectContext(m, r)

    def exact_p(n: int) -> Fraction:
        if n > hi_bound:
            return Fraction(0)
        if cache is not None and (m, n, r) in cache:
            return cache[(m, n, r)]
        p = ctx.prob(n)
        if cache is not None:
            cache[(m, n, r)] = p
        return p

    n = candidate
    while n > 0 and exact_p(n) < gamma:
        n -= 1
    while n < hi_bound and exact_p(n + 1) >= gamma:
        n += 1
    return SearchResult(
        n_max=n,
        p_at_nmax=exact_p(n),
        p_at_nmax_plus_1=exact_p(n + 1),
    )
