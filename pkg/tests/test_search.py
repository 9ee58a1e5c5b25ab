from fractions import Fraction

import pytest

from bbp.search import SearchRequest, SearchResult, find_nmax
from bbp.solvers import AlgorithmId, Mode, prob_exact, ProblemInstance


def certificate_holds(m, r, gamma, result: SearchResult,
                      algorithm=AlgorithmId.STIRLING) -> bool:
    """Re-verify the boundary with an independently chosen algorithm."""
    lo = prob_exact(ProblemInstance(m, result.n_max, r), algorithm)
    hi = prob_exact(ProblemInstance(m, result.n_max + 1, r), algorithm)
    return (
        lo == result.p_at_nmax
        and hi == result.p_at_nmax_plus_1
        and lo >= gamma
        and hi < gamma
    )


def test_classic_birthday_values():
    result = find_nmax(SearchRequest(m=365, r=1))
    assert result.n_max == 22
    assert result.p_at_nmax >= Fraction(1, 2)
    assert result.p_at_nmax_plus_1 < Fraction(1, 2)


def test_small_published_cells():
    assert find_nmax(SearchRequest(m=10, r=2)).n_max == 9
    assert find_nmax(SearchRequest(m=10, r=3)).n_max == 15
    assert find_nmax(SearchRequest(m=25, r=1)).n_max == 6


def test_single_day_year():
    result = find_nmax(SearchRequest(m=1, r=5))
    assert result.n_max == 5
    assert result.p_at_nmax == 1
    assert result.p_at_nmax_plus_1 == 0


def test_certificates_verified_independently():
    gamma = Fraction(1, 2)
    for m, r in [(10, 1), (10, 3), (25, 2), (50, 1), (7, 4)]:
        result = find_nmax(SearchRequest(m=m, r=r, gamma=gamma))
        assert certificate_holds(m, r, gamma, result), (m, r)


def test_result_independent_of_backing_algorithm():
    for m, r, gamma in [(10, 2, Fraction(1, 2)), (12, 3, Fraction(9, 10)),
                        (8, 1, Fraction(1, 4))]:
        results = {
            algo: find_nmax(SearchRequest(m=m, r=r, gamma=gamma, algorithm=algo))
            for algo in (
                AlgorithmId.DAY_AT_A_TIME,
                AlgorithmId.COUNTING,
                AlgorithmId.STIRLING,
                AlgorithmId.DIRECT,
            )
        }
        n_maxes = {res.n_max for res in results.values()}
        assert len(n_maxes) == 1, (m, r, gamma, results)
        certs = {(res.p_at_nmax, res.p_at_nmax_plus_1) for res in results.values()}
        assert len(certs) == 1


def test_gamma_one():
    # P(m, r, r) = 1 and P(m, r+1, r) < 1 for m >= 2.
    for m in (2, 5, 30):
        for r in (1, 2, 4):
            result = find_nmax(SearchRequest(m=m, r=r, gamma=Fraction(1)))
            assert result.n_max == r, (m, r)
    assert find_nmax(SearchRequest(m=1, r=3, gamma=Fraction(1))).n_max == 3


def test_gamma_validation():
    with pytest.raises(ValueError):
        find_nmax(SearchRequest(m=10, r=1, gamma=Fraction(0)))
    with pytest.raises(ValueError):
        find_nmax(SearchRequest(m=10, r=1, gamma=Fraction(-1, 2)))
    with pytest.raises(ValueError):
        find_nmax(SearchRequest(m=10, r=1, gamma=Fraction(3, 2)))


def test_float_mode_matches_exact():
    for m, r in [(10, 2), (50, 1), (100, 3), (25, 5)]:
        exact = find_nmax(SearchRequest(m=m, r=r))
        fast = find_nmax(SearchRequest(m=m, r=r, mode=Mode.FLOAT))
        assert fast.n_max == exact.n_max
        # The float path must still deliver an exact certificate.
        assert fast.p_at_nmax == exact.p_at_nmax
        assert fast.p_at_nmax_plus_1 == exact.p_at_nmax_plus_1


def test_float_mode_requires_direct():
    with pytest.raises(ValueError):
        find_nmax(SearchRequest(m=10, r=1, mode=Mode.FLOAT,
                                algorithm=AlgorithmId.COUNTING))


def test_monotone_in_r_and_m():
    gamma = Fraction(1, 2)
    for m in (10, 25):
        values = [find_nmax(SearchRequest(m=m, r=r, gamma=gamma)).n_max
                  for r in range(1, 6)]
        assert values == sorted(values)
    for r in (1, 3):
        values = [find_nmax(SearchRequest(m=m, r=r, gamma=gamma)).n_max
                  for m in (5, 10, 25, 50)]
        assert values == sorted(values)


def test_cache_populated_and_reused():
    cache: dict = {}
    first = find_nmax(SearchRequest(m=10, r=2), cache=cache)
    assert cache[(10, first.n_max, 2)] == first.p_at_nmax
    assert cache[(10, first.n_max + 1, 2)] == first.p_at_nmax_plus_1
    # A poisoned cache entry must be picked up by the float path, proving
    # the lookup is actually consulted.
    poisoned = dict(cache)
    poisoned[(10, first.n_max, 2)] = Fraction(1, 3)  # below gamma
    shifted = find_nmax(SearchRequest(m=10, r=2, mode=Mode.FLOAT), cache=poisoned)
    assert shifted.n_max == first.n_max - 1
