import math
from fractions import Fraction

import pytest

from unitindex.arith import factor
from unitindex.families import FamilyTag, a_members, in_D2
from unitindex.fourrank import fourrank_oracle
from unitindex.stats import (
    INFINITY,
    ConstantMethod,
    band_constants,
    estimate_constant,
    eta,
    moment_from_survey,
    moment_survey,
    predicted_rank_probability,
    rank_distribution,
    rank_survey,
    sd_band_check,
)

ETA_INF = 0.288788095086602


def test_eta():
    assert eta(2) == 0.375
    assert eta(0) == 1.0
    assert abs(eta(INFINITY) - ETA_INF) < 1e-6
    # independent product to j = 40
    assert abs(eta(INFINITY) - math.prod(1 - 2.0**-j for j in range(1, 41))) < 1e-12
    with pytest.raises(ValueError):
        eta(-1)


@pytest.mark.parametrize("r,p", [(0, 0.288788), (1, 0.577576), (2, 0.128350)])
def test_predicted_probabilities(r, p):
    assert abs(predicted_rank_probability(r) - p) < 1e-6


def test_predicted_distribution_sums_to_one():
    assert abs(sum(predicted_rank_probability(r) for r in range(21)) - 1) < 1e-9


def test_predicted_moments_are_subspace_counts():
    # sum_r P(r) 2^{kr} = N(k, 2)
    for k, n in ((1, 2), (2, 5), (3, 16)):
        assert abs(sum(predicted_rank_probability(r) * 2 ** (k * r) for r in range(30)) - n) < 1e-9


def test_tiny_survey():
    rep = moment_survey(100, 1)
    assert (rep.S_value, rep.A_value, rep.ratio, rep.predicted) == (4, 4, Fraction(1), 2)
    dist = rank_distribution(100)
    assert dist.histogram == {0: 4} and dist.total == 4
    assert all(fourrank_oracle(f).rank == 0 for f in a_members(100))


def test_moment_and_distribution_agree():
    for X in (10**3, 10**4, 10**5):
        survey = rank_survey(X)
        hist = rank_distribution(X, survey=survey).histogram
        for k in range(5):
            direct = moment_survey(X, k)
            assert direct.S_value == sum(c * 2 ** (k * r) for r, c in hist.items())
            assert direct == moment_from_survey(survey, k)
            assert direct.S_value >= direct.A_value


def test_survey_ranks_match_oracle():
    survey = rank_survey(20_000)
    counts: dict[int, int] = {}
    for f in a_members(20_000):
        r = fourrank_oracle(f).rank
        counts[r] = counts.get(r, 0) + 1
    assert counts == survey.histogram


def test_survey_jobs_invariance():
    X = 700_000
    assert rank_survey(X, jobs=1) == rank_survey(X, jobs=3)


def test_distribution_report_shape():
    rep = rank_distribution(10**4, r_max=5)
    assert list(rep.predicted) == list(range(6))
    assert [row[0] for row in rep.csv_rows()] == list(range(6))
    assert rep.to_json()["total"] == rep.total == sum(rep.histogram.values())


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        moment_survey(100, 5)
    with pytest.raises(ValueError):
        moment_survey(10**9, 1)
    with pytest.raises(ValueError):
        estimate_constant(FamilyTag.D2, 999)
    with pytest.raises(ValueError):
        estimate_constant(FamilyTag.SD, 10**4)
    with pytest.raises(ValueError):
        sd_band_check(100)


def test_constants():
    lo = estimate_constant(FamilyTag.D2, 10**4).estimate
    hi = estimate_constant(FamilyTag.D2, 10**6).estimate
    assert abs(hi - lo) / hi < 0.15
    for fam in (FamilyTag.D2, FamilyTag.DM2):
        count = estimate_constant(fam, 10**6).estimate
        euler = estimate_constant(fam, 10**6, ConstantMethod.EULER_PRODUCT).estimate
        assert 0 < count < math.inf and abs(count - euler) / euler < 0.10


def test_count_inversion_formula():
    X = 10**4
    n = sum(in_D2(factor(m)) for m in range(2, X + 1))
    assert estimate_constant(FamilyTag.D2, X).estimate == n * 3 * math.sqrt(math.log(X)) / (2 * X)


@pytest.mark.parametrize("X", [10**4, pytest.param(10**6, marks=pytest.mark.slow)])
def test_band(X):
    rep = sd_band_check(X)
    c1, c2 = band_constants(rep.C2, rep.Cm2)
    assert (c1, c2) == (rep.c1, rep.c2)
    assert c1 == rep.C2 / 6 * eta(INFINITY) and c2 == 2 * (rep.C2 + rep.Cm2) / 3
    assert rep.C2 == estimate_constant(FamilyTag.D2, X).estimate
    assert 0.8 * rep.c1 < rep.normalized < 1.2 * rep.c2
    assert rep.position == "inside"
    assert rep.notes


def test_band_counts_monotone():
    counts = [sd_band_check(X).sd_count for X in (10**4, 2 * 10**4, 5 * 10**4)]
    assert counts == sorted(counts)
