"""Moments and distribution of the 4-rank over the restricted D_2 family,
density constants for D_2 and D_-2, and the SD counting band."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .arith import small_primes, squarefree_segments
from .f2comb import count_subspaces
from .families import EXCLUSION_NOTE, FamilyTag, _family_masks, census
from .fourrank import FourRankConsistencyError, fk_special_sum
from .parallel import map_blocks, split_range

MAX_X = 10**8
MIN_X_COUNT_INVERSION = 10**4
SURVEY_BLOCK = 1 << 18
INFINITY = math.inf


class ConstantMethod(enum.Enum):
    COUNT_INVERSION = "count"
    EULER_PRODUCT = "euler"


def eta(r, precision: float = 1e-15) -> float:
    """prod_{j=1}^{r} (1 - 2^-j); r may be ``INFINITY``."""
    if precision <= 0:
        raise ValueError("precision must be positive")
    if r == INFINITY:
        # the tail prod_{j>J} lies in (1 - 2^-J, 1]
        J = max(1, math.ceil(-math.log2(precision)) + 1)
    else:
        if r < 0 or int(r) != r:
            raise ValueError(f"r must be a nonnegative integer or INFINITY, got {r}")
        J = int(r)
    out = 1.0
    for j in range(1, J + 1):
        out *= 1.0 - 2.0**-j
    return out


def predicted_rank_probability(r: int) -> float:
    """Limiting share of the family with 4-rank exactly r."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return 2.0 ** (-r * r) * eta(INFINITY) / eta(r) ** 2


@dataclass
class MomentReport:
    X: int
    k: int
    S_value: int
    A_value: int
    ratio: Fraction
    predicted: int

    def to_json(self) -> dict:
        return {
            "X": self.X,
            "k": self.k,
            "S_value": self.S_value,
            "A_value": self.A_value,
            "ratio": float(self.ratio),
            "predicted": self.predicted,
        }


@dataclass
class DistributionReport:
    X: int
    histogram: dict[int, int]
    predicted: dict[int, float]
    total: int

    def frequency(self, r: int) -> float:
        return self.histogram.get(r, 0) / self.total if self.total else float("nan")

    def to_json(self) -> dict:
        return {
            "X": self.X,
            "histogram": {str(r): c for r, c in sorted(self.histogram.items())},
            "predicted": {str(r): p for r, p in sorted(self.predicted.items())},
            "total": self.total,
        }

    def csv_rows(self) -> list[list]:
        return [[r, self.histogram.get(r, 0), p] for r, p in sorted(self.predicted.items())]


@dataclass
class ConstantEstimate:
    family: FamilyTag
    X: int
    estimate: float
    method: ConstantMethod

    def to_json(self) -> dict:
        return {"family": self.family.name, "X": self.X, "estimate": self.estimate, "method": self.method.name}


@dataclass
class TheoremBandReport:
    X: int
    sd_count: int
    c1: float
    c2: float
    lower: float
    upper: float
    C2: float
    Cm2: float
    notes: list[str] = field(default_factory=list)

    @property
    def normalized(self) -> float:
        return self.sd_count / (self.X / math.sqrt(math.log(self.X)))

    @property
    def position(self) -> str:
        if self.sd_count < self.lower:
            return "below"
        return "above" if self.sd_count > self.upper else "inside"

    def to_json(self) -> dict:
        return {
            "X": self.X,
            "sd_count": self.sd_count,
            "lower": self.lower,
            "upper": self.upper,
            "c1": self.c1,
            "c2": self.c2,
            "C2": self.C2,
            "Cm2": self.Cm2,
            "normalized": self.normalized,
            "position": self.position,
            "notes": self.notes,
        }


def _check_X(X: int) -> None:
    if X < 2:
        raise ValueError(f"X must be at least 2, got {X}")
    if X > MAX_X:
        raise ValueError(f"X={X} exceeds the desk-scale cap {MAX_X}")


def _special_power(odd_primes: tuple[int, ...]) -> int:
    total = fk_special_sum(odd_primes)
    q, r = divmod(total, 1 << len(odd_primes))
    if r or q < 1 or q & (q - 1):
        raise FourRankConsistencyError(f"primes {odd_primes}: sum {total} is not 2^omega times a power of 2")
    return q


def _restricted(seg):
    # n = 2d in D_2 with d = 3 mod 4, i.e. n = 6 mod 8; row[0] is the prime 2
    d2, _ = _family_masks(seg)
    mask = d2 & (seg.values % 8 == 6)
    for row, w in zip(seg.factors[mask].tolist(), seg.omega[mask].tolist()):
        yield tuple(row[1:w])


def _survey_block(args) -> tuple[int, Counter]:
    lo, hi = args
    hist: Counter = Counter()
    count = 0
    for seg in squarefree_segments(lo, hi, hi - lo + 1):
        for odd in _restricted(seg):
            hist[_special_power(odd).bit_length() - 1] += 1
            count += 1
    return count, hist


@dataclass
class RankSurvey:
    """Per-rank counts over {2d in D_2 : d <= X/2, d = 3 mod 4}."""

    X: int
    A_value: int
    histogram: dict[int, int]
    power_sums: dict[int, int]


def rank_survey(X: int, jobs: int = 1, kmax: int = 4) -> RankSurvey:
    """One pass over the restricted family, recording the 4-rank histogram.

    ``power_sums[k]`` is read off the histogram; :func:`moment_survey` is the
    direct term-by-term summation.
    """
    _check_X(X)
    total = 0
    hist: Counter = Counter()
    for c, h in map_blocks(_survey_block, split_range(2, X, SURVEY_BLOCK), jobs):
        total += c
        hist.update(h)
    powers = {k: sum(cnt * (1 << (k * r)) for r, cnt in hist.items()) for k in range(kmax + 1)}
    return RankSurvey(X, total, dict(sorted(hist.items())), powers)


def _moment_block(args) -> tuple[int, int]:
    lo, hi, k = args
    S = A = 0
    for seg in squarefree_segments(lo, hi, hi - lo + 1):
        for odd in _restricted(seg):
            S += _special_power(odd) ** k
            A += 1
    return S, A


def moment_survey(X: int, k: int, jobs: int = 1) -> MomentReport:
    """S(X, k; 3, 4) by direct summation of 2^(k rk4) over the restricted family."""
    _check_X(X)
    if not 0 <= k <= 4:
        raise ValueError(f"k must be in 0..4, got {k}")
    S = A = 0
    for s, a in map_blocks(_moment_block, [(lo, hi, k) for lo, hi in split_range(2, X, SURVEY_BLOCK)], jobs):
        S += s
        A += a
    return MomentReport(X, k, S, A, Fraction(S, A) if A else Fraction(0), count_subspaces(k))


def moment_from_survey(survey: RankSurvey, k: int) -> MomentReport:
    A = survey.A_value
    S = survey.power_sums[k]
    return MomentReport(survey.X, k, S, A, Fraction(S, A) if A else Fraction(0), count_subspaces(k))


def rank_distribution(X: int, r_max: int = 20, jobs: int = 1, survey: RankSurvey | None = None) -> DistributionReport:
    """Histogram of 4-ranks over the restricted family with the limiting law attached."""
    if survey is None:
        survey = rank_survey(X, jobs)
    elif survey.X != X:
        raise ValueError("survey was run for a different X")
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    top = max([r_max, *survey.histogram])
    predicted = {r: predicted_rank_probability(r) for r in range(top + 1)}
    return DistributionReport(X, dict(survey.histogram), predicted, survey.A_value)


def _euler_constant(tag: FamilyTag, prime_bound: int) -> float:
    # prod_{p in P}(1 + p^-s) = (1 + 2^-s) prod_{chi(p)=1} (1 - p^-2s)/(1 - p^-s), and
    # prod_{chi(p)=1} (1 - p^-s)^-2 = zeta(s)(1 - 2^-s) L(s, chi) prod_{chi(p)=-1} (1 - p^-2s);
    # (s - 1) zeta(s) -> 1 gives the limit in closed form at s = 1.
    chi = [0, 1, 0, -1, 0, -1, 0, 1] if tag is FamilyTag.D2 else [0, 1, 0, 1, 0, -1, 0, -1]
    L1 = float(mpmath.dirichlet(1, chi))
    p = small_primes(prime_bound)
    p = p[p > 2].astype(np.float64)
    split = np.array([chi[int(q) % 8] == 1 for q in p])
    log_split = np.log1p(-(p[split] ** -2.0)).sum()
    log_inert = np.log1p(-(p[~split] ** -2.0)).sum()
    inner = 0.5 * L1 * math.exp(log_inert)
    return 1.5 * math.exp(log_split) * math.sqrt(inner) / math.sqrt(math.pi)


def _invert_count(n: int, X: int) -> float:
    # |D(X)| ~ (2C/3) X / sqrt(log X)
    return n * 3 * math.sqrt(math.log(X)) / (2 * X)


def estimate_constant(family: FamilyTag, X: int, method: ConstantMethod = ConstantMethod.COUNT_INVERSION, jobs: int = 1) -> ConstantEstimate:
    """Estimate C_2 or C_-2.

    COUNT_INVERSION inverts |D(X)| ~ (2C/3) X / sqrt(log X). EULER_PRODUCT
    evaluates the defining limit with the Euler product truncated at primes
    <= X and L(1, chi) computed numerically.
    """
    if family not in (FamilyTag.D2, FamilyTag.DM2):
        raise ValueError("constants exist only for D2 and DM2")
    if method is ConstantMethod.COUNT_INVERSION:
        if X < MIN_X_COUNT_INVERSION:
            raise ValueError(f"COUNT_INVERSION needs X >= {MIN_X_COUNT_INVERSION}")
        _check_X(X)
        n = census(X, {family}, jobs=jobs, keep_records=False).counts[family]
        est = _invert_count(n, X)
    else:
        if X < 3:
            raise ValueError("EULER_PRODUCT needs a prime bound >= 3")
        est = _euler_constant(family, X)
    return ConstantEstimate(family, X, est, method)


def band_constants(C2: float, Cm2: float) -> tuple[float, float]:
    return C2 / 6 * eta(INFINITY), (2 * C2 + 2 * Cm2) / 3


def sd_band_check(X: int, jobs: int = 1) -> TheoremBandReport:
    """Count SD(X) and place it against c1 X/sqrt(log X) .. c2 X/sqrt(log X).

    The constants are COUNT_INVERSION estimates at the same X.
    """
    _check_X(X)
    if X < MIN_X_COUNT_INVERSION:
        raise ValueError(f"band check needs X >= {MIN_X_COUNT_INVERSION}")
    res = census(X, {FamilyTag.D2, FamilyTag.DM2, FamilyTag.SD}, jobs=jobs, keep_records=False)
    C2 = _invert_count(res.counts[FamilyTag.D2], X)
    Cm2 = _invert_count(res.counts[FamilyTag.DM2], X)
    c1, c2 = band_constants(C2, Cm2)
    unit = X / math.sqrt(math.log(X))
    return TheoremBandReport(X, res.counts[FamilyTag.SD], c1, c2, c1 * unit, c2 * unit, C2, Cm2, [EXCLUSION_NOTE])
