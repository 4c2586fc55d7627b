"""4-rank of the narrow class group Cl+(8d), d odd squarefree.

Two divisor-sum formulas (the general one and its simplification when every
prime of d is +-1 mod 8) are evaluated by assigning each prime of d to one of
four factors D0..D3; the form-class group in :mod:`unitindex.forms` is the
independent oracle.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import FactoredInteger, factor, jacobi
from .forms import MAX_DISCRIMINANT, bqf_class_group

MAX_OMEGA = 20
_CHUNK = 1 << 18


class Method(enum.Enum):
    FK_GENERAL = "fk"
    FK_SPECIAL = "special"
    BQF_ORACLE = "oracle"
    REDEI_OPTIONAL = "redei"


class FourRankConsistencyError(ArithmeticError):
    """The divisor sum did not come out as a positive power of two."""


@dataclass(frozen=True)
class FourRankReport:
    d: FactoredInteger
    method: Method
    power: int
    rank: int

    @property
    def discriminant(self) -> int:
        return 8 * self.d.value

    def __post_init__(self):
        if self.power != 1 << self.rank:
            raise FourRankConsistencyError(f"power {self.power} != 2^{self.rank}")


def _as_factored(d) -> FactoredInteger:
    return d if isinstance(d, FactoredInteger) else factor(d)


def _check_odd_squarefree(f: FactoredInteger) -> None:
    if f.value < 1 or f.value % 2 == 0 or not f.is_squarefree:
        raise ValueError(f"d must be odd and squarefree, got {f.value}")
    if f.omega > MAX_OMEGA:
        raise ValueError(f"omega(d) = {f.omega} exceeds {MAX_OMEGA}")


def _bit(s: int) -> int:
    return 0 if s == 1 else 1


def _symbol_tables(primes: tuple[int, ...]):
    # L[i, j] = bit of (p_i / p_j); m1[j] = bit of (-1/p_j); two[j] = bit of (2/p_j)
    w = len(primes)
    L = np.zeros((w, w), dtype=np.int64)
    for i, j in itertools.permutations(range(w), 2):
        L[i, j] = _bit(jacobi(primes[i], primes[j]))
    m1 = np.array([_bit(jacobi(-1, p)) for p in primes], dtype=np.int64)
    two = np.array([_bit(jacobi(2, p)) for p in primes], dtype=np.int64)
    return L, m1, two


@lru_cache(maxsize=None)
def _slot_powers(w: int) -> np.ndarray:
    return 2 * np.arange(w, dtype=np.int64)


def _assignments(w: int, start: int, stop: int) -> np.ndarray:
    # row t assigns prime j to slot (t >> 2j) & 3
    idx = np.arange(start, stop, dtype=np.int64)[:, None]
    return (idx >> _slot_powers(w)[None, :]) & 3


def _pair(A: np.ndarray, B: np.ndarray, L: np.ndarray) -> np.ndarray:
    # exponent bit of prod_{i in A, j in B} (p_i / p_j), per row
    return ((A @ L) * B).sum(axis=1)


def fk_general_sum(primes: tuple[int, ...]) -> int:
    """The undivided sum over d = D0 D1 D2 D3 of
    (2/D3)(D2/D0)(D1/D3)(D3/D0)(D0/D3) [(-1/D0) + (-1/D3)]."""
    w = len(primes)
    L, m1, two = _symbol_tables(primes)
    total = 0
    for start in range(0, 4**w, _CHUNK):
        S = _assignments(w, start, min(start + _CHUNK, 4**w))
        I0, I1, I2, I3 = ((S == s).astype(np.int64) for s in range(4))
        e = I3 @ two + _pair(I2, I0, L) + _pair(I1, I3, L) + _pair(I3, I0, L) + _pair(I0, I3, L)
        sign = 1 - 2 * (e & 1)
        bracket = (1 - 2 * ((I0 @ m1) & 1)) + (1 - 2 * ((I3 @ m1) & 1))
        total += int((sign * bracket).sum())
    return total


def fk_special_sum(primes: tuple[int, ...]) -> int:
    """The undivided sum over d = D0 D1 D2 D3 of (-1/D3)(D2/D0)(D1/D3)(D3/D0)(D0/D3)."""
    w = len(primes)
    L, m1, _ = _symbol_tables(primes)
    total = 0
    for start in range(0, 4**w, _CHUNK):
        S = _assignments(w, start, min(start + _CHUNK, 4**w))
        I0, I1, I2, I3 = ((S == s).astype(np.int64) for s in range(4))
        e = I3 @ m1 + _pair(I2, I0, L) + _pair(I1, I3, L) + _pair(I3, I0, L) + _pair(I0, I3, L)
        total += int((1 - 2 * (e & 1)).sum())
    return total


def _power_report(d: FactoredInteger, method: Method, total: int, denom: int) -> FourRankReport:
    q, r = divmod(total, denom)
    if r or q < 1 or q & (q - 1):
        raise FourRankConsistencyError(f"d={d.value}: sum {total} / {denom} is not a positive power of 2")
    rank = q.bit_length() - 1
    if rank > d.omega:
        raise FourRankConsistencyError(f"d={d.value}: 4-rank {rank} exceeds omega {d.omega}")
    return FourRankReport(d, method, q, rank)


def fourrank_fk(d) -> FourRankReport:
    """2^rk4 Cl+(8d) from the general divisor-sum formula."""
    f = _as_factored(d)
    _check_odd_squarefree(f)
    return _power_report(f, Method.FK_GENERAL, fk_general_sum(f.primes), 2 << f.omega)


def fourrank_fk_special(d) -> FourRankReport:
    """2^rk4 Cl+(8d) for d whose primes all satisfy (2/p) = 1."""
    f = _as_factored(d)
    _check_odd_squarefree(f)
    if any(p % 8 not in (1, 7) for p in f.primes):
        raise ValueError(f"d={f.value} has a prime factor with (2/p) = -1")
    return _power_report(f, Method.FK_SPECIAL, fk_special_sum(f.primes), 1 << f.omega)


def fourrank_oracle(d) -> FourRankReport:
    """rk4 Cl+(8d) read off the invariant factors of the form class group."""
    f = _as_factored(d)
    _check_odd_squarefree(f)
    group = bqf_class_group(8 * f.value, MAX_DISCRIMINANT)
    rank = group.four_rank()
    return FourRankReport(f, Method.BQF_ORACLE, 1 << rank, rank)


def fk_general_sum_naive(d: int) -> int:
    """Same sum as :func:`fk_general_sum`, looping over ordered divisor 4-tuples."""
    total = 0
    divs = [m for m in range(1, d + 1) if d % m == 0]
    for D0, D1, D2 in itertools.product(divs, repeat=3):
        if d % (D0 * D1 * D2):
            continue
        D3 = d // (D0 * D1 * D2)
        if D0 * D1 * D2 * D3 != d or math.gcd(D0 * D1 * D2, D3) != 1:
            continue
        term = jacobi(2, D3) * jacobi(D2, D0) * jacobi(D1, D3) * jacobi(D3, D0) * jacobi(D0, D3)
        total += term * (jacobi(-1, D0) + jacobi(-1, D3))
    return total
