"""Exact integer arithmetic: primality, factorization, squarefree sieving and
quadratic residue symbols."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

# Largest value the sieve accepts; int64 arrays stay far from overflow here.
SIEVE_LIMIT = 10**10
DEFAULT_SEGMENT = 1 << 20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its factorization into distinct primes."""

    value: int
    primes: tuple[int, ...] = ()
    exponents: tuple[int, ...] = ()

    @property
    def omega(self) -> int:
        return len(self.primes)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for e in self.exponents)

    def __int__(self) -> int:
        return self.value

    def check(self) -> None:
        """Raise ``ValueError`` if the stored factorization is inconsistent."""
        if len(self.primes) != len(self.exponents):
            raise ValueError("primes and exponents differ in length")
        if any(b <= a for a, b in zip(self.primes, self.primes[1:])):
            raise ValueError("primes not strictly increasing")
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be positive")
        if not all(is_prime(p) for p in self.primes):
            raise ValueError("non-prime entry in factorization")
        if math.prod(p**e for p, e in zip(self.primes, self.exponents)) != self.value:
            raise ValueError("factorization does not multiply out to value")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24 (covers 64 bits)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    # returns a nontrivial factor of the odd composite n
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n: int) -> FactoredInteger:
    """Factor ``n >= 1`` completely (trial division, then Pollard-Brent)."""
    if n < 1:
        raise ValueError(f"factor expects a positive integer, got {n}")
    counts: dict[int, int] = {}
    m = n
    for p in _SMALL_PRIMES:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    p = 53
    while p * p <= m and p < 1000:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
        p += 2
    stack = [m] if m > 1 else []
    rng = random.Random(n)  # deterministic per input
    while stack:
        q = stack.pop()
        if q == 1:
            continue
        if is_prime(q):
            counts[q] = counts.get(q, 0) + 1
            continue
        r = math.isqrt(q)
        if r * r == q:
            stack += [r, r]
            continue
        f = _pollard_brent(q, rng)
        stack += [f, q // f]
    primes = tuple(sorted(counts))
    return FactoredInteger(n, primes, tuple(counts[p] for p in primes))


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise ValueError(f"is_squarefree expects a positive integer, got {n}")
    return factor(n).is_squarefree


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs a positive odd modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def chi_minus1(n: int) -> int:
    """(-1)^((n-1)/2) for odd n."""
    if n % 2 == 0:
        raise ValueError(f"chi_minus1 needs an odd argument, got {n}")
    return 1 if n % 4 == 1 else -1


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass
class Segment:
    """Squarefree integers of one sieve block in array form.

    ``factors[i, :omega[i]]`` holds the primes of ``values[i]`` in ascending
    order; unused slots are zero.
    """

    values: np.ndarray
    factors: np.ndarray
    omega: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def select(self, mask: np.ndarray) -> "Segment":
        return Segment(self.values[mask], self.factors[mask], self.omega[mask])

    def records(self) -> Iterator[FactoredInteger]:
        for v, row, w in zip(self.values.tolist(), self.factors.tolist(), self.omega.tolist()):
            yield FactoredInteger(v, tuple(row[:w]), (1,) * w)


def _max_omega(n: int) -> int:
    count, prod = 0, 1
    for p in _SMALL_PRIMES:
        if prod * p > n:
            break
        prod *= p
        count += 1
    return max(count, 1)


def sieve_segment(lo: int, hi: int, base_primes: np.ndarray | None = None) -> Segment:
    """Sieve ``[lo, hi]`` and return its squarefree members with factorizations."""
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi > SIEVE_LIMIT:
        raise ValueError(f"hi={hi} exceeds the sieve limit {SIEVE_LIMIT}")
    if base_primes is None:
        base_primes = small_primes(math.isqrt(hi))
    size = hi - lo + 1
    values = np.arange(lo, hi + 1, dtype=np.int64)
    rem = values.copy()
    keep = np.ones(size, dtype=bool)
    factors = np.zeros((size, _max_omega(hi)), dtype=np.int32 if hi < 2**31 else np.int64)
    omega = np.zeros(size, dtype=np.int64)
    for p in base_primes.tolist():
        if p * p > hi:
            break
        start = (-lo) % p
        if start >= size:
            continue
        idx = np.arange(start, size, p)
        factors[idx, omega[idx]] = p
        omega[idx] += 1
        rem[idx] //= p
        sq = p * p
        start2 = (-lo) % sq
        if start2 < size:
            keep[start2::sq] = False
    big = keep & (rem > 1)
    idx = np.flatnonzero(big)
    factors[idx, omega[idx]] = rem[idx]
    omega[idx] += 1
    width = max(int(omega[keep].max()) if keep.any() else 0, 1)
    return Segment(values[keep], factors[keep, :width], omega[keep])


def squarefree_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> Iterator[Segment]:
    """Yield :class:`Segment` blocks covering ``[lo, hi]`` in ascending order."""
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi > SIEVE_LIMIT:
        raise ValueError(f"hi={hi} exceeds the sieve limit {SIEVE_LIMIT}")
    base = small_primes(math.isqrt(hi))
    start = lo
    while start <= hi:
        stop = min(start + segment_size - 1, hi)
        yield sieve_segment(start, stop, base)
        start = stop + 1


def squarefree_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> Iterator[FactoredInteger]:
    """Every squarefree n in ``[lo, hi]``, ascending, with its factorization."""
    for seg in squarefree_segments(lo, hi, segment_size):
        yield from seg.records()
