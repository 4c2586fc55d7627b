"""Continued fractions of quadratic surds, small norm equations and the Hasse
unit index of Q(sqrt(d), sqrt(-1))."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factor, jacobi


class TorsionExceptionError(ValueError):
    """d in {2, 3}: the biquadratic field has more than four roots of unity."""


@dataclass(frozen=True)
class ContinuedFraction:
    """Periodic expansion sqrt(D) = [a0; a1, ..., a_l] and one period of convergents.

    ``norm_seq[i] = p_seq[i]**2 - D*q_seq[i]**2`` for ``i = 0 .. l-1``; the
    last entry is ``(-1)**l``.
    """

    D: int
    a0: int
    period: tuple[int, ...]
    p_seq: tuple[int, ...]
    q_seq: tuple[int, ...]
    norm_seq: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.period)


@dataclass(frozen=True)
class NormEquationSolution:
    D: int
    N: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != self.N:
            raise ValueError(f"({self.x}, {self.y}) does not solve x^2 - {self.D}y^2 = {self.N}")


def _check_nonsquare(D: int) -> int:
    if D < 2:
        raise ValueError(f"D must be at least 2, got {D}")
    r = math.isqrt(D)
    if r * r == D:
        raise ValueError(f"D={D} is a perfect square")
    return r


def _partial_quotients(D: int, a0: int):
    # yields (a_i, Q_{i+1}) for i = 1, 2, ...; p_{i-1}^2 - D q_{i-1}^2 = (-1)^i Q_i
    P, Q = 0, 1
    a = a0
    while True:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        yield a, Q


def cf_sqrt(D: int) -> ContinuedFraction:
    a0 = _check_nonsquare(D)
    period = []
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    ps, qs, norms = [p], [q], []
    for a, Q in _partial_quotients(D, a0):
        norms.append(-Q if len(norms) % 2 == 0 else Q)
        period.append(a)
        if a == 2 * a0:
            break
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        ps.append(p)
        qs.append(q)
    return ContinuedFraction(D, a0, tuple(period), tuple(ps), tuple(qs), tuple(norms))


def _convergent(D: int, a0: int, index: int) -> tuple[int, int]:
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    if index == 0:
        return p, q
    for i, (a, _) in enumerate(_partial_quotients(D, a0), start=1):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if i == index:
            return p, q
    raise AssertionError("unreachable")


def locally_solvable(D: int, N: int) -> bool:
    """Necessary condition: N is a square modulo every odd prime p | D, p not dividing N."""
    for p in factor(D).primes:
        if p != 2 and N % p and jacobi(N, p) != 1:
            return False
    return True


def brute_force_norm_search(D: int, N: int, y_bound: int) -> NormEquationSolution | None:
    """Smallest-y solution of x^2 - D y^2 = N with 0 <= y <= y_bound, by direct scan."""
    for y in range(y_bound + 1):
        t = N + D * y * y
        if t < 0:
            continue
        x = math.isqrt(t)
        if x * x == t:
            return NormEquationSolution(D, N, x, y)
    return None


def solve_norm_equation(D: int, N: int, local_check: bool = True) -> NormEquationSolution | None:
    """Solve x^2 - D y^2 = N for |N| < sqrt(D) or N = +-1; returns the minimal-y solution.

    Every primitive solution with |N| < sqrt(D) is a convergent of sqrt(D), so
    two periods of the norm sequence decide solvability. For D in {2, 3} and
    |N| = 2 a bounded exhaustive search is used instead.
    """
    a0 = _check_nonsquare(D)
    if N == 0:
        raise ValueError("N must be nonzero")
    if N == 1:
        return NormEquationSolution(D, 1, 1, 0)
    if N * N >= D:
        if D in (2, 3) and abs(N) == 2:
            return brute_force_norm_search(D, N, D * abs(N))
        raise ValueError(f"|N|={abs(N)} is outside the supported range for D={D}")
    # with |N| < sqrt(D), N = g^2 M forces gcd(x, y) = g; only squarefree-free cases arise here
    if any(N % (g * g) == 0 for g in range(2, math.isqrt(abs(N)) + 1)):
        raise ValueError(f"N={N} has a square factor; only square-free N are supported")
    if local_check and not locally_solvable(D, N):
        return None
    length = None
    for i, (a, Q) in enumerate(_partial_quotients(D, a0)):
        # norm of convergent i is (-1)^(i+1) Q_{i+1}
        if (Q if i % 2 else -Q) == N:
            x, y = _convergent(D, a0, i)
            return NormEquationSolution(D, N, x, y)
        if length is None and a == 2 * a0:
            length = i + 1
        if length is not None and i + 1 >= 2 * length:
            return None


def pell_fundamental_solution(D: int) -> NormEquationSolution:
    """Least positive solution of x^2 - D y^2 = 1."""
    cf = cf_sqrt(D)
    l = cf.length
    x, y = _convergent(D, cf.a0, l - 1 if l % 2 == 0 else 2 * l - 1)
    return NormEquationSolution(D, 1, x, y)


def unit_index_witness(d: int, local_check: bool = True) -> NormEquationSolution | None:
    """A solution of x^2 - d y^2 = 2 or -2 certifying Q(L) = 2, if one exists."""
    f = factor(d)
    if d < 2 or not f.is_squarefree:
        raise ValueError(f"d must be a squarefree integer > 1, got {d}")
    if d in (2, 3):
        raise TorsionExceptionError(
            f"d={d}: Q(sqrt({d}), i) has more than 4 roots of unity; the index criterion does not apply"
        )
    if d % 4 == 1:
        return None
    sols = [s for s in (solve_norm_equation(d, 2, local_check), solve_norm_equation(d, -2, local_check)) if s]
    return min(sols, key=lambda s: s.y) if sols else None


def hasse_unit_index(d: int, local_check: bool = True) -> int:
    """Q(L) for L = Q(sqrt(d), sqrt(-1)), d squarefree and d > 3."""
    return 2 if unit_index_witness(d, local_check) else 1
