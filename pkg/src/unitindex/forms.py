"""Narrow class groups of real quadratic orders via indefinite binary quadratic forms.

Forms are plain ``(a, b, c)`` tuples meaning a x^2 + b xy + c y^2. Proper
equivalence classes are the cycles of reduced forms under the rho operator;
the group law is Gauss composition followed by reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

MAX_DISCRIMINANT = 10**6

Form = tuple[int, int, int]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with a x + b y = g >= 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def is_reduced(f: Form, D: int) -> bool:
    """|sqrt(D) - 2|a|| < b < sqrt(D), tested in exact integer arithmetic."""
    a, b, _ = f
    if b <= 0 or b * b >= D:
        return False
    t = 2 * abs(a) - b
    return (t < 0 or t * t < D) and (2 * abs(a) + b) ** 2 > D


def rho(f: Form, D: int) -> Form:
    """One step of indefinite reduction: (a, b, c) -> (c, b', (b'^2 - D)/4c)."""
    a, b, c = f
    r = math.isqrt(D)
    m = 2 * abs(c)
    if abs(c) <= r:
        # b' = -b mod 2|c| with sqrt(D) - 2|c| < b' < sqrt(D)
        bp = r - ((r + b) % m)
    else:
        # -|c| < b' <= |c|
        bp = (-b) % m
        if bp > abs(c):
            bp -= m
    return c, bp, (bp * bp - D) // (4 * c)


def reduce_form(f: Form, D: int) -> Form:
    while not is_reduced(f, D):
        f = rho(f, D)
    return f


def compose(f: Form, g: Form, D: int) -> Form:
    """Gauss composition of two primitive forms of discriminant D (not reduced)."""
    a1, b1, _ = f
    a2, b2, c2 = g
    s = (b1 + b2) // 2
    g1, u1, v1 = _xgcd(a1, a2)
    e, u2, v2 = _xgcd(g1, s)
    # u2*(u1*a1 + v1*a2) + v2*s = e
    p, q, r = u2 * u1, u2 * v1, v2
    a3 = a1 * a2 // (e * e)
    b3 = (p * a1 * b2 + q * a2 * b1 + r * (b1 * b2 + D) // 2) // e
    b3 %= 2 * abs(a3)
    c3 = (b3 * b3 - D) // (4 * a3)
    return a3, b3, c3


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D, sorted."""
    _check_discriminant(D)
    out = []
    r = math.isqrt(D)
    for b in range(D % 2 or 2, r + 1, 2):
        if b * b >= D:
            break
        ac = (D - b * b) // 4  # equals -a*c
        for a in range(1, r + 1):
            if ac % a:
                continue
            c = ac // a
            for f in ((a, b, -c), (-a, b, c)):
                if math.gcd(math.gcd(f[0], f[1]), f[2]) == 1 and is_reduced(f, D):
                    out.append(f)
    return sorted(out)


def _check_discriminant(D: int) -> None:
    if D <= 0 or D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
        raise ValueError(f"{D} is not a positive non-square discriminant")


def _p_part(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass
class IndefiniteFormClassGroup:
    """Narrow class group of discriminant D, with classes as rho-cycles.

    ``structure`` lists invariant factors d_1 | d_2 | ... (all > 1); the
    trivial group has an empty structure.
    """

    discriminant: int
    classes: list[tuple[Form, ...]]
    structure: tuple[int, ...]

    @property
    def class_number(self) -> int:
        return len(self.classes)

    @cached_property
    def _index(self) -> dict[Form, int]:
        return {f: i for i, cyc in enumerate(self.classes) for f in cyc}

    def class_of(self, f: Form) -> int:
        return self._index[reduce_form(f, self.discriminant)]

    def multiply(self, i: int, j: int) -> int:
        D = self.discriminant
        return self.class_of(compose(self.classes[i][0], self.classes[j][0], D))

    @property
    def identity(self) -> int:
        D = self.discriminant
        b = D % 2
        return self.class_of((1, b, (b * b - D) // 4))

    def four_rank(self) -> int:
        return sum(1 for e in self.structure if e % 4 == 0)


def _cycles(forms: list[Form], D: int) -> list[tuple[Form, ...]]:
    seen: set[Form] = set()
    cycles = []
    for f in forms:
        if f in seen:
            continue
        cyc = [f]
        g = rho(f, D)
        while g != f:
            cyc.append(g)
            g = rho(g, D)
        seen.update(cyc)
        cycles.append(tuple(cyc))
    return cycles


def _structure(orders: list[int]) -> tuple[int, ...]:
    # invariant factors from the counts |G[p^j]| of elements killed by p^j
    h = len(orders)
    primes = [p for p in range(2, h + 1) if h % p == 0 and all(p % q for q in range(2, math.isqrt(p) + 1))]
    layers: dict[int, list[int]] = {}
    for p in primes:
        sizes = []
        j = 1
        while True:
            killed = sum(1 for o in orders if (p**j) % o == 0)
            prev = sum(1 for o in orders if (p ** (j - 1)) % o == 0)
            cnt = round(math.log(killed // prev, p))
            if cnt == 0:
                break
            sizes.append(cnt)
            j += 1
        # sizes[j-1] = number of cyclic p-factors of order >= p^j
        exps = []
        for j, cnt in enumerate(sizes, start=1):
            nxt = sizes[j] if j < len(sizes) else 0
            exps += [j] * (cnt - nxt)
        layers[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in layers.values()), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(p ** e[i] for p, e in layers.items() if i < len(e)))
    return tuple(sorted(factors))


def bqf_class_group(discriminant: int, max_discriminant: int = MAX_DISCRIMINANT) -> IndefiniteFormClassGroup:
    """Cycles of reduced forms and the group structure under composition."""
    D = discriminant
    _check_discriminant(D)
    if D > max_discriminant:
        raise ValueError(f"discriminant {D} exceeds the bound {max_discriminant}")
    group = IndefiniteFormClassGroup(D, _cycles(reduced_forms(D), D), ())
    e = group.identity
    orders = []
    for i in range(group.class_number):
        x, o = i, 1
        while x != e:
            x = group.multiply(x, i)
            o += 1
        orders.append(o)
    group.structure = _structure(orders)
    return group
