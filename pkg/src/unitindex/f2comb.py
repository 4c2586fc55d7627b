"""Combinatorics of F_2^{2k} index vectors behind the moment main term.

A vector (u_1, ..., u_{2k}) is stored as an int whose bit i-1 holds u_i, so
block j (coordinates u_{2j+1}, u_{2j+2}) occupies bits 2j and 2j+1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np


def _even_mask(k: int) -> int:
    return int("01" * k, 2) if k else 0


@dataclass(frozen=True, order=True)
class F2Vec:
    k: int
    bits: int

    def __post_init__(self):
        if self.k < 1 or not 0 <= self.bits < 1 << (2 * self.k):
            raise ValueError(f"bits {self.bits:#x} do not fit F_2^{2 * self.k}")

    @classmethod
    def from_coords(cls, coords) -> "F2Vec":
        coords = list(coords)
        if len(coords) % 2:
            raise ValueError("need an even number of coordinates")
        return cls(len(coords) // 2, sum((c & 1) << i for i, c in enumerate(coords)))

    def coords(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(2 * self.k))

    def __add__(self, other: "F2Vec") -> "F2Vec":
        _same_k(self, other)
        return F2Vec(self.k, self.bits ^ other.bits)


def _same_k(u: F2Vec, v: F2Vec) -> None:
    if u.k != v.k:
        raise ValueError(f"mismatched dimensions: k={u.k} and k={v.k}")


# Bit-level kernels; every public function below delegates to these.


def _lam(u: int, k: int) -> int:
    return (u & (u >> 1) & _even_mask(k)).bit_count() & 1


def _phi(u: int, v: int, k: int) -> int:
    # block j: (u_{2j+1} + v_{2j+1}) (u_{2j+1} + v_{2j+2})
    e = _even_mask(k)
    return ((u ^ v) & (u ^ (v >> 1)) & e).bit_count() & 1


def _linked(w: int, k: int) -> int:
    # phi(u, v) + phi(v, u) depends only on w = u + v
    return (w & ~(w >> 1) & _even_mask(k)).bit_count() & 1


def lambda_k(u: F2Vec) -> int:
    return _lam(u.bits, u.k)


def phi_k(u: F2Vec, v: F2Vec) -> int:
    _same_k(u, v)
    return _phi(u.bits, v.bits, u.k)


def unlinked(u: F2Vec, v: F2Vec) -> bool:
    _same_k(u, v)
    return _phi(u.bits, v.bits, u.k) == _phi(v.bits, u.bits, u.k)


@dataclass(frozen=True)
class UnlinkedFamily:
    k: int
    members: tuple[int, ...]  # sorted bit masks

    def vectors(self) -> list[F2Vec]:
        return [F2Vec(self.k, b) for b in self.members]

    def __len__(self) -> int:
        return len(self.members)


BRUTE_FORCE_MAX_K = 3
COSET_MAX_K = 4


def _bron_kerbosch(adj: list[int], n: int) -> list[int]:
    # maximal cliques as bitsets, Tomita pivoting
    out = []

    def expand(R: int, P: int, X: int) -> None:
        if not P and not X:
            out.append(R)
            return
        pivot = max(_bits(P | X), key=lambda u: (P & adj[u]).bit_count())
        cand = P & ~adj[pivot]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            expand(R | (1 << v), P & adj[v], X & adj[v])
            P &= ~(1 << v)
            X |= 1 << v

    expand(0, (1 << n) - 1, 0)
    return out


def _bits(x: int) -> list[int]:
    out = []
    while x:
        out.append((x & -x).bit_length() - 1)
        x &= x - 1
    return out


def good_subspaces(k: int) -> list[tuple[int, ...]]:
    """k-dimensional subspaces of F_2^{2k} whose elements are pairwise unlinked.

    Pairwise unlinked inside a subspace means every element w has
    phi(w, 0) = phi(0, w), so the search only extends by such vectors.
    """
    n = 2 * k
    ok = [w for w in range(1, 1 << n) if not _linked(w, k)]
    found: set[tuple[int, ...]] = set()

    def extend(span: list[int], dim: int, start: int) -> None:
        if dim == k:
            found.add(tuple(sorted(span)))
            return
        members = set(span)
        for i in range(start, len(ok)):
            v = ok[i]
            if v in members:
                continue
            if all(not _linked(v ^ s, k) for s in span):
                # only extend by the smallest new vector of each larger span to limit repeats
                new = span + [s ^ v for s in span]
                if min(x for x in new if x not in members) == v:
                    extend(new, dim + 1, i + 1)

    extend([0], 0, 0)
    return sorted(found)


def maximal_unlinked_subsets(k: int, mode: str = "brute") -> list[UnlinkedFamily]:
    """All maximal pairwise-unlinked subsets of F_2^{2k}, sorted by members.

    ``mode="brute"`` runs a clique search on the unlinked graph (k <= 3);
    ``mode="coset"`` takes every coset c + U0 of every good subspace U0 (k <= 4).
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = 1 << (2 * k)
    if mode == "brute":
        if k > BRUTE_FORCE_MAX_K:
            raise ValueError(f"brute-force mode supports k <= {BRUTE_FORCE_MAX_K}")
        adj = [sum(1 << v for v in range(n) if v != u and not _linked(u ^ v, k)) for u in range(n)]
        fams = {tuple(_bits(c)) for c in _bron_kerbosch(adj, n)}
    elif mode == "coset":
        if k > COSET_MAX_K:
            raise ValueError(f"coset mode supports k <= {COSET_MAX_K}")
        fams = {tuple(sorted(c ^ u for u in U0)) for U0 in good_subspaces(k) for c in range(n)}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return [UnlinkedFamily(k, m) for m in sorted(fams)]


def _subset_bits(size: int) -> np.ndarray:
    masks = np.arange(1 << size, dtype=np.int64)[:, None]
    return (masks >> np.arange(size, dtype=np.int64)[None, :]) & 1


def gamma_plus(U: UnlinkedFamily, nu: int) -> int:
    """Sum over S in U with |S| = nu mod 2 of (-1)^(sum lambda(u) + sum_{pairs in S} phi(u, v))."""
    k, m = U.k, U.members
    B = _subset_bits(len(m))
    lam = np.array([_lam(u, k) for u in m], dtype=np.int64)
    P = np.zeros((len(m), len(m)), dtype=np.int64)
    for i, j in itertools.combinations(range(len(m)), 2):
        P[i, j] = _phi(m[i], m[j], k)
    e = B @ lam + ((B @ P) * B).sum(axis=1)
    parity = B.sum(axis=1) & 1
    signs = 1 - 2 * (e & 1)
    return int(signs[parity == (nu & 1)].sum())


def gamma_plus_residue_form(U: UnlinkedFamily) -> int:
    """gamma^+(U, 1) as a sum over residues h_u in {1, 3} mod 4 with prod h_u = 3 mod 4."""
    k, m = U.k, U.members
    total = 0
    for h in itertools.product((1, 3), repeat=len(m)):
        if math.prod(h) % 4 != 3:
            continue
        term = 1
        for u, hu in zip(m, h):
            term *= (-1) ** (_lam(u, k) * ((hu - 1) // 2))
        for (u, hu), (v, hv) in itertools.combinations(zip(m, h), 2):
            term *= (-1) ** (_phi(u, v, k) * ((hu - 1) // 2) * ((hv - 1) // 2))
        total += term
    return total


def gaussian_binomial(m: int, j: int, q: int = 2) -> int:
    if not 0 <= j <= m:
        return 0
    num = den = 1
    for i in range(j):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(m: int) -> int:
    """Number of subspaces of F_2^m, all dimensions."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return sum(gaussian_binomial(m, j) for j in range(m + 1))


LAMBDA_SUM_MAX_K = 12


def lambda_stratified_counts(k: int) -> list[int]:
    """counts[m] = #{sigma in F_2^{2k} with exactly m blocks equal to (1, 1)}, by enumeration."""
    if not 1 <= k <= LAMBDA_SUM_MAX_K:
        raise ValueError(f"k must be in 1..{LAMBDA_SUM_MAX_K}")
    sigma = np.arange(1 << (2 * k), dtype=np.uint32)
    m = np.bitwise_count(sigma & (sigma >> 1) & np.uint32(_even_mask(k)))
    return np.bincount(m, minlength=k + 1).tolist()


def lambda_character_sum(k: int) -> int:
    """Sum over all sigma in F_2^{2k} of (-1)^lambda_k(sigma)."""
    return sum(c if m % 2 == 0 else -c for m, c in enumerate(lambda_stratified_counts(k)))


@dataclass
class MuFiberReport:
    k: int
    coset_rep: int
    expected_fiber: int
    fiber_sizes: tuple[int, ...]
    surjective: bool
    odd_image_is_coset: bool

    @property
    def passed(self) -> bool:
        return self.surjective and self.odd_image_is_coset and set(self.fiber_sizes) == {self.expected_fiber}


def mu_fiber_check(k: int, U0, c) -> MuFiberReport:
    """Check the subset-sum map on P(c + U0).

    S maps to (|S| mod 2, sum of S). Even subsets land in U0 and odd ones in
    c + U0, so the codomain is the tagged union U0 (+) (c + U0) of size
    2^(k+1) even when c lies in U0.
    """
    U0 = tuple(sorted(getattr(u, "bits", u) for u in (U0.members if isinstance(U0, UnlinkedFamily) else U0)))
    c = getattr(c, "bits", c)
    if len(U0) != 1 << k or 0 not in U0 or len(set(U0)) != len(U0):
        raise ValueError("U0 must be a k-dimensional subspace")
    span = set(U0)
    if any((a ^ b) not in span for a in U0 for b in U0):
        raise ValueError("U0 is not closed under addition")
    if any(_linked(w, k) for w in U0):
        raise ValueError("U0 is not good: it contains linked pairs")
    if k > COSET_MAX_K:
        raise ValueError(f"k must be <= {COSET_MAX_K}")
    coset = [c ^ u for u in U0]
    counts: dict[tuple[int, int], int] = {}
    odd_image = set()
    for mask in range(1 << len(coset)):
        s, size = 0, 0
        for i, v in enumerate(coset):
            if mask >> i & 1:
                s ^= v
                size += 1
        key = (size & 1, s)
        counts[key] = counts.get(key, 0) + 1
        if size & 1:
            odd_image.add(s)
    codomain = {(0, u) for u in U0} | {(1, v) for v in coset}
    return MuFiberReport(
        k=k,
        coset_rep=c,
        expected_fiber=1 << ((1 << k) - k - 1),
        fiber_sizes=tuple(sorted(set(counts.values()))),
        surjective=set(counts) == codomain,
        odd_image_is_coset=odd_image == set(coset),
    )


def subspace_contribution(k: int, U0) -> int:
    """Sum of gamma^+(c + U0, 1) over the distinct cosets of U0.

    Unlinked subspaces contribute either 0 or 2^(2^k - 1); exactly N(k, 2)
    of them contribute for k <= 3.
    """
    cosets = {tuple(sorted(c ^ u for u in U0)) for c in range(1 << (2 * k))}
    return sum(gamma_plus(UnlinkedFamily(k, m), 1) for m in cosets)


@dataclass
class IdentityCheck:
    name: str
    k: int
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def verify_identities(kmax: int) -> list[IdentityCheck]:
    """Exact checks of the main-term identities and supporting counts for k = 1..kmax.

    Families come from brute-force clique search for k <= 2 and from cosets of
    good subspaces beyond that.
    """
    checks = []
    for k in range(1, kmax + 1):
        fams = maximal_unlinked_subsets(k, "brute" if k <= 2 else "coset")
        g1 = sum(gamma_plus(U, 1) for U in fams)
        g0 = sum(gamma_plus(U, 0) for U in fams)
        scale = 1 << ((1 << k) - 1)
        checks.append(IdentityCheck("sum_gamma_plus_odd", k, g1, scale * count_subspaces(k)))
        checks.append(IdentityCheck("sum_gamma_plus_even", k, g0, scale * (count_subspaces(k + 1) - count_subspaces(k))))
        checks.append(IdentityCheck("families_not_of_size_2^k", k, sum(len(U) != 1 << k for U in fams), 0))
        if k <= 2:
            same = fams == maximal_unlinked_subsets(k, "coset")
            checks.append(IdentityCheck("brute_force_equals_cosets", k, int(same), 1))
        contributing = sum(subspace_contribution(k, U0) != 0 for U0 in good_subspaces(k))
        checks.append(IdentityCheck("contributing_subspaces", k, contributing, count_subspaces(k)))
        if k <= LAMBDA_SUM_MAX_K:
            checks.append(IdentityCheck("lambda_character_sum", k, lambda_character_sum(k), 1 << k))
        if k <= BRUTE_FORCE_MAX_K:
            reports = [mu_fiber_check(k, U0, c) for U0 in good_subspaces(k) for c in range(1 << (2 * k))]
            checks.append(IdentityCheck("mu_fiber_uniform", k, sum(not r.passed for r in reports), 0))
    return checks
