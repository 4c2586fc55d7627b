import itertools
from math import comb

import pytest

from unitindex.f2comb import (
    F2Vec,
    UnlinkedFamily,
    count_subspaces,
    gamma_plus,
    gamma_plus_residue_form,
    gaussian_binomial,
    good_subspaces,
    lambda_character_sum,
    lambda_k,
    lambda_stratified_counts,
    maximal_unlinked_subsets,
    mu_fiber_check,
    phi_k,
    subspace_contribution,
    unlinked,
    verify_identities,
)


def v(*coords):
    return F2Vec.from_coords(coords)


def naive_lambda(c):
    return sum(c[2 * j] * c[2 * j + 1] for j in range(len(c) // 2)) % 2


def naive_phi(a, b):
    return sum((a[2 * j] + b[2 * j]) * (a[2 * j] + b[2 * j + 1]) for j in range(len(a) // 2)) % 2


def all_vectors(k):
    return [F2Vec(k, b) for b in range(1 << (2 * k))]


def naive_maximal_families(k):
    vecs = [u.coords() for u in all_vectors(k)]
    n = len(vecs)
    ok = [[naive_phi(vecs[i], vecs[j]) == naive_phi(vecs[j], vecs[i]) for j in range(n)] for i in range(n)]
    cliques = []
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if all(ok[i][j] for i, j in itertools.combinations(idx, 2)):
            if all(not all(ok[x][i] for i in idx) for x in range(n) if not mask >> x & 1):
                cliques.append(tuple(idx))
    return sorted(cliques)


def naive_gamma_plus(U, nu):
    vecs = [F2Vec(U.k, b).coords() for b in U.members]
    total = 0
    for r in range(nu % 2, len(vecs) + 1, 2):
        for S in itertools.combinations(vecs, r):
            e = sum(naive_lambda(u) for u in S) + sum(naive_phi(a, b) for a, b in itertools.combinations(S, 2))
            total += (-1) ** e
    return total


def test_lambda_examples():
    assert lambda_k(v(1, 1)) == 1
    assert lambda_k(v(1, 0, 1, 1)) == 1
    assert lambda_k(F2Vec(3, 0)) == 0


def test_phi_examples():
    assert phi_k(v(0, 0), v(1, 0)) == 0
    assert phi_k(v(1, 0), v(0, 0)) == 1
    for u in all_vectors(2):
        assert phi_k(u, u) == 0


def test_unlinked_examples():
    assert unlinked(v(1, 0), v(1, 0))
    assert not unlinked(v(1, 0), v(0, 0))
    assert phi_k(v(0, 1), v(1, 1)) == 1 and phi_k(v(1, 1), v(0, 1)) == 0
    assert not unlinked(v(0, 1), v(1, 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_kernels_match_coordinates(k):
    vecs = all_vectors(k)
    for u in vecs:
        assert lambda_k(u) == naive_lambda(u.coords())
    for u, w in itertools.product(vecs, repeat=2):
        assert phi_k(u, w) == naive_phi(u.coords(), w.coords())
        assert unlinked(u, w) == unlinked(w, u)
    assert all(unlinked(u, u) for u in vecs)


def test_vector_basics():
    assert v(1, 0, 1, 1).coords() == (1, 0, 1, 1)
    assert (v(1, 0) + v(1, 1)).coords() == (0, 1)
    with pytest.raises(ValueError):
        F2Vec(1, 16)
    with pytest.raises(ValueError):
        v(1, 0) + v(1, 0, 0, 0)


@pytest.mark.parametrize("k", [1, 2])
def test_brute_force_families_match_exhaustive_search(k):
    fams = maximal_unlinked_subsets(k)
    assert [U.members for U in fams] == naive_maximal_families(k)
    assert all(len(U) == 1 << k for U in fams)
    assert fams == maximal_unlinked_subsets(k, "coset")


def test_k3_families_have_size_8_and_modes_agree():
    brute = maximal_unlinked_subsets(3)
    assert all(len(U) == 8 for U in brute)
    assert brute == maximal_unlinked_subsets(3, "coset")


@pytest.mark.parametrize("k", [1, 2])
def test_gamma_plus_matches_naive_and_residue_form(k):
    for U in maximal_unlinked_subsets(k):
        assert gamma_plus(U, 1) == naive_gamma_plus(U, 1) == gamma_plus_residue_form(U)
        assert gamma_plus(U, 0) == naive_gamma_plus(U, 0)


def test_empty_subset_term():
    U = UnlinkedFamily(1, (0,))
    assert gamma_plus(U, 0) == 1


@pytest.mark.parametrize("k,odd,even", [(1, 4, 6), (2, 40, 88), (3, 2048, 6528)])
def test_identities(k, odd, even):
    fams = maximal_unlinked_subsets(k, "brute" if k <= 2 else "coset")
    scale = 2 ** (2**k - 1)
    assert sum(gamma_plus(U, 1) for U in fams) == odd == scale * count_subspaces(k)
    assert sum(gamma_plus(U, 0) for U in fams) == even == scale * (count_subspaces(k + 1) - count_subspaces(k))


@pytest.mark.parametrize("m,n", [(0, 1), (1, 2), (2, 5), (3, 16), (4, 67), (5, 374)])
def test_count_subspaces(m, n):
    assert count_subspaces(m) == n


def test_gaussian_binomial():
    assert [gaussian_binomial(3, j) for j in range(4)] == [1, 7, 7, 1]
    assert gaussian_binomial(3, 5) == 0


def test_lambda_character_sums():
    for k in range(1, 13):
        assert lambda_character_sum(k) == 2**k
    assert lambda_stratified_counts(3) == [comb(3, m) * 3 ** (3 - m) for m in range(4)]
    with pytest.raises(ValueError):
        lambda_character_sum(13)


@pytest.mark.parametrize("k,size", [(1, 1), (2, 2), (3, 16)])
def test_mu_fibres(k, size):
    for U0 in good_subspaces(k):
        for c in range(1 << (2 * k)):
            rep = mu_fiber_check(k, U0, c)
            assert rep.passed and rep.fiber_sizes == (size,)


def test_mu_rejects_non_subspace():
    with pytest.raises(ValueError):
        mu_fiber_check(1, (0, 1), 0)


def test_good_subspaces_and_contributions():
    for k, total in ((1, 2), (2, 6), (3, 30)):
        subs = good_subspaces(k)
        assert len(subs) == total
        contributions = [subspace_contribution(k, U0) for U0 in subs]
        assert set(contributions) <= {0, 2 ** (2**k - 1)}
        assert sum(c != 0 for c in contributions) == count_subspaces(k)


def test_verify_identities_all_pass():
    checks = verify_identities(3)
    assert checks and all(c.passed for c in checks)
    assert {c.name for c in checks} >= {"sum_gamma_plus_odd", "sum_gamma_plus_even", "mu_fiber_uniform"}
