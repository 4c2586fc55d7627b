import itertools
import math

import pytest

from unitindex.forms import bqf_class_group, compose, is_reduced, reduce_form, reduced_forms, rho


def disc(f):
    a, b, c = f
    return b * b - 4 * a * c


@pytest.mark.parametrize("D", [8, 12, 40, 56, 60, 136, 229, 264, 316, 952])
def test_group_invariants(D):
    G = bqf_class_group(D)
    forms = [f for cyc in G.classes for f in cyc]
    assert all(disc(f) == D and is_reduced(f, D) for f in forms)
    assert len(forms) == len(set(forms)) == len(reduced_forms(D))
    assert math.prod(G.structure) == G.class_number
    assert all(b % a == 0 for a, b in zip(G.structure, G.structure[1:]))
    n = G.class_number
    e = G.identity
    for i, j in itertools.product(range(n), repeat=2):
        assert G.multiply(i, j) == G.multiply(j, i)
    for i in range(n):
        assert G.multiply(i, e) == i
        assert any(G.multiply(i, j) == e for j in range(n))
    for i, j, k in itertools.islice(itertools.product(range(n), repeat=3), 500):
        assert G.multiply(G.multiply(i, j), k) == G.multiply(i, G.multiply(j, k))


def test_small_examples():
    assert bqf_class_group(8).class_number == 1
    G56 = bqf_class_group(56)
    assert G56.class_number == len(G56.classes)
    assert G56.four_rank() == 0
    # 2-rank of Cl+(8d) is omega(d)
    G264 = bqf_class_group(264)
    assert sum(1 for e in G264.structure if e % 2 == 0) == 2
    assert bqf_class_group(229).class_number == 3
    assert bqf_class_group(316).structure == (6,)
    # Q(sqrt 34): h = 2 with a unit of norm +1, so h+ = 4, cyclic since 17 = 1 mod 4
    assert bqf_class_group(136).structure == (4,)


def test_rho_cycle_and_reduction():
    D = 952
    for f in reduced_forms(D):
        g = rho(f, D)
        assert is_reduced(g, D) and disc(g) == D
    f = (7, 28, -6)
    assert disc(f) == D
    assert is_reduced(reduce_form(f, D), D)


def test_composition_with_identity_form():
    D = 264
    one = (1, 16, 64 - 66)
    assert disc(one) == D
    G = bqf_class_group(D)
    for cyc in G.classes:
        f = cyc[0]
        assert G.class_of(compose(f, one, D)) == G.class_of(f)


def test_rejects_bad_discriminants():
    for D in (9, 5 * 5 * 4, 7, -8):
        with pytest.raises(ValueError):
            bqf_class_group(D)
    with pytest.raises(ValueError):
        bqf_class_group(8 * 200_000)
