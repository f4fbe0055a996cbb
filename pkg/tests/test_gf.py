import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauertriples.gf import (CycloNumber, FieldElement, InvalidOrderError, LiftConvention, conway_polynomial,
                              cyclo_sum, discrete_log, field_of, field_tower, root_order, splitting_degree)

# Frozen from the published Conway polynomial tables, constant term first.
CONWAY = {
    (2, 1): (1, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1), (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1), (3, 2): (2, 2, 1), (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1), (5, 2): (2, 4, 1), (7, 1): (4, 1), (7, 2): (3, 6, 1),
}

FIELDS = [(2, 1), (2, 3), (2, 4), (3, 2), (5, 2), (7, 1), (7, 2)]


@pytest.mark.parametrize("pd", sorted(CONWAY))
def test_conway_table(pd):
    assert conway_polynomial(*pd) == CONWAY[pd]


@st.composite
def field_triples(draw):
    p, d = draw(st.sampled_from(FIELDS))
    F = field_of(p, d)
    xs = [draw(st.integers(0, F.q - 1)) for _ in range(3)]
    return F, xs


@given(field_triples())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.exp(F.log(a)) == a


@given(field_triples())
def test_frobenius_is_additive_and_multiplicative(data):
    F, (a, b, _) = data
    fr = F.frobenius
    assert fr(F.add(a, b)) == F.add(fr(a), fr(b))
    assert fr(F.mul(a, b)) == F.mul(fr(a), fr(b))
    x = a
    for _ in range(F.d):
        x = fr(x)
    assert x == a


def test_generator_is_primitive():
    for p, d in FIELDS:
        F = field_of(p, d)
        assert root_order(F.element(F.generator)) == F.q - 1


@pytest.mark.parametrize("pd", FIELDS)
def test_matmul_matches_scalar_loop(pd):
    F = field_of(*pd)
    rng = np.random.default_rng(1)
    A = rng.integers(0, F.q, (2, 3, 4))
    B = rng.integers(0, F.q, (4, 2))
    C = F.matmul(A, B)
    for t in range(2):
        for i in range(3):
            for j in range(2):
                acc = 0
                for k in range(4):
                    acc = int(F.add(acc, F.mul(A[t, i, k], B[k, j])))
                assert C[t, i, j] == acc


def test_roots_of_unity_compatible_along_tower():
    # x^((q-1)/e) in a subfield embeds to the chosen root of the larger field
    for p, d, D in [(2, 2, 4), (3, 1, 2), (7, 1, 2), (2, 1, 3)]:
        small, big = field_of(p, d), field_of(p, D)
        for e in range(1, small.q):
            if (small.q - 1) % e == 0:
                assert big.embed(small, small.root_of_unity(e)) == big.root_of_unity(e)


def test_embedding_is_a_ring_map():
    small, big = field_of(2, 2), field_of(2, 4)
    for a in range(small.q):
        for b in range(small.q):
            assert big.embed(small, small.mul(a, b)) == big.mul(big.embed(small, a), big.embed(small, b))
            assert big.embed(small, small.add(a, b)) == big.add(big.embed(small, a), big.embed(small, b))


def test_splitting_degree_and_tower():
    assert splitting_degree(2, 15) == 4
    assert splitting_degree(3, 8) == 2
    assert splitting_degree(7, 48) == 2
    assert field_tower(5, 24).q == 25
    with pytest.raises(InvalidOrderError):
        splitting_degree(3, 6)


@given(st.sampled_from(FIELDS), st.data())
def test_discrete_log_agrees_with_tables(pd, data):
    F = field_of(*pd)
    base = F.element(F.generator)
    x = data.draw(st.integers(1, F.q - 1))
    k = discrete_log(F.element(x), base)
    assert k == int(F.log(x))


def test_field_element_json_round_trip():
    F = field_of(3, 2)
    for v in range(F.q):
        x = F.element(v)
        assert FieldElement.from_json(x.to_json()) == x


# cyclotomic numbers


@given(st.integers(1, 30), st.integers(-40, 40))
def test_zeta_power_and_complex_value(K, j):
    z = CycloNumber.zeta(K, j)
    assert z ** K == CycloNumber.rational(1, K)
    assert abs(complex(z) - cmath.exp(2j * math.pi * j / K)) < 1e-9


@given(st.integers(2, 30))
def test_sum_of_all_roots_vanishes(K):
    assert cyclo_sum([CycloNumber.zeta(K, j) for j in range(K)], K) == CycloNumber.rational(0, K)


@given(st.integers(1, 24), st.lists(st.integers(-3, 3), min_size=1, max_size=6), st.data())
def test_galois_action_is_a_ring_map(K, coeffs, data):
    x = cyclo_sum([CycloNumber.zeta(K, j) * c for j, c in enumerate(coeffs)], K)
    y = CycloNumber.zeta(K, data.draw(st.integers(0, K - 1)))
    a = data.draw(st.sampled_from([u for u in range(1, K + 1) if math.gcd(u, K) == 1]))
    assert (x * y).galois(a) == x.galois(a) * y.galois(a)
    assert (x + y).galois(a) == x.galois(a) + y.galois(a)
    assert x.conjugate() == x.galois(-1)
    assert abs(complex(x.conjugate()) - complex(x).conjugate()) < 1e-9


@settings(max_examples=50)
@given(st.sampled_from([2, 3, 5, 7]), st.data())
def test_brauer_lift_is_multiplicative_and_inverted_by_unlift(ell, data):
    conv = LiftConvention(ell)
    F = field_of(ell, 2)
    a = data.draw(st.integers(1, F.q - 1))
    b = data.draw(st.integers(1, F.q - 1))
    la, lb = conv.lift(F.element(a)), conv.lift(F.element(b))
    assert conv.lift(F.element(int(F.mul(a, b)))) == la * lb
    assert conv.unlift(F, la) == a


def test_lift_commutes_with_embedding():
    conv = LiftConvention(2)
    small, big = field_of(2, 2), field_of(2, 4)
    for a in range(1, small.q):
        assert conv.lift(small.element(a)) == conv.lift(big.element(int(big.embed(small, a))))
