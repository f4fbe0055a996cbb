import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from brauertriples.builtins import builtin
from brauertriples.chartab import character_table
from brauertriples.modrep import (bar, brauer_character, d1, decomposition_matrix, express_in_basis, index_in,
                                  irr_brauer, regular_classes, restrict_to_regular)

# standard Brauer degrees
DEGREES = {("A5", 2): [1, 2, 2, 4], ("A5", 3): [1, 3, 3, 4], ("A5", 5): [1, 3, 5],
           ("S4", 2): [1, 2], ("S4", 3): [1, 1, 3, 3], ("SL23", 2): [1, 1, 1], ("SL23", 3): [1, 2, 3],
           ("SL25", 5): [1, 2, 3, 4, 5], ("GL23", 3): [1, 1, 2, 2, 3, 3], ("Q8", 2): [1]}


@pytest.mark.parametrize("key", sorted(DEGREES))
def test_brauer_degrees(key):
    G = builtin(key[0]).group
    ibr = irr_brauer(G, key[1])
    assert sorted(b.degree for b in ibr) == DEGREES[key]
    assert len(ibr) == len(regular_classes(G, key[1]))


@pytest.mark.parametrize("key", sorted(DEGREES))
def test_affording_representations(key):
    G = builtin(key[0]).group
    for b in irr_brauer(G, key[1]):
        rep = b.rep
        F = rep.field
        for g in G.gens:
            for h in range(G.order):
                assert np.array_equal(F.matmul(rep(h), rep(g)), rep(int(G.mul(h, g))))
        assert brauer_character(rep, key[1]) == b


@pytest.mark.parametrize("key", sorted(DEGREES))
def test_decomposition_matrix_and_cartan(key):
    G, ell = builtin(key[0]).group, key[1]
    D = decomposition_matrix(G, ell)
    X = character_table(G)
    ibr = irr_brauer(G, ell)
    assert D.shape == (len(X), len(ibr))
    for chi, row in zip(X, D):
        total = None
        for coeff, phi in zip(row, ibr):
            for _ in range(int(coeff)):
                total = phi if total is None else total + phi
        assert total == restrict_to_regular(chi, ell)
        assert list(row) == d1(chi, ell, ibr)
    C = D.T @ D
    det = round(np.linalg.det(C.astype(float)))
    assert set(factorint(det)) <= {ell}
    assert np.array_equal(C, C.T)


@pytest.mark.parametrize("name,ell", [("S4", 5), ("SL23", 5), ("A5", 7), ("GL23", 7)])
def test_coprime_characteristic_is_ordinary_theory(name, ell):
    D = decomposition_matrix(builtin(name).group, ell)
    assert D.shape[0] == D.shape[1]
    assert np.array_equal(np.sort(D, axis=None), np.sort(np.eye(len(D), dtype=D.dtype), axis=None))
    assert set(D.sum(axis=0)) == {1} and set(D.sum(axis=1)) == {1}


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([("SL25", 3), ("GL23", 2), ("A5", 2)]), st.integers(0, 3))
def test_seed_independence(key, seed):
    G = builtin(key[0]).group
    a = irr_brauer(G, key[1], seed=0)
    b = irr_brauer(G, key[1], seed=seed)
    assert sorted(x.sort_key() for x in a) == sorted(x.sort_key() for x in b)


def test_bar_permutes_ibr():
    G = builtin("SL25").group
    ibr = irr_brauer(G, 3)
    images = [index_in(bar(t), ibr) for t in ibr]
    assert sorted(images) == list(range(len(ibr)))
    assert all(images[images[i]] == i for i in range(len(ibr)))


def test_express_in_basis_round_trip():
    G = builtin("A5").group
    ibr = irr_brauer(G, 2)
    phi = ibr[1] + ibr[1] + ibr[3]
    coeffs = express_in_basis(phi, ibr)
    assert coeffs[1] == 2 and coeffs[3] == 1 and sum(coeffs) == 3
