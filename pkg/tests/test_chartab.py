import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauertriples.builtins import builtin
from brauertriples.chartab import (character_table, induce, inner_product, restrict, table_to_json,
                                   trivial_character)
from brauertriples.gf import CycloNumber

DEGREES = {"S3": [1, 1, 2], "S4": [1, 1, 2, 3, 3], "A4": [1, 1, 1, 3], "A5": [1, 3, 3, 4, 5],
           "Q8": [1, 1, 1, 1, 2], "SL23": [1, 1, 1, 2, 2, 2, 3], "GL23": [1, 1, 2, 2, 2, 3, 3, 4],
           "SL25": [1, 2, 2, 3, 3, 4, 4, 5, 6]}


@pytest.mark.parametrize("name", sorted(DEGREES))
def test_degrees(name):
    G = builtin(name).group
    assert sorted(chi.degree for chi in character_table(G)) == DEGREES[name]


@pytest.mark.parametrize("name", sorted(DEGREES))
def test_row_and_column_orthogonality(name):
    G = builtin(name).group
    X = character_table(G)
    one, zero = CycloNumber.rational(1), CycloNumber.rational(0)
    for i, a in enumerate(X):
        for j, b in enumerate(X):
            assert inner_product(a, b) == (one if i == j else zero)
    # second orthogonality, numerically
    for c in range(len(G.classes)):
        for d in range(len(G.classes)):
            s = sum(complex(chi.values[c]) * complex(chi.values[d]).conjugate() for chi in X)
            expected = G.centralizer_orders[c] if c == d else 0
            assert abs(s - expected) < 1e-8


def test_a5_irrationalities():
    X = character_table(builtin("A5").group)
    golden = (1 + 5 ** 0.5) / 2
    vals = {round(complex(v).real, 6) for chi in X if chi.degree == 3 for v in chi.values}
    assert round(golden, 6) in vals and round(1 - golden, 6) in vals


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([("S4", "derived"), ("SL23_semi_C2", "SL23"), ("GL23", "derived")]), st.data())
def test_frobenius_reciprocity(pair, data):
    inst = builtin(pair[0])
    G = inst.group
    N = G.derived_subgroup() if pair[1] == "derived" else inst.subgroups[pair[1]]
    N = G.subgroup_from_members(N.embedding_into(G))
    chi = data.draw(st.sampled_from(character_table(G)))
    theta = data.draw(st.sampled_from(character_table(N)))
    assert inner_product(induce(theta, G), chi) == inner_product(theta, restrict(chi, N))


def test_trivial_character_and_json():
    G = builtin("S4").group
    X = character_table(G)
    assert trivial_character(G) in X
    obj = table_to_json(G, X)
    assert len(obj["characters"]) == 5 and obj["order"] == 24


def test_values_are_algebraic_integers_of_bounded_size():
    G = builtin("SL25").group
    for chi in character_table(G):
        for v in chi.values:
            assert v.is_integral()
            assert abs(complex(v)) <= chi.degree + 1e-9
        assert abs(cmath.phase(complex(chi.values[0]))) < 1e-12
