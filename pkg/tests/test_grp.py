import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brauertriples.builtins import builtin, cyclic_group, symmetric_group
from brauertriples.grp import (CosetTransversal, DirectProduct, FiniteGroup, GroupMap, ResourceError,
                               StructureError, abelian_invariants, are_isomorphic, inner_automorphism, quotient,
                               subgroup_member_lists)

# name -> (order, number of classes); standard values
KNOWN = {"S4": (24, 5), "A4": (12, 4), "A5": (60, 5), "Q8": (8, 5), "D8": (8, 5), "SL23": (24, 7),
         "GL23": (48, 8), "SL25": (120, 9), "S3": (6, 3)}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_orders_and_class_numbers(name):
    G = builtin(name).group
    assert (G.order, len(G.classes)) == KNOWN[name]
    assert sum(c.size for c in G.classes) == G.order
    assert G.chain_order() == G.order


@given(st.sampled_from(["S4", "SL23", "Q8", "GL23"]), st.data())
def test_group_axioms(name, data):
    G = builtin(name).group
    x, y, z = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, G.inv[x]) == 0 and G.mul(0, x) == x
    # conj(x, g) = g^-1 x g
    assert G.conj(x, y) == G.mul(G.mul(G.inv[y], x), y)
    assert G.power(x, G.element_orders[x]) == 0


@given(st.data())
def test_coset_transversal_decomposition(data):
    G = builtin("SL23_semi_C2").group
    N = builtin("SL23_semi_C2").subgroups["SL23"]
    N = G.subgroup_from_members(N.embedding_into(G))
    T = CosetTransversal(G, N)
    g = data.draw(st.integers(0, G.order - 1))
    emb = N.embedding_into(G)
    assert G.mul(T.rep_of(g), emb[T.n_part[g]]) == g
    assert T.reps[0] == 0 and len(T) == 2


def test_quotient_and_normality():
    S4 = symmetric_group(4)
    A4 = S4.derived_subgroup()
    Q, proj = quotient(S4, A4)
    assert A4.order == 12 and Q.order == 2
    assert proj.kernel().order == 12
    H = S4.subgroup([S4.index((1, 0, 2, 3))])
    with pytest.raises(StructureError):
        quotient(S4, H)


def test_centres_and_derived_subgroups():
    assert builtin("SL23").group.center().order == 2
    assert builtin("Q8").group.derived_subgroup().order == 2
    assert builtin("A5").group.derived_subgroup().order == 60
    assert abelian_invariants(builtin("S4").group) == (2,)


def test_isomorphism_detection():
    assert are_isomorphic(builtin("SL23").group, builtin("SL23").group)
    assert not are_isomorphic(builtin("SL23").group, builtin("S4").group)
    assert not are_isomorphic(builtin("Q8").group, builtin("D8").group)


def test_group_map_checks_homomorphism():
    C4, C2 = cyclic_group(4), cyclic_group(2)
    f = GroupMap(C4, C2, [C2.gens[0]])
    assert f.kernel().order == 2
    C3 = cyclic_group(3)
    with pytest.raises(StructureError):
        GroupMap(C4, C3, [C3.gens[0]])
    a = inner_automorphism(builtin("S4").group, 5)
    assert a.is_automorphism()


# independent subgroup-count oracle on plain permutation tuples


def _compose(p, q):
    return tuple(q[i] for i in p)


def _closure(gens, n):
    ident = tuple(range(n))
    elems, frontier = {ident}, [ident]
    while frontier:
        new = []
        for x in frontier:
            for s in gens:
                y = _compose(x, s)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def _s4_subgroups():
    # every subgroup of S4 is generated by two elements
    elems = list(itertools.permutations(range(4)))
    return {_closure([a, b], 4) for a in elems for b in elems}


def _cyclic_sections(subs):
    """Counts of pairs G2 <| G1 with G1/G2 cyclic, keyed by |G1/G2|."""
    out = {}
    for G1 in subs:
        for G2 in subs:
            if not G2 <= G1:
                continue
            if any(frozenset(_compose(_compose(tuple(np.argsort(g)), n), g) for n in G2) != G2 for g in G1):
                continue
            d = len(G1) // len(G2)
            if any(_coset_order(g, G2) == d for g in G1):
                out[d] = out.get(d, 0) + 1
    return out


def _coset_order(g, G2):
    k, x = 1, g
    while x not in G2:
        x = _compose(x, g)
        k += 1
    return k


def _expected_count(a, sections):
    # subgroups of S4 x Ca: a section G1/G2 of S4 and H2 <= H1 <= Ca with isomorphic cyclic quotients
    total = 0
    for d, c in sections.items():
        pairs = sum(1 for k in range(1, a + 1) if a % k == 0 and k % d == 0)
        total += c * pairs * _phi(d)
    return total


def _phi(d):
    return sum(1 for k in range(1, d + 1) if math.gcd(k, d) == 1)


def test_subgroup_count_oracle():
    subs = _s4_subgroups()
    assert len(subs) == 30
    sections = _cyclic_sections(subs)
    expected = [_expected_count(a, sections) for a in range(1, 7)]
    assert expected == [30, 98, 70, 172, 60, 216]
    S4 = symmetric_group(4)
    assert len(subgroup_member_lists(S4)) == 30
    for a in (2, 3, 6):
        P = DirectProduct(S4, cyclic_group(a))
        assert len(subgroup_member_lists(P)) == expected[a - 1]


def test_resource_bound(monkeypatch):
    monkeypatch.setenv("BT_MAX_ORDER", "50")
    gens = [tuple([1, 2, 3, 4, 0, 5]), tuple([1, 0, 2, 3, 4, 5])]
    with pytest.raises(ResourceError):
        FiniteGroup(6, gens)
