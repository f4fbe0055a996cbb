import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from instances import small_quotient_pairs  # noqa: E402

from brauertriples.builtins import builtin  # noqa: E402
from brauertriples.clifford import (PreconditionError, clifford_correspondent, clifford_inverse,  # noqa: E402
                                    extend_character, is_stable, linear_brauer_characters, linear_difference,
                                    make_triple, restrict_brauer, stabilizer_of_character, working_field)
from brauertriples.gf import ell_part  # noqa: E402
from brauertriples.grp import quotient  # noqa: E402
from brauertriples.modrep import irr_brauer  # noqa: E402


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(small_quotient_pairs()), st.sampled_from([2, 3, 5, 7]), st.data())
def test_extension_restricts_to_theta(pair, ell, data):
    _, G, N = pair
    stable = [t for t in irr_brauer(N, ell) if is_stable(t, G)]
    theta = data.draw(st.sampled_from(stable))
    Q, _ = quotient(G, N)
    if Q.order == 4 and Q.exponent == 2:
        # a Klein four quotient is outside the extension theorem used here
        with pytest.raises(PreconditionError):
            extend_character(theta, G)
        return
    chi, R = extend_character(theta, G)
    assert chi.degree == theta.degree
    assert restrict_brauer(chi, N).values == theta.values


@pytest.mark.parametrize("idx", range(len(small_quotient_pairs())))
def test_linear_characters_of_quotient(idx):
    _, G, N = small_quotient_pairs()[idx]
    for ell in (2, 3):
        F = working_field(G, ell)
        lins = linear_brauer_characters(G, N, F)
        Q, _ = quotient(G, N)
        Qab, _ = quotient(Q, Q.derived_subgroup())
        assert len(lins) == ell_part(Qab.order, ell)
        assert all(lam.verify() for lam in lins)
        assert len({tuple(lam.table) for lam in lins}) == len(lins)


def test_unstable_theta_is_routed_to_its_stabilizer():
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    moved = [t for t in irr_brauer(N, 7) if not is_stable(t, G)]
    assert sorted(t.degree for t in moved) == [1, 1, 2, 2]
    T = make_triple(G, N, moved[0])
    assert T.replaced_from is G and T.G.order == 24 and T.check()


def test_extension_requires_stability():
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    theta = next(t for t in irr_brauer(N, 7) if not is_stable(t, G))
    with pytest.raises(PreconditionError):
        extend_character(theta, G)


def test_clifford_correspondence_round_trip():
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    ibr_N, ibr_G = irr_brauer(N, 5), irr_brauer(G, 5)
    for theta in ibr_N:
        if is_stable(theta, G):
            continue
        Gt = stabilizer_of_character(G, theta)
        chi = next(c for c in ibr_G if c.degree == 2 * theta.degree and
                   any(restrict_brauer(c, N).values == (theta + t2).values for t2 in ibr_N))
        psi = clifford_inverse(chi, Gt, theta)
        assert clifford_correspondent(psi, G, theta, ibr_G=ibr_G, ibr_N=ibr_N) == chi


def test_linear_difference_statuses():
    S4 = builtin("S4").group
    V4 = S4.subgroup_from_members([g for g in range(S4.order) if S4.element_orders[g] in (1, 2)
                                   and S4.class_of[g] != S4.class_of[1] or g == 0])
    ibr = irr_brauer(S4, 5)
    deg = {b.degree: b for b in ibr}
    res = linear_difference(deg[2], deg[3], V4)
    assert res.status == "hypothesis-failure" and not res.lambdas
    A4 = S4.derived_subgroup()
    ones = [b for b in ibr if b.degree == 1]
    res = linear_difference(ones[0], ones[1], A4)
    assert res.status == "found" and len(res.lambdas) == 1
    assert np.any(res.lambdas[0].table != 1)
