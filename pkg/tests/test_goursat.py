import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauertriples.builtins import cyclic_group, symmetric_group
from brauertriples.goursat import check_corollary_s4, goursat_decompose, semidirect_witness
from brauertriples.grp import DirectProduct, ResourceError, subgroup_member_lists

S4 = symmetric_group(4)


def _product(a):
    return DirectProduct(S4, cyclic_group(a))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_decomposition_reconstructs_subgroup(a, data):
    P = _product(a)
    subs = subgroup_member_lists(P)
    U = data.draw(st.sampled_from(subs))
    tup = goursat_decompose(U, P)
    assert np.array_equal(tup.reconstruct(), np.sort(U))
    assert len(U) == tup.G2.order * tup.H1.order == tup.G1.order * tup.H2.order


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_witnesses_are_isomorphisms(data):
    P = _product(3)
    U = data.draw(st.sampled_from(subgroup_member_lists(P)))
    tup = goursat_decompose(U, P)
    w = semidirect_witness(tup)
    assert w.checked
    assert w.isomorphism.is_bijective()
    assert w.isomorphism.codomain.order == len(U)


# Every failure is a cyclic U with G1 = C4 and G2 = C2.  A cyclic group of order
# |G2||H1| with both factors of even order cannot be a semidirect product of them,
# since such a product contains two distinct subgroups of order 2.  C4 has one such
# U for each C4 < S4 (three of them) and each pair H2 <= H1 <= Ca with H1/H2 = C2
# and H1 of 2-part 2: one pair for a = 2 and a = 4, two for a = 6.
EXPECTED_FAILURES = {1: 0, 2: 3, 3: 0, 4: 3, 5: 0, 6: 6}


@pytest.mark.parametrize("a", range(1, 7))
def test_corollary_failures_are_exactly_the_cyclic_counterexamples(a):
    rep = check_corollary_s4(a)
    assert rep.subgroups == [30, 98, 70, 172, 60, 216][a - 1]
    assert len(rep.failures) == EXPECTED_FAILURES[a]
    assert not rep.v4_failures
    P = _product(a)
    subs = subgroup_member_lists(P)
    for f in rep.failures:
        members = subs[f["subgroup"]]
        assert (f["G1"], f["G2"], f["H1"] // f["H2"]) == ("C4", "C2", 2)
        assert int(P.element_orders[members].max()) == len(members)


def test_audit_is_bounded():
    with pytest.raises(ResourceError):
        check_corollary_s4(7)
