import json
import math
import sys
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from instances import small_quotient_pairs  # noqa: E402

from brauertriples.builtins import builtin, d8_on_c3sq  # noqa: E402
from brauertriples.clifford import PreconditionError, is_stable, make_triple  # noqa: E402
from brauertriples.fakegal import (CandidateRecipe, FakeGaloisContext, FakeGaloisFailure, FakeGaloisMap,  # noqa: E402
                                   MApproxWitness, RecipeInapplicable, Refutation, apply_recipe,
                                   brute_force_m_approx, canonical_data, check_m_approx, cyclic_outer_shortcut,
                                   equivariance_violation, m_part, orbit_stabilizer_cyclicity, search_pool,
                                   verify_fake_galois, verify_witness)
from brauertriples.grp import StructureError  # noqa: E402
from brauertriples.modrep import bar, index_in, irr_brauer  # noqa: E402


@st.composite
def triple_pairs(draw):
    _, G, N = draw(st.sampled_from(small_quotient_pairs()))
    ell = draw(st.sampled_from([3, 5, 7]))
    stable = [t for t in irr_brauer(N, ell) if is_stable(t, G)]
    T = make_triple(G, N, draw(st.sampled_from(stable)))
    T2 = make_triple(G, N, draw(st.sampled_from(stable)))
    can = canonical_data(T, T2)
    m = draw(st.sampled_from([m for m in range(1, 2 * can.e + 1) if math.gcd(m, N.order) == 1]))
    return T, T2, can, m


@settings(max_examples=40, deadline=None)
@given(triple_pairs())
def test_verdict_depends_on_m_modulo_e(data):
    T, T2, can, m = data
    assume(math.gcd(m + can.e, T.N.order) == 1)
    for strict in (True, False):
        a = check_m_approx(T, T2, m, strict, can=can).status
        b = check_m_approx(T, T2, m + can.e, strict, can=can).status
        assert a == b


@settings(max_examples=40, deadline=None)
@given(triple_pairs())
def test_strict_implies_lenient_and_agrees_with_brute_force(data):
    T, T2, can, m = data
    strict = check_m_approx(T, T2, m, True, can=can)
    lenient = check_m_approx(T, T2, m, False, can=can)
    if strict.status == "witness":
        assert lenient.status == "witness"
    assert (strict.status == "witness") == brute_force_m_approx(T, T2, m, True, can=can)
    assert (lenient.status == "witness") == brute_force_m_approx(T, T2, m, False, can=can)


@settings(max_examples=40, deadline=None)
@given(triple_pairs())
def test_witnesses_pass_independent_verification(data):
    T, T2, can, m = data
    for strict in (True, False):
        w = check_m_approx(T, T2, m, strict, can=can)
        if isinstance(w, MApproxWitness):
            rep = verify_witness(w, can.D, can.Db, T.G, T.N)
            assert rep.ok, rep.failures
            if strict:
                assert all(math.gcd(o, m) == 1 for o in w.xi_orders)
        else:
            assert isinstance(w, Refutation) and w.scope


@settings(max_examples=20, deadline=None)
@given(triple_pairs())
def test_shortcut_witnesses_verify(data):
    T, T2, can, m = data
    sc = cyclic_outer_shortcut(T, T2, m)
    if isinstance(sc, MApproxWitness):
        assert verify_witness(sc, can.D, can.Db, T.G, T.N).ok
        assert sc.alpha_order == 1


def test_m_part():
    assert m_part(48, 2) == 16
    assert m_part(48, 6) == 48
    assert m_part(45, 2) == 1


# recipes

CONTEXTS = [("SL23_semi_C2", "SL23", 5), ("SL23_semi_C2", "SL23", 7), ("SL25_semi_C2", "SL25", 3)]


def _context(key):
    inst = builtin(key[0])
    return FakeGaloisContext(inst.group, inst.subgroups[key[1]], key[2])


@pytest.mark.parametrize("key", CONTEXTS)
@pytest.mark.parametrize("tag", ["identity", "bar", "sigma", "bar-sigma"])
def test_galois_like_recipes_are_equivariant(key, tag):
    ctx = _context(key)
    f = [index_in(apply_recipe(CandidateRecipe(tag), t, 1), ctx.ibr) for t in ctx.ibr]
    assert sorted(f) == list(range(len(f)))
    assert equivariance_violation(f, ctx.perms) is None


@pytest.mark.parametrize("key", CONTEXTS)
def test_bar_sigma_pool_is_a_group_of_commuting_involution_and_frobenius(key):
    ctx = _context(key)
    pool = [tuple(p) for _, p in search_pool(ctx.ibr)]
    pset = set(pool)
    for p in pool:
        for q in pool:
            assert tuple(q[i] for i in p) in pset
            assert tuple(q[i] for i in p) == tuple(p[i] for i in q)
    b = [index_in(bar(t), ctx.ibr) for t in ctx.ibr]
    assert [b[i] for i in b] == list(range(len(b)))


def test_piecewise_and_k_pair_cases():
    ctx = _context(("SL23_semi_C2", "SL23", 5))
    t = next(x for x in ctx.ibr if bar(x) != x)
    rec = CandidateRecipe("piecewise-r", r=4)
    assert apply_recipe(rec, t, 5) == t
    assert apply_recipe(rec, t, 7) == bar(t)
    with pytest.raises(RecipeInapplicable):
        apply_recipe(CandidateRecipe("piecewise-r", r=5), t, 7)
    kp = CandidateRecipe("k-pair", k=(4, 5))
    sig = apply_recipe(CandidateRecipe("sigma"), t, 1)
    assert apply_recipe(kp, t, 21) == t
    assert apply_recipe(kp, t, 11) == sig
    assert apply_recipe(kp, t, 9) == bar(t)
    assert apply_recipe(kp, t, 19) == bar(sig)
    with pytest.raises(RecipeInapplicable):
        apply_recipe(kp, t, 3)


@pytest.mark.parametrize("m", [1, 5, 11, 13])
def test_orbit_reduction_agrees_with_all_theta(m):
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    ctx = FakeGaloisContext(G, N, 7)
    one = verify_fake_galois(G, N, 7, m, context=ctx)
    every = verify_fake_galois(G, N, 7, m, all_theta=True, context=ctx)
    assert type(one) is type(every)
    assert one.perm == every.perm
    assert len(every.orbits) == len(ctx.ibr)


def test_threaded_run_matches_serial():
    inst = builtin("SL25_semi_C2")
    G, N = inst.group, inst.subgroups["SL25"]
    ctx = FakeGaloisContext(G, N, 3)
    a = verify_fake_galois(G, N, 3, 7, context=ctx).to_json()
    b = verify_fake_galois(G, N, 3, 7, jobs=4, context=ctx).to_json()
    assert a == b


def test_search_recipe_and_json():
    inst = builtin("SL25_semi_C2")
    G, N = inst.group, inst.subgroups["SL25"]
    res = verify_fake_galois(G, N, 3, 7, "search")
    assert isinstance(res, FakeGaloisMap)
    obj = json.loads(json.dumps(res.to_json()))
    assert obj["verdict"] == "verified" and obj["equivariant"]
    assert all(o["reverified"] for o in obj["orbits"])


def test_scrambled_table_reports_violation():
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    ctx = FakeGaloisContext(G, N, 7)
    stable = [i for i, t in enumerate(ctx.ibr) if is_stable(t, G)]
    moved = [i for i, t in enumerate(ctx.ibr) if not is_stable(t, G)]
    table = list(range(len(ctx.ibr)))
    table[stable[0]], table[moved[0]] = moved[0], stable[0]
    res = verify_fake_galois(G, N, 7, 5, CandidateRecipe("table", table=dict(enumerate(table))), context=ctx)
    assert isinstance(res, FakeGaloisFailure)
    obj = res.to_json()
    assert obj["verdict"] == "failure" and set(obj["violation"]) == {"theta", "g"}


def test_gcd_hypothesis_is_enforced():
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    with pytest.raises(PreconditionError, match=r"\(m, \|N\|\) = 1"):
        verify_fake_galois(G, N, 7, 2)


def test_stabilizer_cyclicity_needs_abelian_group():
    Z, auts = d8_on_c3sq()
    rep = orbit_stabilizer_cyclicity(Z, auts)
    assert rep.nontrivial_all_cyclic
    assert sorted({r.stabilizer_order for r in rep.rows if not r.trivial}) == [2]
    S3 = builtin("S3").group
    with pytest.raises(StructureError):
        orbit_stabilizer_cyclicity(S3, [])
