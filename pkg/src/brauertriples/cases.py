"""Concrete gluing configurations and the two-step group of order 128."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .builtins import builtin, dihedral_group, gl2, symmetric_group
from .clifford import is_stable, rebase, rebase_character, working_field
from .grp import FiniteGroup, GroupMap, semidirect_product
from .modrep import BrauerCharacter, MatrixRep, irr_brauer
from .projrep import ProjectiveRep, glue, glue_iterated, projective_from_rep


@dataclass
class GlueCase:
    name: str
    G: FiniteGroup
    D1: MatrixRep
    P2: ProjectiveRep
    ell: int
    expected_lambda_order: int | None = None
    note: str = ""

    def run(self):
        return glue(self.D1, self.P2, self.G)


def _sub(G: FiniteGroup, pred, name: str) -> FiniteGroup:
    return G.subgroup_from_members([g for g in range(G.order) if pred(g)], name=name)


def _extensions(theta: BrauerCharacter, H1: FiniteGroup, ell: int):
    """Brauer characters of H1 (rebased reps) restricting to theta on theta.group."""
    H = rebase(theta.group, H1)
    emb = H.embedding_into(H1)
    out = []
    for chi in irr_brauer(H1, ell):
        if chi.degree != theta.degree:
            continue
        if all(chi(int(emb[H.classes[c].representative])) == theta.value_on_class(c) for c in theta.regular):
            out.append(chi)
    return out


def _case(name, G, H1, H2, H, theta_pick, ext_pick, ell, expected=None, note=""):
    F = working_field(G, ell)
    H1, H2, H = rebase(H1, G), rebase(H2, G), rebase(H, G)
    thetas = irr_brauer(H, ell)
    theta = theta_pick(thetas)
    chi1 = ext_pick(_extensions(theta, H1, ell), G)
    D1 = MatrixRep.from_matrices(H1, F, chi1.rep.to_field(F).matrices)
    HinH1 = rebase(H, H1)
    D_H = MatrixRep.from_matrices(rebase(H, H2), F, D1.matrices[HinH1.embedding_into(H1)])
    P2 = projective_from_rep(H2, rebase(H, H2), D_H)
    return GlueCase(name, G, D1, P2, ell, expected, note)


def _first(xs, *_):
    return xs[0]


def _unstable(chis, G):
    for chi in chis:
        if not is_stable(chi, G):
            return chi
    raise ValueError("no unstable extension")


@lru_cache(maxsize=None)
def two_step_group():
    """(C4 x C4 x C2) x| C4 with u: a -> az, b -> bz^2, z -> z.

    Returns (G, subgroups) with subgroups N=<z>, K1=<z,a>, K2=<z,b>, U2=<z,u>.
    """
    z = (1, 2, 3, 0) + tuple(range(4, 10))
    a = (0, 1, 2, 3, 5, 6, 7, 4, 8, 9)
    b = tuple(range(8)) + (9, 8)
    A = FiniteGroup(10, [z, a, b], name="C4xC4xC2")
    zi, ai, bi = A.gens
    az = int(A.mul(ai, zi))
    bz2 = int(A.mul(bi, A.power(zi, 2)))
    u = GroupMap(A, A, [zi, az, bz2])
    C4 = FiniteGroup(4, [(1, 2, 3, 0)], name="C4")
    G, emb_A, emb_U = semidirect_product(A, C4, [u], name="A:C4")
    zg, ag, bg = (int(emb_A.table[x]) for x in (zi, ai, bi))
    ug = int(emb_U.table[C4.gens[0]])
    subs = {
        "N": G.subgroup([zg], name="N"),
        "K1": G.subgroup([zg, ag], name="K1"),
        "K2": G.subgroup([zg, bg], name="K2"),
        "U2": G.subgroup([zg, ug], name="U2"),
    }
    return G, subs


def two_step_glue(ell: int = 3):
    """Glue over K2 U2 first, then over K1 (K2 U2); theta faithful on N."""
    G, S = two_step_group()
    F = working_field(G, ell)
    N = S["N"]
    thetas = irr_brauer(N, ell)
    zg = int(N.embedding_into(G)[N.gens[0]])
    # the faithful linear character with theta(z) the chosen primitive 4th root
    theta = next(t for t in thetas if t.rep is not None and
                 int(t.rep.to_field(F).matrices[N.gens[0]][0, 0]) == int(F.root_of_unity(4)))

    def ext_trivial_on(K, other_gen):
        for chi in _extensions(theta, K, ell):
            Kr = rebase(K, G)
            loc = int(np.nonzero(Kr.embedding_into(G) == other_gen)[0][0])
            M = chi.rep.to_field(F).matrices
            if int(M[loc][0, 0]) == 1:
                return MatrixRep.from_matrices(K, F, M)
        raise ValueError("no extension with the required value")

    K1, K2, U2 = S["K1"], S["K2"], S["U2"]
    a_g = [int(x) for x in K1.embedding_into(G) if G.element_orders[x] == 4 and not N.member_mask(G)[x]][0]
    b_g = [int(x) for x in K2.embedding_into(G) if G.element_orders[x] == 2 and x != G.power(zg, 2)][0]
    D_K1 = ext_trivial_on(K1, a_g)
    D_K2 = ext_trivial_on(K2, b_g)
    D_N = MatrixRep.from_matrices(rebase(N, U2), F, theta.rep.to_field(F).matrices)
    P_U2 = projective_from_rep(U2, rebase(N, U2), D_N)
    return glue_iterated(P_U2, [D_K2, D_K1], G)


@lru_cache(maxsize=None)
def glue_cases() -> list[GlueCase]:
    cases = []
    # 1. H2 = H: the glued map is D1 itself
    S4 = symmetric_group(4)
    A4 = _sub(S4, lambda g: S4.class_of[g] in _even_classes(S4), "A4")
    cases.append(_case("S4=S4.A4", S4, S4.whole(), A4, A4, lambda ts: next(t for t in ts if t.degree == 3),
                       _first, 5, expected=1, note="H2 = H, alpha trivial"))
    # 2. H1 = H: the glued map is P2
    inst = builtin("SL23_semi_C2")
    G = inst.group
    X = inst.subgroups["SL23"]
    cases.append(_case("SL23:C2=SL23.G", G, X, G.whole(), X, lambda ts: next(t for t in ts if t.degree == 2),
                       _first, 7, expected=1, note="H1 = H, P = P2"))
    # 3. D8 over its centre, faithful theta
    D8 = dihedral_group(8)
    rot, refl = D8.gens
    C4 = D8.subgroup([rot], name="C4")
    V = D8.subgroup([D8.power(rot, 2), refl], name="V4")
    Z = D8.center()
    cases.append(_case("D8=C4.V4", D8, C4, V, Z, lambda ts: next(t for t in ts if t.values[-1] != t.values[0]),
                       _first, 3, expected=2, note="lambda of order 2 gives a non-trivial factor set"))
    # 4. GL2(3) = SL2(3) SD16 over Q8 with an unstable extension
    GL = gl2(3)
    SL = GL.derived_subgroup()
    SL.name = "SL23"
    SD = _sylow2(GL)
    Q8 = GL.subgroup_from_members(np.nonzero(SL.member_mask(GL) & SD.member_mask(GL))[0], name="Q8")
    cases.append(_case("GL23=SL23.SD16", GL, SL, SD, Q8, lambda ts: next(t for t in ts if t.degree == 2),
                       _unstable, 7, expected=3, note="theta1 not G-stable; lambda of order 3"))
    # 5. SL2(3) x| C2 = SL2(3) (Q8 x| C2) over Q8
    O2 = G.subgroup_from_members([g for g in X.embedding_into(G) if G.element_orders[g] in (1, 2, 4)], name="Q8")
    c = next(g for g in range(G.order) if not X.member_mask(G)[g] and G.element_orders[g] == 2)
    H2 = G.subgroup(list(O2.embedding_into(G)[O2.gens]) + [c], name="Q8:C2")
    cases.append(_case("SL23:C2=SL23.(Q8:C2)", G, X, H2, O2, lambda ts: next(t for t in ts if t.degree == 2),
                       _unstable, 7, expected=3, note="semidirect product built from an outer involution"))
    return cases


def _even_classes(G):
    return {c.index for c in G.classes if _is_even(G.perms[c.representative])}


def _is_even(p) -> bool:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if not seen[i]:
            j, k = i, 0
            while not seen[j]:
                seen[j] = True
                j = int(p[j])
                k += 1
            parity += k - 1
    return parity % 2 == 0


def _sylow2(G: FiniteGroup) -> FiniteGroup:
    from .grp import subgroup_member_lists

    target = 1
    while G.order % (target * 2) == 0:
        target *= 2
    for members in subgroup_member_lists(G):
        if len(members) == target:
            return G.subgroup_from_members(members, name="SD16")
    raise ValueError("no Sylow 2-subgroup found")
