"""Subgroups of direct products: Goursat tuples, semidirect witnesses and the S4 x Ca audit."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .builtins import cyclic_group, symmetric_group
from .grp import (DirectProduct, FiniteGroup, GroupMap, ResourceError, StructureError, find_isomorphism,
                  minimal_generators, quotient, semidirect_product, subgroup_member_lists)


@dataclass
class GoursatTuple:
    product: DirectProduct
    U: np.ndarray  # member indices in the product
    G1: FiniteGroup
    G2: FiniteGroup
    H1: FiniteGroup
    H2: FiniteGroup
    phi: GroupMap  # G1/G2 -> H1/H2
    proj1: GroupMap  # G1 -> G1/G2
    proj2: GroupMap  # H1 -> H1/H2

    def orders(self) -> tuple[int, int, int, int]:
        return self.G1.order, self.G2.order, self.H1.order, self.H2.order

    def reconstruct(self) -> np.ndarray:
        P = self.product
        e1 = self.G1.embedding_into(P.factors[0])
        e2 = self.H1.embedding_into(P.factors[1])
        img1 = self.phi.table[self.proj1.table]
        members = [P.pair(int(e1[g]), int(e2[h])) for g in range(self.G1.order) for h in range(self.H1.order)
                   if img1[g] == self.proj2.table[h]]
        return np.array(sorted(members), dtype=np.int64)


def _members(U, P: FiniteGroup) -> np.ndarray:
    if isinstance(U, FiniteGroup):
        return np.sort(U.embedding_into(P))
    return np.sort(np.asarray(U, dtype=np.int64))


def goursat_decompose(U, P: DirectProduct) -> GoursatTuple:
    """The 5-tuple (G1, G2, H1, H2, phi) of a subgroup U of P = G x H."""
    if not isinstance(P, DirectProduct):
        raise StructureError("goursat_decompose needs an explicit direct product")
    u = _members(U, P)
    G, H = P.factors
    f, s = P.first[u], P.second[u]
    G1 = G.subgroup_from_members(np.unique(f), name="G1")
    G2 = G1.subgroup_from_members([G1.index(G.perms[x]) for x in np.unique(f[s == 0])], name="G2")
    H1 = H.subgroup_from_members(np.unique(s), name="H1")
    H2 = H1.subgroup_from_members([H1.index(H.perms[x]) for x in np.unique(s[f == 0])], name="H2")
    Q1, proj1 = quotient(G1, G2)
    Q2, proj2 = quotient(H1, H2)
    lg = {int(x): i for i, x in enumerate(G1.embedding_into(G))}
    lh = {int(x): i for i, x in enumerate(H1.embedding_into(H))}
    table = -np.ones(Q1.order, dtype=np.int64)
    for a, b in zip(f, s):
        qa, qb = proj1.table[lg[int(a)]], proj2.table[lh[int(b)]]
        if table[qa] >= 0 and table[qa] != qb:
            raise StructureError("induced section map is not well defined")
        table[qa] = qb
    phi = GroupMap(Q1, Q2, [int(table[x]) for x in Q1.gens])
    if not np.array_equal(phi.table, table) or not phi.is_bijective():
        raise StructureError("induced section map is not an isomorphism")
    tup = GoursatTuple(P, u, G1, G2, H1, H2, phi, proj1, proj2)
    if len(u) != G2.order * H1.order:
        raise StructureError("|U| != |G2| |H1|")
    return tup


@dataclass
class SemidirectWitness:
    status: str  # "section" | "complement" | "abstract" | "hypothesis-failure"
    checked: bool
    isomorphism: GroupMap | None = None
    complement: np.ndarray | None = None
    notes: list = field(default_factory=list)


def _group_on(P: FiniteGroup, members, name="") -> FiniteGroup:
    return P.subgroup_from_members(members, name=name)


def _complements(G1: FiniteGroup, G2: FiniteGroup):
    """Subgroups K of G1 with |K| = |G1|/|G2| and K n G2 = 1 (deterministic order)."""
    target = G1.order // G2.order
    g2mask = G2.member_mask(G1)
    for m in subgroup_member_lists(G1):
        if len(m) == target and g2mask[m].sum() == 1:
            yield m


def _verify_split(Ug: FiniteGroup, Nmem, Smem) -> GroupMap | None:
    """Isomorphism (N x| S) -> U for N normal in U, S a complement, N and S given by members in U."""
    Ng = Ug.subgroup_from_members(Nmem, name="N")
    Sg = Ug.subgroup_from_members(Smem, name="S")
    action = []
    look = {int(x): i for i, x in enumerate(Ng.embedding_into(Ug))}
    eN = Ng.embedding_into(Ug)
    eS = Sg.embedding_into(Ug)
    for h in Sg.gens:
        imgs = [look[int(Ug.conj(int(eN[k]), int(eS[h])))] for k in Ng.gens]
        action.append(GroupMap(Ng, Ng, imgs))
    SD, _, _ = semidirect_product(Ng, Sg, action)
    # SD's generators are K's generators followed by H's
    images = [int(eN[k]) for k in Ng.gens] + [int(eS[h]) for h in Sg.gens]
    try:
        iso = GroupMap(SD, Ug, images)
    except StructureError:
        return None
    return iso if iso.is_bijective() else None


def automorphisms(G: FiniteGroup) -> list[GroupMap]:
    gens = minimal_generators(G)
    Gg = G.subgroup(gens) if gens else G
    if not gens:
        return [GroupMap(G, G, [])]
    eo = G.element_orders
    cands = [np.nonzero(eo == eo[g])[0].tolist() for g in gens]
    out = []
    for imgs in itertools.product(*cands):
        try:
            f = GroupMap(Gg, G, list(imgs))
        except StructureError:
            continue
        if f.is_bijective():
            out.append(GroupMap(G, G, [int(f.table[Gg.index(G.perms[g])]) for g in G.gens]))
    return out


def semidirect_witness(tup: GoursatTuple, abstract_fallback: bool = True) -> SemidirectWitness:
    """Explicit isomorphism U = G2 x| H1, following the section construction when possible."""
    P = tup.product
    G, H = P.factors
    Ug = _group_on(P, tup.U, name="U")
    eG1 = tup.G1.embedding_into(G)
    eU = Ug.embedding_into(P)
    g2_in_U = [i for i, x in enumerate(eU) if P.second[x] == 0]
    notes = []
    # (1) complement K of G2 in G1: section h1 -> (k(h1), h1)
    for K in _complements(tup.G1, tup.G2):
        kq = {int(tup.proj1.table[k]): int(k) for k in K}
        phi_inv = np.empty_like(tup.phi.table)
        phi_inv[tup.phi.table] = np.arange(len(tup.phi.table))
        eH1 = tup.H1.embedding_into(H)
        section = []
        for h in range(tup.H1.order):
            k = kq[int(phi_inv[tup.proj2.table[h]])]
            section.append(P.pair(int(eG1[k]), int(eH1[h])))
        lookU = {int(x): i for i, x in enumerate(eU)}
        S = [lookU[x] for x in section]
        iso = _verify_split(Ug, g2_in_U, S)
        if iso is not None:
            return SemidirectWitness("section", True, iso, np.array(S), notes)
        notes.append("complement in G1 found but section map failed verification")
    # (2) complement of G2 x 1 inside U
    Nmask = np.zeros(Ug.order, dtype=bool)
    Nmask[g2_in_U] = True
    for m in subgroup_member_lists(Ug):
        if len(m) == tup.H1.order and Nmask[m].sum() == 1:
            iso = _verify_split(Ug, g2_in_U, m)
            if iso is not None:
                notes.append("no complement of G2 in G1; used a complement of G2 x 1 in U")
                return SemidirectWitness("complement", True, iso, np.array(m), notes)
    if not abstract_fallback:
        return SemidirectWitness("hypothesis-failure", False, None, None, notes + ["no complement"])
    # (3) U isomorphic to some G2 x|_rho H1 with H1 cyclic
    G2 = tup.G2
    H1 = tup.H1
    if not (H1.order == 1 or int(H1.element_orders.max()) == H1.order):
        return SemidirectWitness("hypothesis-failure", False, None, None, notes + ["H1 not cyclic"])
    G2g = G2.whole() if G2.order > 1 else G2
    Hc = cyclic_group(H1.order)
    for alpha in automorphisms(G2g):
        a = alpha
        for _ in range(H1.order - 1):
            a = a.compose(alpha)
        if not np.array_equal(a.table, np.arange(G2g.order)):
            continue
        try:
            SD, _, _ = semidirect_product(G2g, Hc, [alpha] if Hc.gens else [])
        except StructureError:
            continue
        iso = find_isomorphism(SD, Ug)
        if iso is not None:
            notes.append("U is isomorphic to a semidirect product but G2 x 1 has no complement in U")
            return SemidirectWitness("abstract", True, iso, None, notes)
    notes.append("U is not isomorphic to any semidirect product G2 x| H1")
    return SemidirectWitness("hypothesis-failure", False, None, None, notes)


# ---------------------------------------------------------------------------


def _s4_type(G: FiniteGroup) -> str:
    """Isomorphism type of a subgroup of S4."""
    n = G.order
    eo = sorted(G.element_orders.tolist())
    if n == 4:
        return "C4" if 4 in eo else "V4"
    return {1: "1", 2: "C2", 3: "C3", 6: "S3", 8: "D8", 12: "A4", 24: "S4"}[n]


@dataclass
class CorollaryReport:
    a: int
    subgroups: int
    failures: list
    v4_failures: list
    counts: dict
    a4_g2: list
    seconds: float
    rows: list

    @property
    def ok(self) -> bool:
        return not self.failures and not self.v4_failures

    def to_json(self) -> dict:
        return {"a": self.a, "subgroups": self.subgroups, "failures": self.failures,
                "v4_failures": self.v4_failures, "counts": {f"{k[0]}/{k[1]}": v for k, v in sorted(self.counts.items())},
                "a4_g2_types": sorted(set(self.a4_g2)), "seconds": round(self.seconds, 3), "subgroup_reports": self.rows}


def check_corollary_s4(a: int) -> CorollaryReport:
    """Audit every subgroup U of S4 x Ca: U = G2 x| H1 and V4 x 1 normal in U when A4 <= G1."""
    if not 1 <= a <= 6:
        raise ResourceError("the S4 x Ca audit is bounded to 1 <= a <= 6")
    t0 = time.perf_counter()
    S4 = symmetric_group(4)
    P = DirectProduct(S4, cyclic_group(a), name=f"S4xC{a}")
    # normal Klein four subgroup of S4: identity and the double transpositions
    v4 = [g for g in range(S4.order) if S4.element_orders[g] in (1, 2) and
          all(S4.perms[g][i] != i for i in range(4)) or g == 0]
    v4_in_P = [P.pair(g, 0) for g in v4]
    counts: dict = {}
    failures, v4_fail, a4_g2, rows = [], [], [], []
    for sid, members in enumerate(subgroup_member_lists(P)):
        tup = goursat_decompose(members, P)
        if not np.array_equal(tup.reconstruct(), np.sort(members)):
            raise StructureError("Goursat reconstruction failed")
        w = semidirect_witness(tup)
        key = (_s4_type(tup.G1), _s4_type(tup.G2))
        counts[key] = counts.get(key, 0) + 1
        if not w.checked:
            failures.append({"subgroup": sid, "order": len(members), "G1": key[0], "G2": key[1],
                             "H1": tup.H1.order, "H2": tup.H2.order, "notes": w.notes})
        if key[0] in ("A4", "S4"):
            a4_g2.append(key[1])
            mask = np.zeros(P.order, dtype=bool)
            mask[members] = True
            Ug = P.subgroup_from_members(members)
            contained = bool(mask[v4_in_P].all())
            normal = contained and Ug.subgroup_from_members([Ug.index(P.perms[x]) for x in v4_in_P]).is_normal_in(Ug)
            if not normal:
                v4_fail.append({"subgroup": sid, "G1": key[0], "G2": key[1]})
        rows.append({"subgroup": sid, "orders": list(tup.orders()), "status": w.status, "witness_checked": w.checked})
    return CorollaryReport(a, len(rows), failures, v4_fail, counts, a4_g2, time.perf_counter() - t0, rows)
