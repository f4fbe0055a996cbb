"""Projective representations associated with character triples, factor sets and gluing."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .clifford import (InternalError, LinearBrauerCharacter, ModularCharacterTriple, PreconditionError,
                       common_field, intertwiner, linear_brauer_characters, rebase)
from .gf import GF
from .grp import CosetTransversal, FiniteGroup, StructureError
from .modrep import MatrixRep, act_on_brauer, brauer_character


def _lookup(N: FiniteGroup, G: FiniteGroup):
    emb = N.embedding_into(G)
    lookup = -np.ones(G.order, dtype=np.int64)
    lookup[emb] = np.arange(N.order)
    return lookup


def _first_nonzero(M):
    flat = M.reshape(M.shape[0], -1)
    return np.argmax(flat != 0, axis=1)


def scalars_between(F: GF, A, B):
    """c with A[i] = c[i] B[i] for a batch of matrices; raises if some A[i] is not a multiple."""
    flat_a = A.reshape(A.shape[0], -1)
    flat_b = B.reshape(B.shape[0], -1)
    pos = _first_nonzero(B)
    rows = np.arange(A.shape[0])
    c = F.mul(flat_a[rows, pos], F.inv(flat_b[rows, pos]))
    if not np.array_equal(F.mul(c[:, None], flat_b), flat_a):
        raise InternalError("matrices are not scalar multiples of each other")
    return c


class FactorSet:
    """alpha(g, h) with P(g) P(h) = alpha(g, h) P(gh), stored for all pairs of group elements."""

    def __init__(self, group: FiniteGroup, field: GF, table, N: FiniteGroup | None = None):
        self.group = group
        self.field = field
        self.table = np.asarray(table, dtype=np.int64)
        self.N = N

    def __call__(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    @cached_property
    def logs(self):
        return self.field.log(self.table)

    def order(self) -> int:
        Q = self.field.q - 1
        return int(np.lcm.reduce((Q // np.gcd(self.logs, Q)).ravel()))

    def is_trivial(self) -> bool:
        return bool(np.all(self.table == 1))

    def power(self, m: int) -> "FactorSet":
        return FactorSet(self.group, self.field, self.field.power(self.table, m % (self.field.q - 1)), self.N)

    def __mul__(self, other: "FactorSet") -> "FactorSet":
        return FactorSet(self.group, self.field, self.field.mul(self.table, other.table), self.N)

    def __eq__(self, other):
        return (isinstance(other, FactorSet) and self.group is other.group and self.field.p == other.field.p
                and np.array_equal(*_same_field(self, other)))

    __hash__ = None

    def to_field(self, F2: GF) -> "FactorSet":
        return FactorSet(self.group, F2, F2.embed(self.field, self.table), self.N)

    def coset_table(self, T: CosetTransversal):
        return self.table[np.ix_(T.reps, T.reps)]

    def verify_cocycle(self) -> bool:
        """alpha(g,h) alpha(gh,k) = alpha(h,k) alpha(g,hk) for all triples (exhaustive)."""
        G = self.group
        Q = self.field.q - 1
        L = self.logs
        M = np.asarray(G.mult_table) if G.order <= 3000 else None
        idx = np.arange(G.order)
        for g in range(G.order):
            gh = M[g] if M is not None else np.asarray(G.mul(g, idx))
            lhs = (L[g][:, None] + L[gh]) % Q
            hk = M if M is not None else np.asarray(G.mul(idx[:, None], idx[None, :]))
            rhs = (L + L[g][hk]) % Q
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def verify_normalized(self, N: FiniteGroup | None = None) -> bool:
        """alpha(g, n) = alpha(n, g) = 1 for g in G and n in N."""
        N = N or self.N
        if N is None:
            return bool(np.all(self.table[0] == 1) and np.all(self.table[:, 0] == 1))
        emb = N.embedding_into(self.group)
        return bool(np.all(self.table[:, emb] == 1) and np.all(self.table[emb, :] == 1))

    def depends_only_on_cosets(self, T: CosetTransversal) -> bool:
        c = T.coset_of
        small = self.coset_table(T)
        return bool(np.array_equal(self.table, small[np.ix_(c, c)]))

    def to_json(self, T: CosetTransversal | None = None) -> dict:
        if T is not None:
            tab = self.coset_table(T)
            labels = [int(r) for r in T.reps]
        else:
            tab = self.table
            labels = list(range(self.group.order))
        return {"field": self.field.to_json(), "labels": labels, "log_base_x": self.field.log(tab).tolist(),
                "order": self.order()}


def _same_field(a: FactorSet, b: FactorSet):
    if a.field.d == b.field.d:
        return a.table, b.table
    F = common_field(a.field, b.field)
    return F.embed(a.field, a.table), F.embed(b.field, b.table)


class ProjectiveRep:
    """Matrices P(g) for every g in G (over ``field``), projective with respect to a factor set."""

    def __init__(self, group: FiniteGroup, field: GF, mats, N: FiniteGroup | None = None):
        self.group = group
        self.field = field
        self.mats = np.asarray(mats, dtype=np.int64)
        self.N = N

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def __call__(self, g: int):
        return self.mats[g]

    @cached_property
    def factor_set(self) -> FactorSet:
        G, F = self.group, self.field
        P = self.mats
        table = np.zeros((G.order, G.order), dtype=np.int64)
        idx = np.arange(G.order)
        for h in range(G.order):
            prod = F.matmul(P, P[h])  # P(g) P(h) for every g
            gh = np.asarray(G.mul(idx, h))
            table[:, h] = scalars_between(F, prod, P[gh])
        return FactorSet(G, F, table, self.N)

    def factor_set_order(self) -> int:
        return self.factor_set.order()

    def to_field(self, F2: GF) -> "ProjectiveRep":
        if F2 is self.field:
            return self
        return ProjectiveRep(self.group, F2, F2.embed(self.field, self.mats), self.N)

    def scale(self, c) -> "ProjectiveRep":
        """P(g) c(g) for a function c: G -> F^x given on every element."""
        c = np.asarray(c, dtype=np.int64)
        return ProjectiveRep(self.group, self.field, self.field.mul(self.mats, c[:, None, None]), self.N)

    def conjugate_by_matrix(self, X) -> "ProjectiveRep":
        F = self.field
        Xi = linalg.inverse(F, X)
        return ProjectiveRep(self.group, F, _conj(F, Xi, self.mats, X), self.N)

    def conjugate_by_element(self, G: FiniteGroup, x: int) -> "ProjectiveRep":
        """g -> P(x g x^-1) for x in an overgroup G normalising this group."""
        H = self.group
        emb = H.embedding_into(G)
        look = _lookup(H, G)
        idx = look[np.asarray(G.conj(emb, int(G.inv[x])))]
        if np.any(idx < 0):
            raise StructureError("element does not normalise the group")
        return ProjectiveRep(H, self.field, self.mats[idx], self.N)

    def bar(self) -> "ProjectiveRep":
        """Contragredient g -> P(g^-1)^T."""
        inv = self.group.inv
        return ProjectiveRep(self.group, self.field, np.swapaxes(self.mats[inv], 1, 2), self.N)

    def sigma(self, k: int = 1) -> "ProjectiveRep":
        F = self.field
        m = self.mats
        for _ in range(k):
            m = F.frobenius(m)
        return ProjectiveRep(self.group, F, m, self.N)

    def restrict(self, H: FiniteGroup):
        return self.mats[H.embedding_into(self.group)]

    def is_associated_with(self, D: MatrixRep) -> bool:
        """P extends D and P(gn) = P(g)D(n), P(ng) = D(n)P(g)."""
        N = D.group
        G, F = self.group, self.field
        emb = N.embedding_into(G)
        if not np.array_equal(self.mats[emb], D.matrices):
            return False
        for n in N.gens:
            gn = np.asarray(G.mul(np.arange(G.order), emb[n]))
            ng = np.asarray(G.mul(emb[n], np.arange(G.order)))
            if not np.array_equal(F.matmul(self.mats, D.matrices[n]), self.mats[gn]):
                return False
            prod = _left_mul(F, D.matrices[n], self.mats)
            if not np.array_equal(prod, self.mats[ng]):
                return False
        return True


def _left_mul(F: GF, A, mats):
    """A @ mats[i] for each i."""
    # (A M)^T = M^T A^T
    return np.swapaxes(F.matmul(np.swapaxes(mats, 1, 2), A.T), 1, 2)


def _conj(F: GF, Xi, mats, X):
    return F.matmul(_left_mul(F, Xi, mats), X)


# ---------------------------------------------------------------------------


def associated_projective(triple: ModularCharacterTriple) -> ProjectiveRep:
    """P with P(t n) = P(t) D(n) on a transversal; each P(t) an intertwiner with first entry 1."""
    G, N, D = triple.G, triple.N, triple.rep
    return projective_from_rep(G, N, D)


def projective_from_rep(G: FiniteGroup, N: FiniteGroup, D: MatrixRep) -> ProjectiveRep:
    if not N.is_normal_in(G):
        raise StructureError("N is not normal in G")
    F = D.field
    T = CosetTransversal(G, N)
    Pt = []
    for t in T.reps:
        if t == 0:
            Pt.append(np.eye(D.dim, dtype=np.int64))
            continue
        X = intertwiner(D, G, int(t))
        if X is None:
            raise PreconditionError("theta is not stable under G")
        Pt.append(X)
    Pt = np.array(Pt)
    mats = np.zeros((G.order, D.dim, D.dim), dtype=np.int64)
    for i in range(len(T)):
        members = np.nonzero(T.coset_of == i)[0]
        mats[members] = _left_mul(F, Pt[i], D.matrices[T.n_part[members]])
    P = ProjectiveRep(G, F, mats, N)
    return P


def factor_set(P: ProjectiveRep) -> FactorSet:
    return P.factor_set


def factor_set_order(P: ProjectiveRep) -> int:
    return P.factor_set.order()


def intertwining_matrix(F: GF, A, B):
    """Invertible X with A[i] X = X B[i] for all i, or None."""
    d = A.shape[1]
    eye = np.eye(d, dtype=np.int64)
    blocks = []
    for a, b in zip(A, B):
        left = F.mul(a[:, None, :, None], eye[None, :, None, :]).reshape(d * d, d * d)
        right = F.mul(eye[:, None, :, None], b.T[None, :, None, :]).reshape(d * d, d * d)
        blocks.append(F.sub(left, right))
    ns = linalg.nullspace(F, np.concatenate(blocks))
    for v in ns:
        X = v.reshape(d, d)
        if linalg.det_nonzero(F, X):
            return X
    return None


# ---------------------------------------------------------------------------
# gluing


@dataclass
class GlueResult:
    P: ProjectiveRep
    H1: FiniteGroup
    H2: FiniteGroup
    H: FiniteGroup
    alpha: FactorSet
    alpha2: FactorSet
    lambdas: dict  # h2 (index in G) -> LinearBrauerCharacter of H1/H
    lambda_candidates: dict  # h2 -> number of linear characters with theta1 = lambda theta1^h2
    formula_holds: bool
    well_defined: bool
    stated_formula_holds: bool = True
    notes: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "group_order": self.P.group.order,
            "H1": self.H1.order, "H2": self.H2.order, "H": self.H.order,
            "dim": self.P.dim,
            "alpha_order": self.alpha.order(),
            "alpha2_order": self.alpha2.order(),
            "formula_holds": self.formula_holds,
            "stated_formula_holds": self.stated_formula_holds,
            "well_defined": self.well_defined,
            "cocycle": self.alpha.verify_cocycle(),
            "lambda_orders": sorted({lam.order() for lam in self.lambdas.values()}),
            "lambda_candidates": sorted(set(self.lambda_candidates.values())),
            "notes": self.notes,
        }


def glue(D1: MatrixRep, P2: ProjectiveRep, G: FiniteGroup, check_formula: bool = True) -> GlueResult:
    """P(h1 h2) = D1(h1) P2(h2) on G = H1 H2 with H1 normal, H = H1 n H2.

    D1 is a representation of H1 affording a G-stable-over-H extension theta1, and P2 a
    projective representation of H2 whose restriction to H affords the same theta as D1.
    The factor set is checked against alpha(h1 h2, h1' h2') = lambda_h2(h1') alpha2(h2, h2'),
    where theta1 = lambda_h2 theta1^h2.
    """
    H1 = rebase(D1.group, G)
    H2 = rebase(P2.group, G)
    F = common_field(D1.field, P2.field)
    D1m = F.embed(D1.field, D1.matrices)
    P2m = F.embed(P2.field, P2.mats)
    if not H1.is_normal_in(G):
        raise StructureError("H1 is not normal in G")
    m1, m2 = H1.member_mask(G), H2.member_mask(G)
    Hmem = np.nonzero(m1 & m2)[0]
    if H1.order * H2.order // len(Hmem) != G.order:
        raise StructureError("G is not the product H1 H2")
    H = G.subgroup_from_members(Hmem, name="H")
    l1, l2 = _lookup(H1, G), _lookup(H2, G)
    notes = []
    A = D1m[l1[Hmem]]
    B = P2m[l2[Hmem]]
    if not np.array_equal(A, B):
        X = intertwining_matrix(F, A, B)
        if X is None:
            raise PreconditionError("restrictions of D1 and P2 to H are not similar")
        # X P2 X^-1 restricts to D1 on H
        P2m = _conj(F, X, P2m, linalg.inverse(F, X))
        notes.append("P2 conjugated so that its restriction to H equals D1")
    P2loc = ProjectiveRep(H2, F, P2m)
    # representative of H1 g inside H2
    T = CosetTransversal(G, H1)
    h2_for_coset = {}
    for h2 in np.nonzero(m2)[0]:
        c = int(T.coset_of[h2])
        if c not in h2_for_coset:
            h2_for_coset[c] = int(h2)
    h2_of = np.array([h2_for_coset[int(T.coset_of[g])] for g in range(G.order)])
    idx = np.arange(G.order)
    h1_of = np.asarray(G.mul(idx, G.inv[h2_of]))
    mats = np.array([F.matmul(D1m[l1[h1_of[g]]], P2m[l2[h2_of[g]]]) for g in range(G.order)])
    # independence of the decomposition: g = (h1 h^-1)(h h2) for h in H
    well_defined = True
    for h in Hmem:
        hh2 = np.asarray(G.mul(h, h2_of))
        hh1 = np.asarray(G.mul(idx, G.inv[hh2]))
        alt = np.array([F.matmul(D1m[l1[hh1[g]]], P2m[l2[hh2[g]]]) for g in range(G.order)])
        if not np.array_equal(alt, mats):
            well_defined = False
            break
    P = ProjectiveRep(G, F, mats, None)
    alpha = P.factor_set
    alpha2 = P2loc.factor_set
    # lambda_h2 from matrices: P2(h2) D1(h) P2(h2)^-1 = lambda(h) D1(h2 h h2^-1)
    lambdas, counts = {}, {}
    ell = F.p
    D1rep = MatrixRep.from_matrices(H1, F, D1m)
    theta1 = brauer_character(D1rep, ell) if check_formula else None
    Hin1 = rebase(H, H1)
    lin = linear_brauer_characters(H1, Hin1, F) if check_formula else []
    emb1 = H1.embedding_into(G)
    for h2 in sorted(set(int(x) for x in h2_of)):
        Pi = linalg.inverse(F, P2m[l2[h2]])
        nu1 = F.matmul(_left_mul(F, P2m[l2[h2]], D1m), Pi)
        conj = l1[np.asarray(G.mul(G.mul(h2, emb1), G.inv[h2]))]
        nu2 = D1m[conj]
        lam_tab = scalars_between(F, nu1, nu2)
        lam = LinearBrauerCharacter(H1, F, lam_tab)
        if check_formula:
            twisted = act_on_brauer(theta1, G, h2)
            cands = [mu for mu in lin if (mu.brauer(ell) * twisted).values == theta1.values]
            counts[h2] = len(cands)
            if not any(np.array_equal(mu.table, lam_tab) for mu in cands):
                raise InternalError("matrix-level lambda is not among the character-level candidates")
        lambdas[h2] = lam
    formula = stated = True
    if check_formula:
        # derived: alpha(g, g') = lambda_{h2(g)}(h1(g')) * alpha2(h2(g), h2(g'));
        # also evaluate the variant with alpha2 inverted
        a2 = alpha2.table
        pred = np.zeros_like(alpha.table)
        pred_inv = np.zeros_like(alpha.table)
        for g in range(G.order):
            lam = lambdas[int(h2_of[g])].table[l1[h1_of]]
            a2row = a2[l2[h2_of[g]], l2[h2_of]]
            pred[g] = F.mul(lam, a2row)
            pred_inv[g] = F.mul(lam, F.inv(a2row))
        formula = bool(np.array_equal(pred, alpha.table))
        stated = bool(np.array_equal(pred_inv, alpha.table))
    return GlueResult(P, H1, H2, H, alpha, alpha2, lambdas, counts, formula, well_defined,
                      stated_formula_holds=stated, notes=notes)


def glue_iterated(start: ProjectiveRep, pieces: list[MatrixRep], G: FiniteGroup) -> list[GlueResult]:
    """Left fold of :func:`glue`: P <- glue(D_i, P) over K_i * dom(P), each K_i normal in the product."""
    results = []
    P = start
    for D in pieces:
        dom = rebase(P.group, G)
        Ki = rebase(D.group, G)
        members = G.closure(list(dom.embedding_into(G)[dom.gens]) + list(Ki.embedding_into(G)[Ki.gens]))
        M = G.subgroup_from_members(members, name="K")
        D_M = MatrixRep.from_matrices(rebase(Ki, M), D.field, D.matrices)
        P_M = ProjectiveRep(rebase(dom, M), P.field, P.mats)
        res = glue(D_M, P_M, M)
        results.append(res)
        P = res.P
    return results
