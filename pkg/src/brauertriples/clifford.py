"""Modular character triples, extension of Brauer characters and Clifford correspondence."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gf import GF, CycloNumber, LiftConvention, ell_part, field_tower
from .grp import (FiniteGroup, GroupMap, StructureError, minimal_generators, quotient)
from .modrep import (BrauerCharacter, MatrixRep, act_on_brauer, brauer_character, express_in_basis,
                     irr_brauer, regular_classes)


class PreconditionError(ValueError):
    pass


class FieldTooSmall(ArithmeticError):
    """Raised when a root of unity of order ``needed`` is missing from the working field."""

    def __init__(self, needed: int):
        super().__init__(f"roots of unity of order {needed} are required")
        self.needed = needed


class InternalError(RuntimeError):
    pass


def working_field(G: FiniteGroup, ell: int, extra: int = 1) -> GF:
    """Field used for triples over G: contains the l'-part of exp(G) (times ``extra``) roots of unity."""
    return field_tower(ell, ell_part(math.lcm(G.exponent, extra), ell))


def enlarge(F: GF, needed: int) -> GF:
    return field_tower(F.p, math.lcm(F.q - 1, ell_part(needed, F.p)))


def common_field(*fields: GF) -> GF:
    p = fields[0].p
    return field_tower(p, math.lcm(*[f.q - 1 for f in fields]))


def kth_root(F: GF, c: int, k: int) -> int:
    """Encoding of the k-th root of c with least discrete log; FieldTooSmall if none exists."""
    Q = F.q - 1
    a = int(F.log(c))
    g = math.gcd(k, Q)
    if a % g:
        order_c = Q // math.gcd(a, Q)
        raise FieldTooSmall(k * order_c)
    b = (a // g) * pow(k // g, -1, Q // g) % (Q // g)
    return int(F.exp(b))


# ---------------------------------------------------------------------------
# linear Brauer characters


class LinearBrauerCharacter:
    """A homomorphism G -> F^x (l'-valued by construction), stored on every element."""

    def __init__(self, group: FiniteGroup, field: GF, table):
        self.group = group
        self.field = field
        self.table = np.asarray(table, dtype=np.int64)

    def __call__(self, g):
        return self.table[g]

    @property
    def gen_values(self):
        return [int(self.table[g]) for g in self.group.gens]

    def as_rep(self) -> MatrixRep:
        return MatrixRep.from_matrices(self.group, self.field, self.table[:, None, None])

    def brauer(self, ell: int | None = None) -> BrauerCharacter:
        ell = ell or self.field.p
        conv = LiftConvention(ell)
        G = self.group
        vals = [conv.lift_log(self.field, int(self.field.log(int(self.table[G.classes[c].representative]))))
                for c in regular_classes(G, ell)]
        return BrauerCharacter(G, ell, vals, self.as_rep())

    def order(self) -> int:
        Q = self.field.q - 1
        logs = self.field.log(self.table)
        return int(np.lcm.reduce(Q // np.gcd(logs, Q))) if len(logs) else 1

    def is_trivial(self) -> bool:
        return bool(np.all(self.table == 1))

    def __mul__(self, other: "LinearBrauerCharacter"):
        return LinearBrauerCharacter(self.group, self.field, self.field.mul(self.table, other.table))

    def to_field(self, F2: GF) -> "LinearBrauerCharacter":
        return LinearBrauerCharacter(self.group, F2, F2.embed(self.field, self.table))

    def verify(self) -> bool:
        G, F = self.group, self.field
        idx = np.arange(G.order)
        return all(np.array_equal(F.mul(self.table, self.table[s]), self.table[np.asarray(G.mul(idx, s))])
                   for s in G.gens)


def homs_to_cyclic(Q: FiniteGroup, M: int) -> list[np.ndarray]:
    """All homomorphisms Q -> Z/M, as arrays of exponents indexed by Q's elements."""
    gens = minimal_generators(Q)
    if not gens:
        return [np.zeros(Q.order, dtype=np.int64)]
    cands = []
    for s in gens:
        o = int(Q.element_orders[s])
        g = math.gcd(o, M)
        cands.append([j * (M // g) for j in range(g)])
    out = []
    for imgs in itertools.product(*cands):
        table = -np.ones(Q.order, dtype=np.int64)
        table[0] = 0
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, v in zip(gens, imgs):
                    y = int(Q.mul(x, s))
                    val = (table[x] + v) % M
                    if table[y] < 0:
                        table[y] = val
                        nxt.append(y)
                    elif table[y] != val:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            # full homomorphism check on generators of the whole group
            idx = np.arange(Q.order)
            for s in Q.gens:
                if not np.array_equal((table + table[s]) % M, table[np.asarray(Q.mul(idx, s))]):
                    ok = False
                    break
        if ok:
            out.append(table)
    return out


def linear_brauer_characters(G: FiniteGroup, N: FiniteGroup | None, F: GF) -> list[LinearBrauerCharacter]:
    """Linear Brauer characters of G/N (N=None for G itself) with values in F, trivial first."""
    if N is None:
        N = G.trivial_subgroup()
    Qg, proj = quotient(G, N)
    M = F.q - 1
    out = []
    for h in homs_to_cyclic(Qg, M):
        table = F.exp(h[proj.table])
        out.append(LinearBrauerCharacter(G, F, table))
    out.sort(key=lambda lam: [int(F.log(int(v))) for v in lam.table])
    return out


# ---------------------------------------------------------------------------
# stabilisers and triples


def is_stable(theta: BrauerCharacter, G: FiniteGroup) -> bool:
    return all(act_on_brauer(theta, G, g).values == theta.values for g in G.gens)


def stabilizer_of_character(G: FiniteGroup, theta: BrauerCharacter, name: str = "") -> FiniteGroup:
    """G_theta for theta a Brauer character of a normal subgroup of G."""
    N = theta.group
    if not N.is_normal_in(G):
        raise StructureError("the character's group is not normal in G")
    stab = [g for g in range(G.order) if act_on_brauer(theta, G, g).values == theta.values]
    return G.subgroup_from_members(stab, name=name or f"{G.name}_theta")


def stabilizer_in_automorphisms(theta: BrauerCharacter, auts: list[GroupMap]):
    """Stabiliser of theta in the group generated by the automorphisms (as permutations of N)."""
    from .modrep import act_by_automorphism

    N = theta.group
    A = FiniteGroup(N.order, [tuple(int(x) for x in a.table) for a in auts] or [tuple(range(N.order))], name="Aut")
    stab = []
    for i in range(A.order):
        phi = GroupMap(N, N, [int(A.perms[i][s]) for s in N.gens])
        if act_by_automorphism(theta, phi).values == theta.values:
            stab.append(i)
    return A, A.subgroup_from_members(stab, name="Aut_theta")


@dataclass
class ModularCharacterTriple:
    G: FiniteGroup
    N: FiniteGroup
    theta: BrauerCharacter
    rep: MatrixRep
    ell: int
    replaced_from: FiniteGroup | None = None
    notes: list = field(default_factory=list)

    def check(self) -> bool:
        return self.N.is_normal_in(self.G) and is_stable(self.theta, self.G)


def make_triple(G: FiniteGroup, N: FiniteGroup, theta: BrauerCharacter, rep: MatrixRep | None = None
                ) -> ModularCharacterTriple:
    """Form (G, N, theta), replacing G by the stabiliser G_theta when theta is not G-stable."""
    if not N.is_normal_in(G):
        raise StructureError("N is not normal in G")
    rep = rep or theta.rep
    if rep is None:
        raise PreconditionError("an affording representation of theta is required")
    if is_stable(theta, G):
        return ModularCharacterTriple(G, N, theta, rep, theta.ell)
    Gt = stabilizer_of_character(G, theta)
    # N must be re-expressed as a subgroup of the stabiliser
    Nt = rebase(N, Gt)
    theta_t = BrauerCharacter(Nt, theta.ell, theta.values, MatrixRep.from_matrices(Nt, rep.field, rep.matrices))
    t = ModularCharacterTriple(Gt, Nt, theta_t, theta_t.rep, theta.ell, replaced_from=G)
    t.notes.append(f"theta not {G.name}-stable; replaced by stabiliser of order {Gt.order}")
    return t


def rebase(N: FiniteGroup, G: FiniteGroup) -> FiniteGroup:
    """N as a subgroup of G (same permutations)."""
    if N.parent is G:
        return N
    return G.subgroup_from_members([G.index(p) for p in N.perms], name=N.name)


def rebase_character(theta: BrauerCharacter, Nn: FiniteGroup) -> BrauerCharacter:
    rep = None
    if theta.rep is not None:
        rep = MatrixRep.from_matrices(Nn, theta.rep.field, theta.rep.matrices)
    return BrauerCharacter(Nn, theta.ell, theta.values, rep)


# ---------------------------------------------------------------------------
# extensions


def intertwiner(D: MatrixRep, G: FiniteGroup, g: int):
    """Nonzero T with D(n) T = T D(g^-1 n g) for all n in N (first nonzero entry 1), or None."""
    N, F = D.group, D.field
    emb = N.embedding_into(G)
    lookup = -np.ones(G.order, dtype=np.int64)
    lookup[emb] = np.arange(N.order)
    d = D.dim
    eye = np.eye(d, dtype=np.int64)
    blocks = []
    for n in N.gens or [0]:
        A = D.matrices[n]
        ng = lookup[int(G.conj(emb[n], g))]
        if ng < 0:
            raise StructureError("element does not normalise N")
        B = D.matrices[ng]
        # row-major vec: vec(A T) = (A kron I) vec T, vec(T B) = (I kron B^T) vec T
        left = F.mul(A[:, None, :, None], eye[None, :, None, :]).reshape(d * d, d * d)
        right = F.mul(eye[:, None, :, None], B.T[None, :, None, :]).reshape(d * d, d * d)
        blocks.append(F.sub(left, right))
    ns = linalg.nullspace(F, np.concatenate(blocks))
    if ns.shape[0] == 0:
        return None
    if ns.shape[0] > 1:
        raise PreconditionError("intertwiner space has dimension > 1; theta is not absolutely irreducible")
    T = ns[0].reshape(d, d)
    first = T.ravel()[np.nonzero(T.ravel())[0][0]]
    return F.smul(int(F.inv(int(first))), T)


def _cyclic_extension(D: MatrixRep, G: FiniteGroup) -> MatrixRep:
    """Extend D from N to G with G/N cyclic (raises FieldTooSmall if a root is missing)."""
    N, F = D.group, D.field
    Qg, proj = quotient(G, N)
    k = Qg.order
    if k == 1:
        return MatrixRep.from_matrices(G, F, D.matrices[_lookup(N, G)[np.arange(G.order)]])
    gen_q = next(x for x in range(Qg.order) if Qg.element_orders[x] == k)
    g = int(np.nonzero(proj.table == gen_q)[0][0])
    T = intertwiner(D, G, g)
    if T is None:
        raise PreconditionError("theta is not stable under G")
    lookup = _lookup(N, G)
    gk = G.power(g, k)
    Dgk = D.matrices[lookup[gk]]
    c = linalg.scalar_multiple(F, linalg.matpow(F, T, k), Dgk)
    if c is None:
        raise InternalError("T^k is not a scalar multiple of D(g^k)")
    lam = kth_root(F, int(F.inv(c)), k)
    T = F.smul(lam, T)
    # x = n g^j  =>  D~(x) = D(n) T^j
    powers = [0]
    for _ in range(k - 1):
        powers.append(int(G.mul(powers[-1], g)))
    Tpows = [np.eye(D.dim, dtype=np.int64)]
    for _ in range(k - 1):
        Tpows.append(F.matmul(Tpows[-1], T))
    jq = {int(proj.table[powers[j]]): j for j in range(k)}
    mats = np.zeros((G.order, D.dim, D.dim), dtype=np.int64)
    ginv_pows = [int(G.inv[p]) for p in powers]
    for x in range(G.order):
        j = jq[int(proj.table[x])]
        n = lookup[int(G.mul(x, ginv_pows[j]))]
        mats[x] = F.matmul(D.matrices[n], Tpows[j])
    rep = MatrixRep.from_matrices(G, F, mats)
    verify_rep(rep)
    return rep


def _lookup(N: FiniteGroup, G: FiniteGroup):
    emb = N.embedding_into(G)
    lookup = -np.ones(G.order, dtype=np.int64)
    lookup[emb] = np.arange(N.order)
    return lookup


def verify_rep(rep: MatrixRep) -> None:
    G, F = rep.group, rep.field
    idx = np.arange(G.order)
    for s in G.gens:
        if not np.array_equal(F.matmul(rep.matrices, rep.matrices[s]), rep.matrices[np.asarray(G.mul(idx, s))]):
            raise InternalError("constructed matrices do not form a representation")


def with_field_growth(fn, D: MatrixRep, *args, max_steps: int = 4):
    """Call fn(D, ...) enlarging D's field when a root of unity is missing."""
    for _ in range(max_steps):
        try:
            return fn(D, *args)
        except FieldTooSmall as exc:
            D = D.to_field(enlarge(D.field, exc.needed))
    raise InternalError("field growth did not converge")


def preimage(G: FiniteGroup, proj: GroupMap, members_q) -> FiniteGroup:
    mask = np.zeros(proj.codomain.order, dtype=bool)
    mask[np.asarray(members_q)] = True
    return G.subgroup_from_members(np.nonzero(mask[proj.table])[0])


def extend_character(theta: BrauerCharacter, G: FiniteGroup, rep: MatrixRep | None = None
                     ) -> tuple[BrauerCharacter, MatrixRep]:
    """Extend a G-stable theta on N to G when G/N is cyclic or has all Sylow subgroups cyclic."""
    N = theta.group
    D = rep or theta.rep
    if D is None:
        raise PreconditionError("an affording representation of theta is required")
    if not N.is_normal_in(G):
        raise StructureError("N is not normal in G")
    if not is_stable(theta, G):
        raise PreconditionError("theta is not G-stable")
    if N.order == G.order:
        R = MatrixRep.from_matrices(G, D.field, D.matrices[_lookup(N, G)])
        return brauer_character(R, theta.ell), R
    Qg, proj = quotient(G, N)
    if _is_cyclic(Qg):
        R = with_field_growth(_cyclic_extension, D, G)
        return brauer_character(R, theta.ell), R
    Dq = Qg.derived_subgroup()
    if not (_is_cyclic(Dq) and _is_cyclic(quotient(Qg, Dq)[0])):
        raise PreconditionError("G/N is neither cyclic nor metacyclic with cyclic Sylow subgroups")
    if any(not _sylow_cyclic(Qg, p) for p in _primes(Qg.order)):
        raise PreconditionError("G/N has a non-cyclic Sylow subgroup")
    M1 = preimage(G, proj, Dq.embedding_into(Qg))
    N1 = rebase(N, M1)
    D1 = MatrixRep.from_matrices(N1, D.field, D.matrices)
    R1 = with_field_growth(_cyclic_extension, D1, M1)
    # choose a G-stable extension among the linear twists
    for lam in linear_brauer_characters(M1, N1, R1.field):
        cand = MatrixRep.from_matrices(M1, R1.field, R1.field.mul(R1.matrices, lam.table[:, None, None]))
        bc = brauer_character(cand, theta.ell)
        if is_stable(bc, G):
            R = with_field_growth(_cyclic_extension, cand, G)
            return brauer_character(R, theta.ell), R
    raise InternalError("no G-stable extension found over the derived step")


def _is_cyclic(Q: FiniteGroup) -> bool:
    return Q.order == 1 or int(Q.element_orders.max()) == Q.order


def _primes(n: int):
    from sympy import primefactors

    return primefactors(n)


def _sylow_cyclic(Q: FiniteGroup, p: int) -> bool:
    pk = 1
    while Q.order % (pk * p) == 0:
        pk *= p
    # cyclic Sylow iff there is an element of order pk
    return bool(np.any(Q.element_orders % pk == 0))


# ---------------------------------------------------------------------------
# restriction, induction, IBr(G | theta)


def restrict_brauer(chi: BrauerCharacter, N: FiniteGroup) -> BrauerCharacter:
    G = chi.group
    emb = N.embedding_into(G)
    vals = [chi(int(emb[N.classes[c].representative])) for c in regular_classes(N, chi.ell)]
    return BrauerCharacter(N, chi.ell, vals, chi.rep.restrict(N) if chi.rep is not None else None)


def induce_brauer(psi: BrauerCharacter, G: FiniteGroup) -> BrauerCharacter:
    H = psi.group
    emb = H.embedding_into(G)
    from fractions import Fraction

    regs = regular_classes(G, psi.ell)
    pos = {c: i for i, c in enumerate(regs)}
    K = max(v.K for v in psi.values)
    sums = [CycloNumber.rational(0, K) for _ in regs]
    gcls = G.class_of[emb]
    for y in range(H.order):
        c = int(gcls[y])
        if c in pos:
            sums[pos[c]] = sums[pos[c]] + psi(y)
    vals = [s * Fraction(int(G.centralizer_orders[c]), H.order) for c, s in zip(regs, sums)]
    return BrauerCharacter(G, psi.ell, vals)


def constituents(chi: BrauerCharacter, N: FiniteGroup, ibr_N) -> list[int]:
    return express_in_basis(restrict_brauer(chi, N), ibr_N)


def ibr_over(G: FiniteGroup, N: FiniteGroup, theta_index: int, ell: int, seed: int = 0,
             ibr_G=None, ibr_N=None) -> list[BrauerCharacter]:
    """IBr(G | theta)."""
    ibr_G = ibr_G if ibr_G is not None else irr_brauer(G, ell, seed)
    ibr_N = ibr_N if ibr_N is not None else irr_brauer(N, ell, seed)
    return [chi for chi in ibr_G if constituents(chi, N, ibr_N)[theta_index] > 0]


@dataclass
class LinearDifference:
    status: str  # "found" | "hypothesis-failure" | "none"
    lambdas: list
    hypothesis: str


def _is_extension_of_irreducible(chi: BrauerCharacter, N: FiniteGroup, ibr_N) -> bool:
    res = restrict_brauer(chi, N)
    return any(res.values == b.values for b in ibr_N)


def linear_difference(chi: BrauerCharacter, chi2: BrauerCharacter, N: FiniteGroup, F: GF | None = None,
                      ibr_N=None) -> LinearDifference:
    """All linear Brauer characters lambda of G/N with chi = lambda * chi2."""
    G = chi.group
    F = F or working_field(G, chi.ell)
    Qg, _ = quotient(G, N)
    abelian = Qg.is_abelian()
    ibr_N = ibr_N if ibr_N is not None else irr_brauer(N, chi.ell)
    extensions = (chi.degree == chi2.degree and _is_extension_of_irreducible(chi, N, ibr_N)
                  and restrict_brauer(chi, N).values == restrict_brauer(chi2, N).values)
    hyp = "abelian quotient" if abelian else ("both extensions" if extensions else "")
    found = []
    for lam in linear_brauer_characters(G, N, F):
        lb = lam.brauer(chi.ell)
        if (lb * chi2).values == chi.values:
            found.append(lam)
    if not hyp:
        return LinearDifference("hypothesis-failure", found, "G/N non-abelian and not both extensions")
    if not found:
        raise InternalError("no linear character relates the two characters although the hypotheses hold")
    return LinearDifference("found", found, hyp)


def clifford_correspondent(psi: BrauerCharacter, G: FiniteGroup, theta: BrauerCharacter,
                           ibr_G=None, ibr_N=None) -> BrauerCharacter:
    """psi^G for psi in IBr(G_theta | theta); verified to be an irreducible Brauer character."""
    N = theta.group
    Gt = psi.group
    ibr_N = ibr_N if ibr_N is not None else irr_brauer(N, theta.ell)
    Nt = rebase(N, Gt)
    idx = next(i for i, b in enumerate(ibr_N) if b.values == theta.values)
    if express_in_basis(restrict_brauer(psi, Nt), ibr_N)[idx] == 0:
        raise PreconditionError("psi does not lie over theta")
    ind = induce_brauer(psi, G)
    ibr_G = ibr_G if ibr_G is not None else irr_brauer(G, theta.ell)
    for chi in ibr_G:
        if chi.values == ind.values:
            return chi
    raise InternalError("induced character is not irreducible (Clifford correspondence violated)")


def clifford_inverse(chi: BrauerCharacter, Gt: FiniteGroup, theta: BrauerCharacter, ibr_Gt=None
                     ) -> BrauerCharacter:
    """The psi in IBr(G_theta | theta) inducing to chi."""
    G = chi.group
    N = theta.group
    ibr_Gt = ibr_Gt if ibr_Gt is not None else irr_brauer(Gt, theta.ell)
    ibr_N = irr_brauer(N, theta.ell)
    Nt = rebase(N, Gt)
    idx = next(i for i, b in enumerate(ibr_N) if b.values == theta.values)
    for psi in ibr_Gt:
        if express_in_basis(restrict_brauer(psi, Nt), ibr_N)[idx] and induce_brauer(psi, G).values == chi.values:
            return psi
    raise PreconditionError("chi does not lie over theta")
