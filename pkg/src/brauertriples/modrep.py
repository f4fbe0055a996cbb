"""Modular representations: MeatAxe chopping, Brauer characters, IBr, decomposition matrices."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import numpy as np

from . import linalg
from .chartab import ClassFunction, character_table, conjugation_class_permutation
from .gf import GF, CycloNumber, LiftConvention, ell_part, field_of, field_tower, splitting_degree
from .grp import FiniteGroup, ResourceError, StructureError, coset_action, large_core_free_subgroup

DIM_BOUND = 500
FIELD_BOUND = 2**16


class ConsistencyError(ValueError):
    pass


def splitting_field(G: FiniteGroup, ell: int, extra: int = 1) -> GF:
    """F_{l^d} containing the l'-part of exp(G) (times ``extra``) roots of unity."""
    return field_tower(ell, ell_part(math.lcm(G.exponent, extra), ell))


class MatrixRep:
    """A representation v -> v rho(g) on row vectors, given by generator images."""

    def __init__(self, group: FiniteGroup, field: GF, gen_images, check: bool = True):
        self.group = group
        self.field = field
        self.gen_images = [np.asarray(m, dtype=np.int64) for m in gen_images]
        if len(self.gen_images) != len(group.gens):
            raise StructureError("one matrix per group generator is required")
        self.dim = self.gen_images[0].shape[0] if self.gen_images else 1
        self._matrices = None
        self._lock = threading.Lock()
        if check:
            self.matrices  # builds and verifies relations

    @classmethod
    def from_matrices(cls, group: FiniteGroup, field: GF, mats):
        """Build from a full table of matrices indexed by group elements."""
        mats = np.asarray(mats, dtype=np.int64)
        rep = cls(group, field, [mats[g] for g in group.gens], check=False)
        if not group.gens:
            rep.dim = mats.shape[1]
        rep._matrices = mats
        return rep

    @property
    def matrices(self):
        """Matrices of all group elements, checked against every generator relation."""
        with self._lock:
            if self._matrices is None:
                self._matrices = self._build()
            return self._matrices

    def _build(self):
        G, F, d = self.group, self.field, self.dim
        mats = np.zeros((G.order, d, d), dtype=np.int64)
        mats[0] = np.eye(d, dtype=np.int64)
        assigned = np.zeros(G.order, dtype=bool)
        assigned[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = []
            for s, Ms in zip(G.gens, self.gen_images):
                targets = np.asarray(G.mul(frontier, s))
                new = ~assigned[targets]
                if not new.any():
                    continue
                tnew, first = np.unique(targets[new], return_index=True)
                src = frontier[new][first]
                mats[tnew] = F.matmul(mats[src], Ms)
                assigned[tnew] = True
                nxt.append(tnew)
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        if not assigned.all():
            raise StructureError("generators do not reach every element")
        for s, Ms in zip(G.gens, self.gen_images):
            targets = np.asarray(G.mul(np.arange(G.order), s))
            if not np.array_equal(F.matmul(mats, Ms), mats[targets]):
                raise StructureError("matrices do not satisfy the group relations")
        return mats

    def __call__(self, g: int):
        return self.matrices[g]

    def restrict(self, N: FiniteGroup) -> "MatrixRep":
        emb = N.embedding_into(self.group)
        mats = self.matrices[emb]
        return MatrixRep.from_matrices(N, self.field, mats)

    def to_field(self, F2: GF) -> "MatrixRep":
        if F2 is self.field:
            return self
        mats = F2.embed(self.field, self.matrices)
        return MatrixRep.from_matrices(self.group, F2, mats)

    def dual(self) -> "MatrixRep":
        mats = self.matrices[self.group.inv].transpose(0, 2, 1)
        return MatrixRep.from_matrices(self.group, self.field, np.ascontiguousarray(mats))

    def frobenius(self, k: int = 1) -> "MatrixRep":
        """Apply x -> x^(l^k) entrywise."""
        return MatrixRep.from_matrices(self.group, self.field, self.field.power(self.matrices, self.field.p**k))

    def tensor(self, other: "MatrixRep") -> "MatrixRep":
        F = self.field
        A, B = self.matrices, other.matrices
        n, a, b = A.shape[0], A.shape[1], B.shape[1]
        K = F.mul(A[:, :, None, :, None], B[:, None, :, None, :]).reshape(n, a * b, a * b)
        return MatrixRep.from_matrices(self.group, F, K)

    def conjugate_by(self, T, Tinv=None) -> "MatrixRep":
        F = self.field
        Tinv = linalg.inverse(F, T) if Tinv is None else Tinv
        return MatrixRep.from_matrices(self.group, F, F.matmul(F.matmul(Tinv, self.matrices), T))


def permutation_module(G: FiniteGroup, field: GF) -> MatrixRep:
    n = G.degree
    mats = []
    for g in G.gens:
        M = np.zeros((n, n), dtype=np.int64)
        M[np.arange(n), G.perms[g].astype(np.int64)] = 1
        mats.append(M)
    return MatrixRep(G, field, mats)


def coset_module(G: FiniteGroup, field: GF, members) -> MatrixRep:
    """Permutation module on the right cosets of the subgroup with the given members."""
    perms = coset_action(G, members)
    n = len(perms[0]) if perms else 1
    mats = []
    for p in perms:
        M = np.zeros((n, n), dtype=np.int64)
        M[np.arange(n), list(p)] = 1
        mats.append(M)
    return MatrixRep(G, field, mats)


def small_faithful_module(G: FiniteGroup, field: GF) -> MatrixRep:
    """The smaller of the natural permutation module and a core-free coset module."""
    if G.degree <= 12:
        return permutation_module(G, field)
    H = large_core_free_subgroup(G)
    if G.order // len(H) < G.degree:
        return coset_module(G, field, H)
    return permutation_module(G, field)


def regular_module(G: FiniteGroup, field: GF) -> MatrixRep:
    n = G.order
    mats = []
    for g in G.gens:
        M = np.zeros((n, n), dtype=np.int64)
        M[np.arange(n), np.asarray(G.mul(np.arange(n), g))] = 1
        mats.append(M)
    return MatrixRep(G, field, mats)


def trivial_rep(G: FiniteGroup, field: GF) -> MatrixRep:
    return MatrixRep.from_matrices(G, field, np.ones((G.order, 1, 1), dtype=np.int64))


# ---------------------------------------------------------------------------
# MeatAxe


def _rng(seed, G, ell, dim):
    return np.random.default_rng([seed, G.order, ell, dim])


def _random_element(rep: MatrixRep, rng, terms: int = 6):
    F = rep.field
    mats = rep.matrices
    idx = rng.choice(rep.group.order, size=min(terms, rep.group.order), replace=False)
    coeffs = rng.integers(0, F.q, size=len(idx))
    A = np.zeros((rep.dim, rep.dim), dtype=np.int64)
    for g, c in zip(idx, coeffs):
        A = F.add(A, F.smul(int(c), mats[g]))
    return A


def find_submodule(rep: MatrixRep, rng, attempts: int = 200):
    """Return a proper nonzero invariant subspace (EchelonSpace) or None if irreducible.

    Irreducibility is certified by Norton's test on an element with a nullity-one
    eigenvalue (the working field is assumed to be a splitting field).
    """
    F, d = rep.field, rep.dim
    if d == 1:
        return None
    gens = rep.gen_images or [np.eye(d, dtype=np.int64)]
    gensT = [g.T.copy() for g in gens]
    for _ in range(attempts):
        A = _random_element(rep, rng)
        v0 = rng.integers(0, F.q, size=d)
        if not v0.any():
            continue
        mp = linalg.min_poly_vector(F, A, v0)
        roots = linalg.poly_roots(F, mp)
        for lam in roots:
            B = F.sub(A, F.smul(lam, np.eye(d, dtype=np.int64)))
            ker = linalg.nullspace(F, B.T)  # rows v with v B = 0
            if ker.shape[0] == 0:
                continue
            v = ker[0]
            S = linalg.spin(F, gens, v[None, :])
            if S.dim < d:
                return S
            if ker.shape[0] > 1:
                # try each kernel basis vector; a reducible module shows up quickly
                for w in ker[1:]:
                    S = linalg.spin(F, gens, w[None, :])
                    if S.dim < d:
                        return S
                continue
            kerT = linalg.nullspace(F, B)  # rows w with w B^T = 0
            w = kerT[0]
            S2 = linalg.spin(F, gensT, w[None, :])
            if S2.dim < d:
                ann = linalg.nullspace(F, S2.basis)
                S = linalg.EchelonSpace(F, d)
                S.add(ann)
                return S
            return None
    raise ResourceError("MeatAxe failed to split or certify the module within the attempt bound")


def submodule_rep(rep: MatrixRep, S) -> MatrixRep:
    F = rep.field
    mats = [linalg.action_on_subspace(F, g, S.basis, S.pivots) for g in rep.gen_images]
    if not rep.group.gens:
        return trivial_like(rep, S.dim)
    return MatrixRep(rep.group, F, mats)


def quotient_rep(rep: MatrixRep, S) -> MatrixRep:
    F = rep.field
    mats = [linalg.action_on_quotient(F, g, S)[0] for g in rep.gen_images]
    if not rep.group.gens:
        return trivial_like(rep, rep.dim - S.dim)
    return MatrixRep(rep.group, F, mats)


def trivial_like(rep, dim):
    return MatrixRep.from_matrices(rep.group, rep.field,
                                   np.broadcast_to(np.eye(dim, dtype=np.int64), (rep.group.order, dim, dim)).copy())


def composition_factors(rep: MatrixRep, seed: int = 0, ell: int | None = None) -> list[MatrixRep]:
    if rep.dim > DIM_BOUND:
        raise ResourceError(f"dimension {rep.dim} exceeds bound {DIM_BOUND}")
    if rep.field.q > FIELD_BOUND:
        raise ResourceError(f"field size {rep.field.q} exceeds bound {FIELD_BOUND}")
    ell = ell or rep.field.p
    rng = _rng(seed, rep.group, ell, rep.dim)
    out = []
    stack = [rep]
    while stack:
        M = stack.pop()
        S = find_submodule(M, rng)
        if S is None:
            out.append(M)
        else:
            stack.append(quotient_rep(M, S))
            stack.append(submodule_rep(M, S))
    return out


def chop(rep: MatrixRep, seed: int = 0) -> list[tuple[MatrixRep, int]]:
    """Composition factors up to isomorphism, with multiplicities."""
    ell = rep.field.p
    factors = composition_factors(rep, seed)
    groups: list[list] = []
    for f in factors:
        bc = brauer_values(f, ell)
        for entry in groups:
            if entry[0] == bc:
                entry[2] += 1
                break
        else:
            groups.append([bc, f, 1])
    return [(f, m) for _, f, m in groups]


# ---------------------------------------------------------------------------
# Brauer characters


def regular_classes(G: FiniteGroup, ell: int) -> list[int]:
    return [c.index for c in G.classes if c.element_order % ell]


def brauer_values(rep: MatrixRep, ell: int) -> tuple:
    """Lifted eigenvalue sums at the l-regular class representatives."""
    G, F0 = rep.group, rep.field
    if F0.p != ell:
        raise ConsistencyError(f"representation over {F0!r} is not in characteristic {ell}")
    vals = []
    for c in regular_classes(G, ell):
        cl = G.classes[c]
        o = cl.element_order
        M = rep.matrices[cl.representative]
        F = F0
        if (F.q - 1) % o:
            # the eigenvalues may still lie in F; read them off in an extension
            F = field_of(ell, math.lcm(F0.d, splitting_degree(ell, o)))
            M = F.embed(F0, M)
        exps = {}
        step = (F.q - 1) // o
        remaining = rep.dim
        for j in range(o):
            if not remaining:
                break
            eps = int(F.exp(j * step))
            B = F.sub(M, F.smul(eps, np.eye(rep.dim, dtype=np.int64)))
            k = rep.dim - linalg.rank(F, B)
            if k:
                exps[j] = k
                remaining -= k
        if remaining:
            raise ConsistencyError("element of l'-order is not diagonalisable over the field")
        vals.append(CycloNumber.from_exponents(o, exps).to_conductor(_cond(G, ell)))
    return tuple(vals)


def _bc_key(bc):
    K = max(v.K for v in bc)
    return tuple(c for v in bc for c in v.sort_key(K))


def _cond(G, ell):
    return ell_part(G.exponent, ell)


class BrauerCharacter:
    """A class function on l-regular classes, with an affording representation when known."""

    def __init__(self, group: FiniteGroup, ell: int, values, rep: MatrixRep | None = None):
        self.group = group
        self.ell = ell
        self.regular = regular_classes(group, ell)
        K = _cond(group, ell)
        self.values = tuple(v.to_conductor(math.lcm(K, v.K)) for v in values)
        if len(self.values) != len(self.regular):
            raise ValueError("one value per l-regular class is required")
        self.rep = rep
        self._pos = {c: i for i, c in enumerate(self.regular)}

    @property
    def degree(self) -> int:
        return self.values[0].to_int()

    def __call__(self, g: int) -> CycloNumber:
        c = int(self.group.class_of[g])
        if c not in self._pos:
            raise ValueError("Brauer characters are only defined on l-regular elements")
        return self.values[self._pos[c]]

    def value_on_class(self, c: int) -> CycloNumber:
        return self.values[self._pos[c]]

    def __eq__(self, other):
        return (isinstance(other, BrauerCharacter) and self.group is other.group and self.ell == other.ell
                and self.values == other.values)

    def __hash__(self):
        return hash(self.values)

    def __mul__(self, other):
        if isinstance(other, BrauerCharacter):
            return BrauerCharacter(self.group, self.ell, [a * b for a, b in zip(self.values, other.values)])
        return NotImplemented

    def __add__(self, other):
        return BrauerCharacter(self.group, self.ell, [a + b for a, b in zip(self.values, other.values)])

    def sort_key(self):
        K = max(v.K for v in self.values)
        return (self.values[0].to_fraction(),) + tuple(c for v in self.values for c in v.sort_key(K))

    def to_json(self):
        return [v.to_json() for v in self.values]

    def __repr__(self):
        return f"BrauerCharacter(deg={self.degree}, {list(self.values)})"


def brauer_character(rep: MatrixRep, ell: int | None = None) -> BrauerCharacter:
    ell = ell or rep.field.p
    return BrauerCharacter(rep.group, ell, brauer_values(rep, ell), rep)


_ibr_lock = threading.Lock()
_ibr_cache: dict = {}


def irr_brauer(G: FiniteGroup, ell: int, seed: int = 0, field: GF | None = None,
               strategy: str = "tensor") -> list[BrauerCharacter]:
    """IBr(G) in characteristic ell, each with an affording representation.

    ``strategy="tensor"`` chops the natural permutation module and tensor products of
    the simples found so far until the count reaches the number of l-regular
    classes; ``strategy="regular"`` chops the regular module (an oracle for small groups).
    """
    key = (id(G), ell, seed, strategy, None if field is None else (field.p, field.d))
    with _ibr_lock:
        hit = _ibr_cache.get(key)
        if hit is not None and hit[0] is G:
            return hit[1]
    F = field or splitting_field(G, ell)
    target = len(regular_classes(G, ell))
    found: dict = {}

    def absorb(rep):
        for f, _ in chop(rep, seed):
            bc = brauer_values(f, ell)
            if bc not in found:
                found[bc] = f

    absorb(trivial_rep(G, F))
    if strategy == "regular":
        if G.order > 1000:
            raise ResourceError("regular-module chopping is limited to |G| <= 1000")
        absorb(regular_module(G, F))
    else:
        absorb(small_faithful_module(G, F))
        tried = set()
        while len(found) < target:
            simples = sorted(found.items(), key=lambda kv: (kv[1].dim, _bc_key(kv[0])))
            progress = False
            # cheap candidates first: duals and Frobenius twists
            for bc, f in simples:
                for cand in (f.dual(), f.frobenius()):
                    cb = brauer_values(cand, ell)
                    if cb not in found:
                        found[cb] = cand
                        progress = True
            if len(found) >= target:
                break
            pairs = sorted(((a, b) for a in found for b in found if (a, b) not in tried and (b, a) not in tried),
                           key=lambda ab: found[ab[0]].dim * found[ab[1]].dim)
            for a, b in pairs:
                tried.add((a, b))
                if found[a].dim * found[b].dim > DIM_BOUND:
                    continue
                before = len(found)
                absorb(found[a].tensor(found[b]))
                if len(found) > before:
                    progress = True
                    break
            if not progress:
                raise ResourceError("tensor-product search did not produce all simple modules")
    if len(found) != target:
        raise ConsistencyError(f"found {len(found)} simple modules, expected {target}")
    chars = [BrauerCharacter(G, ell, bc, rep) for bc, rep in found.items()]
    chars.sort(key=lambda c: c.sort_key())
    with _ibr_lock:
        _ibr_cache[key] = (G, chars)
    return chars


def restrict_to_regular(chi: ClassFunction, ell: int) -> BrauerCharacter:
    G = chi.group
    return BrauerCharacter(G, ell, [chi.values[c] for c in regular_classes(G, ell)])


def express_in_basis(phi: BrauerCharacter, basis: list[BrauerCharacter]) -> list[int]:
    """Integer coefficients of phi in the given Brauer characters (exactly verified)."""
    A = np.array([[complex(v) for v in b.values] for b in basis]).T
    y = np.array([complex(v) for v in phi.values])
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    coeffs = [int(round(c.real)) for c in sol]
    if np.max(np.abs(sol - np.array(coeffs))) > 1e-6:
        raise ConsistencyError("class function is not an integer combination of the basis")
    K = math.lcm(*[v.K for v in phi.values])
    for i, v in enumerate(phi.values):
        s = CycloNumber.rational(0, K)
        for c, b in zip(coeffs, basis):
            if c:
                s = s + b.values[i] * c
        if s != v:
            raise ConsistencyError("exact verification of the decomposition failed")
    return coeffs


def d1(chi: ClassFunction, ell: int, ibr: list[BrauerCharacter] | None = None, seed: int = 0) -> list[int]:
    """Coefficients of the l-regular restriction of chi in the IBr basis."""
    ibr = ibr if ibr is not None else irr_brauer(chi.group, ell, seed)
    return express_in_basis(restrict_to_regular(chi, ell), ibr)


def decomposition_matrix(G: FiniteGroup, ell: int, seed: int = 0) -> np.ndarray:
    ibr = irr_brauer(G, ell, seed)
    rows = [d1(chi, ell, ibr) for chi in character_table(G)]
    return np.array(rows, dtype=np.int64)


# ---------------------------------------------------------------------------
# actions on Brauer characters


def act_on_brauer(theta: BrauerCharacter, G: FiniteGroup, g: int) -> BrauerCharacter:
    """theta^g(x) = theta(g x g^-1) for theta on a normal subgroup of G."""
    N = theta.group
    perm = conjugation_class_permutation(N, G, g, classes=theta.regular)
    pos = {c: i for i, c in enumerate(theta.regular)}
    vals = [theta.values[pos[perm[i]]] for i in range(len(theta.regular))]
    rep = None
    if theta.rep is not None:
        emb = N.embedding_into(G)
        lookup = -np.ones(G.order, dtype=np.int64)
        lookup[emb] = np.arange(N.order)
        ginv = int(G.inv[g])
        conj_idx = lookup[np.asarray(G.conj(emb, ginv))]
        rep = MatrixRep.from_matrices(N, theta.rep.field, theta.rep.matrices[conj_idx])
    return BrauerCharacter(N, theta.ell, vals, rep)


def act_by_automorphism(theta: BrauerCharacter, phi) -> BrauerCharacter:
    """theta^phi(x) = theta(phi^-1(x)) for a GroupMap automorphism phi of theta's group."""
    N = theta.group
    inv = phi.inverse()
    vals = [theta.value_on_class(int(N.class_of[inv.table[N.classes[c].representative]])) for c in theta.regular]
    rep = None
    if theta.rep is not None:
        rep = MatrixRep.from_matrices(N, theta.rep.field, theta.rep.matrices[inv.table])
    return BrauerCharacter(N, theta.ell, vals, rep)


def bar(theta: BrauerCharacter) -> BrauerCharacter:
    rep = theta.rep.dual() if theta.rep is not None else None
    return BrauerCharacter(theta.group, theta.ell, [v.conjugate() for v in theta.values], rep)


def sigma_twist(theta: BrauerCharacter, power: int = 1) -> BrauerCharacter:
    """Twist by the field automorphism x -> x^(l^power)."""
    ell = theta.ell
    a = pow(ell, power)
    vals = [v.galois(a % v.K if v.K > 1 else 1) for v in theta.values]
    rep = theta.rep.frobenius(power) if theta.rep is not None else None
    return BrauerCharacter(theta.group, ell, vals, rep)


def index_in(theta: BrauerCharacter, ibr: list[BrauerCharacter]) -> int:
    for i, b in enumerate(ibr):
        if b.values == theta.values:
            return i
    raise ConsistencyError("Brauer character not found in IBr")


def brauer_table_json(G: FiniteGroup, ell: int, ibr) -> dict:
    regs = regular_classes(G, ell)
    return {
        "group": G.name,
        "order": G.order,
        "ell": ell,
        "regular_classes": [{"index": c, "representative": list(G.perm(G.classes[c].representative)),
                             "size": G.classes[c].size, "element_order": G.classes[c].element_order}
                            for c in regs],
        "characters": [b.to_json() for b in ibr],
        "degrees": [b.degree for b in ibr],
    }


def brauer_table_tsv(G: FiniteGroup, ell: int, ibr) -> str:
    regs = regular_classes(G, ell)
    head = ["phi"] + [f"{c}:o{G.classes[c].element_order}:s{G.classes[c].size}" for c in regs]
    lines = ["\t".join(head)]
    for i, b in enumerate(ibr):
        lines.append("\t".join([f"phi{i}"] + [repr(v) for v in b.values]))
    return "\n".join(lines) + "\n"
