"""Ordinary character tables (Dixon's modular method), restriction, induction."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import numpy as np
from sympy import nextprime, primitive_root
from sympy.polys.domains import GF as SymGF
from sympy.polys.matrices import DomainMatrix

from .gf import CycloNumber
from .grp import FiniteGroup, ResourceError, StructureError, max_order

CLASS_BOUND = 200


class ClassFunction:
    """Class-indexed CycloNumber values on a group."""

    def __init__(self, group: FiniteGroup, values, irreducible: bool = False, character: bool = False):
        self.group = group
        K = group.exponent
        self.values = [v.to_conductor(math.lcm(K, v.K)) if isinstance(v, CycloNumber)
                       else CycloNumber.rational(v, K) for v in values]
        if len(self.values) != len(group.classes):
            raise ValueError("one value per conjugacy class is required")
        self.irreducible = irreducible
        self.character = character

    @property
    def degree(self) -> int:
        return self.values[0].to_int()

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and self.group is other.group and self.values == other.values

    def __hash__(self):
        return hash(tuple(hash(v) for v in self.values))

    def __add__(self, other):
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, [v.conjugate() for v in self.values], self.irreducible, self.character)

    def __call__(self, g: int) -> CycloNumber:
        return self.values[self.group.class_of[g]]

    def sort_key(self):
        K = max(v.K for v in self.values)
        return (self.values[0].to_fraction(),) + tuple(c for v in self.values for c in v.sort_key(K))

    def to_json(self):
        return [v.to_json() for v in self.values]

    def __repr__(self):
        return f"ClassFunction({self.values})"


def inner_product(phi: ClassFunction, psi: ClassFunction) -> CycloNumber:
    G = phi.group
    if psi.group is not G:
        raise StructureError("class functions live on different groups")
    total = CycloNumber.rational(0, G.exponent)
    for c, a, b in zip(G.classes, phi.values, psi.values):
        total = total + a * b.conjugate() * c.size
    return total / G.order


# ---------------------------------------------------------------------------
# Dixon's method


def class_matrices(G: FiniteGroup):
    """a[i][j, l] = #{x in C_i : x^-1 z_l in C_j} for a fixed z_l in C_l."""
    k = len(G.classes)
    reps = np.array([c.representative for c in G.classes])
    mats = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        X = G.class_members(i)
        Y = np.asarray(G.mul(G.inv[X][:, None], reps[None, :]))
        cls = G.class_of[Y]
        for l in range(k):
            mats[i, :, l] = np.bincount(cls[:, l], minlength=k)
    return mats


def _dixon_prime(G: FiniteGroup) -> int:
    e = G.exponent
    bound = 2 * math.isqrt(G.order) + 2
    p = e + 1
    while True:
        if p > bound and all(p % q for q in range(2, math.isqrt(p) + 1)) and p > 1:
            return p
        p += e


def _charpoly_roots(R, p):
    r = R.shape[0]
    dm = DomainMatrix([[SymGF(p)(int(x)) for x in row] for row in R], (r, r), SymGF(p))
    coeffs = [int(c) % p for c in dm.charpoly()]  # high degree first
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % p
    return [int(x) for x in xs[acc == 0]]


def _nullspace_mod(A, p):
    from .gf import field_of
    from .linalg import nullspace

    return nullspace(field_of(p, 1), np.asarray(A, dtype=np.int64) % p)


def _simultaneous_eigenvectors(mats, p):
    """Common right eigenvectors (columns) of the commuting matrices mod p."""
    from .gf import field_of
    from .linalg import solve

    F = field_of(p, 1)
    k = mats.shape[1]
    spaces = [np.eye(k, dtype=np.int64)]  # columns span the subspace
    done = []
    while spaces:
        B = spaces.pop()
        if B.shape[1] == 1:
            done.append(B[:, 0])
            continue
        split = False
        for A in mats:
            AB = (A % p) @ B % p
            R = solve(F, B, AB)  # B R = A B
            if R is None:
                raise RuntimeError("subspace not invariant")
            if np.array_equal(R, (R[0, 0] * np.eye(R.shape[0], dtype=np.int64)) % p):
                continue
            pieces = []
            for lam in _charpoly_roots(R, p):
                ns = _nullspace_mod((R - lam * np.eye(R.shape[0], dtype=np.int64)) % p, p)
                pieces.append(B @ ns.T % p)
            if sum(P.shape[1] for P in pieces) != B.shape[1]:
                raise RuntimeError("class matrix not diagonalisable modulo p")
            spaces.extend(pieces)
            split = True
            break
        if not split:
            raise RuntimeError("class algebra failed to separate characters")
    return done


_table_lock = threading.Lock()
_table_cache: dict[int, list] = {}


def character_table(G: FiniteGroup) -> list[ClassFunction]:
    """All irreducible characters of G, ordered by degree then by value vectors."""
    with _table_lock:
        key = id(G)
        if key in _table_cache and _table_cache[key][0] is G:
            return _table_cache[key][1]
    if G.order > max_order():
        raise ResourceError(f"|G| = {G.order} exceeds bound {max_order()}")
    k = len(G.classes)
    if k > CLASS_BOUND:
        raise ResourceError(f"{k} classes exceeds bound {CLASS_BOUND}")
    rows = _dixon(G)
    rows.sort(key=lambda r: r.sort_key())
    with _table_lock:
        _table_cache[id(G)] = (G, rows)
    return rows


def _dixon(G: FiniteGroup) -> list[ClassFunction]:
    k = len(G.classes)
    if G.order == 1:
        return [ClassFunction(G, [1], True, True)]
    p = _dixon_prime(G)
    e = G.exponent
    r = primitive_root(p)
    mats = class_matrices(G)
    vecs = _simultaneous_eigenvectors(mats, p)
    sizes = np.array([c.size for c in G.classes], dtype=np.int64)
    inv_class = np.array([G.class_of[G.inv[c.representative]] for c in G.classes])
    orders = [c.element_order for c in G.classes]
    powmaps = {}
    rows = []
    for w in vecs:
        w = w * pow(int(w[0]), -1, p) % p
        s = sum(int(w[l]) * int(w[inv_class[l]]) * pow(int(sizes[l]), -1, p) for l in range(k)) % p
        d2 = G.order * pow(s, -1, p) % p
        d = next(x for x in range(1, math.isqrt(G.order) + 1) if x * x % p == d2)
        chi = [int(w[l]) * d * pow(int(sizes[l]), -1, p) % p for l in range(k)]
        values = []
        for l in range(k):
            o = orders[l]
            zo = pow(r, (p - 1) // o, p)
            cls_pows = []
            for j in range(o):
                if (l, j) not in powmaps:
                    powmaps[(l, j)] = int(G.class_of[G.power(G.classes[l].representative, j)])
                cls_pows.append(powmaps[(l, j)])
            oinv = pow(o, -1, p)
            exps = {}
            for j in range(o):
                m = sum(chi[cls_pows[t]] * pow(zo, (-j * t) % o, p) for t in range(o)) * oinv % p
                if m:
                    if m > d:
                        raise RuntimeError("eigenvalue multiplicity out of range; Dixon lift failed")
                    exps[j * (e // o)] = m
            values.append(CycloNumber.from_exponents(e, exps))
        rows.append(ClassFunction(G, values, irreducible=True, character=True))
    return rows


def numeric_character_table(G: FiniteGroup, seed: int = 0):
    """Floating-point Burnside table (independent oracle for small groups).

    Returns an array (characters x classes) of complex values, rows in no fixed order.
    """
    k = len(G.classes)
    mats = class_matrices(G).astype(float)
    rng = np.random.default_rng(seed)
    A = np.tensordot(rng.standard_normal(k), mats, axes=1)
    _, V = np.linalg.eig(A)
    sizes = np.array([c.size for c in G.classes], dtype=float)
    inv_class = np.array([G.class_of[G.inv[c.representative]] for c in G.classes])
    rows = []
    for col in V.T:
        w = col / col[0]
        s = np.sum(w * w[inv_class] / sizes)
        d = np.sqrt((G.order / s).real)
        rows.append(w * d / sizes)
    return np.array(rows)


# ---------------------------------------------------------------------------


def _class_map(N: FiniteGroup, G: FiniteGroup):
    """Class of G containing each class representative of N."""
    emb = N.embedding_into(G)
    return np.array([G.class_of[emb[c.representative]] for c in N.classes], dtype=np.int64)


def restrict(chi: ClassFunction, N: FiniteGroup) -> ClassFunction:
    G = chi.group
    try:
        cm = _class_map(N, G)
    except StructureError:
        raise StructureError("N is not a subgroup of the character's group") from None
    return ClassFunction(N, [chi.values[c] for c in cm], character=chi.character)


def induce(theta: ClassFunction, G: FiniteGroup) -> ClassFunction:
    """theta^G(g) = |C_G(g)|/|N| * sum over n in g^G cap N of theta(n)."""
    N = theta.group
    try:
        emb = N.embedding_into(G)
    except StructureError:
        raise StructureError("N is not a subgroup of G") from None
    K = math.lcm(G.exponent, max(v.K for v in theta.values))
    sums = [CycloNumber.rational(0, K) for _ in G.classes]
    gcls = G.class_of[emb]
    for i, n in enumerate(range(N.order)):
        sums[gcls[i]] = sums[gcls[i]] + theta.values[N.class_of[n]]
    vals = [s * Fraction(int(G.centralizer_orders[c]), N.order) for c, s in enumerate(sums)]
    return ClassFunction(G, vals, character=theta.character)


def trivial_character(G: FiniteGroup) -> ClassFunction:
    return ClassFunction(G, [1] * len(G.classes), True, True)


def conjugate_class_function(theta: ClassFunction, G: FiniteGroup, g: int) -> ClassFunction:
    """theta^g(x) = theta(g x g^-1) for theta on a normal subgroup N of G, g in G."""
    N = theta.group
    perm = conjugation_class_permutation(N, G, g)
    return ClassFunction(N, [theta.values[perm[c]] for c in range(len(N.classes))],
                         theta.irreducible, theta.character)


def conjugation_class_permutation(N: FiniteGroup, G: FiniteGroup, g: int, classes=None):
    """For each class c of N, the class of g r_c g^-1 (r_c its representative)."""
    emb = N.embedding_into(G)
    lookup = -np.ones(G.order, dtype=np.int64)
    lookup[emb] = np.arange(N.order)
    ginv = int(G.inv[g])
    out = []
    cls = N.classes if classes is None else [N.classes[c] for c in classes]
    for c in cls:
        x = int(G.conj(emb[c.representative], ginv))
        y = lookup[x]
        if y < 0:
            raise StructureError("element does not normalise the subgroup")
        out.append(int(N.class_of[y]))
    return out


def central_character(theta, Z: FiniteGroup, ell: int | None = None) -> dict:
    """The linear character nu of Z (of its l'-part for Brauer characters) with theta_Z = theta(1) nu.

    ``theta`` may be a ClassFunction or a BrauerCharacter of a group containing Z
    centrally.  Returns a mapping from Z element index to CycloNumber value.
    """
    H = theta.group
    emb = Z.embedding_into(H)
    for z in emb:
        for g in H.gens:
            if H.mul(z, g) != H.mul(g, z):
                raise StructureError("Z is not central")
    deg = theta.degree
    nu = {}
    for i, z in enumerate(emb):
        o = int(Z.element_orders[i])
        if ell is not None and o % ell == 0:
            continue
        v = theta(int(z)) / deg
        nu[i] = v
    return nu


def table_to_tsv(G: FiniteGroup, rows) -> str:
    head = ["char"] + [f"{c.index}:o{c.element_order}:s{c.size}" for c in G.classes]
    lines = ["\t".join(head)]
    for i, r in enumerate(rows):
        lines.append("\t".join([f"X{i}"] + [repr(v) for v in r.values]))
    return "\n".join(lines) + "\n"


def table_to_json(G: FiniteGroup, rows) -> dict:
    return {
        "group": G.name,
        "order": G.order,
        "classes": [{"index": c.index, "representative": list(G.perm(c.representative)), "size": c.size,
                     "element_order": c.element_order} for c in G.classes],
        "characters": [r.to_json() for r in rows],
    }
