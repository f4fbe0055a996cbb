"""The (m)-relation between modular character triples and fake Galois actions on IBr(N).

Two triples (G, N, theta) and (G, N, theta') are (m)-related when there are projective
representations P, P' associated with them such that

* for c in C_G(N) the scalars P(c) = xi and P'(c) = xi^m, and
* the factor sets satisfy alpha^m = alpha'.

Every projective representation associated with a triple is P0 * c for the canonical P0 of
:func:`associated_projective` and a scaling function c on G/N with c(N) = 1.  Taking discrete
logarithms turns the two conditions into a linear system over Z/e, solved exactly through
the Smith normal form.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sympy import Matrix, primefactors
from sympy.matrices.normalforms import smith_normal_decomp

from .clifford import (FieldTooSmall, ModularCharacterTriple, PreconditionError, extend_character,
                       homs_to_cyclic, is_stable, linear_brauer_characters, make_triple, rebase,
                       rebase_character, stabilizer_of_character, working_field)
from .gf import GF, ell_part, field_tower
from .grp import CosetTransversal, FiniteGroup, GroupMap, StructureError, quotient
from .modrep import (BrauerCharacter, MatrixRep, act_on_brauer, bar, index_in, irr_brauer, sigma_twist)
from .projrep import ProjectiveRep, projective_from_rep, scalars_between

SCOPE = "relative to the parametrisation P0 * c by scaling functions with values in mu_e"


class RecipeInapplicable(ValueError):
    pass


def _check_coprime(m: int, N: FiniteGroup):
    if math.gcd(m, N.order) != 1:
        raise PreconditionError(f"the (m, |N|) = 1 hypothesis fails: gcd({m}, {N.order}) = "
                                f"{math.gcd(m, N.order)}")


def m_part(e: int, m: int) -> int:
    """The part of e made of primes dividing m."""
    out = 1
    for p in primefactors(math.gcd(e, m)):
        while e % (out * p) == 0:
            out *= p
    return out


def _order(F: GF, vals) -> int:
    vals = np.asarray(vals, dtype=np.int64).ravel()
    if vals.size == 0:
        return 1
    Q = F.q - 1
    logs = F.log(vals)
    return int(np.lcm.reduce(Q // np.gcd(logs, Q)))


# ---------------------------------------------------------------------------
# canonical data of a pair of triples


@dataclass
class _Canonical:
    """Coset-level data of the canonical projective representations of two triples."""

    G: FiniteGroup
    N: FiniteGroup
    F: GF
    e: int
    T: CosetTransversal
    P0: ProjectiveRep
    P0b: ProjectiveRep
    D: MatrixRep
    Db: MatrixRep
    C: np.ndarray  # elements of C_G(N)
    alpha: np.ndarray  # coset tables, field encodings
    alphab: np.ndarray
    s: np.ndarray  # scalars P0(z) for z in C
    sb: np.ndarray

    @property
    def k(self) -> int:
        return len(self.T)

    def logs(self, vals) -> np.ndarray:
        """Logarithms to the base of the chosen primitive e-th root."""
        step = (self.F.q - 1) // self.e
        L = self.F.log(np.asarray(vals, dtype=np.int64))
        if np.any(L % step):
            raise FieldTooSmall(self.e)
        return (L // step) % self.e

    def root(self, u) -> np.ndarray:
        return self.F.exp(np.asarray(u, dtype=np.int64) * ((self.F.q - 1) // self.e))


def _align(T: ModularCharacterTriple, T2: ModularCharacterTriple) -> MatrixRep:
    """T2's representation re-indexed over T's copy of N."""
    if T2.G is not T.G and not (T2.G.order == T.G.order and all(T.G.contains_perm(p) for p in T2.G.perms[T2.G.gens])):
        raise PreconditionError("the triples do not share the group G")
    if T2.N is T.N:
        return T2.rep
    idx = np.array([T2.N.index(p) for p in T.N.perms])
    if T2.N.order != T.N.order:
        raise PreconditionError("the triples do not share the normal subgroup N")
    return MatrixRep.from_matrices(T.N, T2.rep.field, T2.rep.matrices[idx])


def _coset_alpha(F: GF, P: ProjectiveRep, T: CosetTransversal) -> np.ndarray:
    G = P.group
    reps = T.reps
    k = len(reps)
    out = np.ones((k, k), dtype=np.int64)
    for j in range(k):
        prod = F.matmul(P.mats[reps], P.mats[reps[j]])
        out[:, j] = scalars_between(F, prod, P.mats[np.asarray(G.mul(reps, reps[j]))])
    return out


def _centre_scalars(F: GF, P: ProjectiveRep, C: np.ndarray) -> np.ndarray:
    mats = P.mats[C]
    s = mats[:, 0, 0]
    eye = np.eye(P.dim, dtype=np.int64)
    if not np.array_equal(F.mul(s[:, None, None], eye[None]), mats):
        raise PreconditionError("P0 is not scalar on C_G(N); theta is not absolutely irreducible")
    return s


def canonical_data(T: ModularCharacterTriple, T2: ModularCharacterTriple) -> _Canonical:
    G, N, ell = T.G, T.N, T.ell
    if not is_stable(T.theta, G):
        raise PreconditionError("theta is not G-stable (use make_triple to pass to the stabiliser)")
    D2 = _align(T, T2)
    e = ell_part(G.order, ell)
    F = field_tower(ell, math.lcm(working_field(G, ell).q - 1, T.rep.field.q - 1, D2.field.q - 1, e))
    D = T.rep.to_field(F)
    D2 = D2.to_field(F)
    Tr = CosetTransversal(G, N)
    P0 = projective_from_rep(G, N, D)
    P0b = projective_from_rep(G, N, D2)
    C = G.centralizer(N.embedding_into(G)[N.gens]).embedding_into(G)
    alpha, alphab = _coset_alpha(F, P0, Tr), _coset_alpha(F, P0b, Tr)
    s, sb = _centre_scalars(F, P0, C), _centre_scalars(F, P0b, C)
    e = math.lcm(e, _order(F, alpha), _order(F, alphab), _order(F, s), _order(F, sb))
    return _Canonical(G, N, F, e, Tr, P0, P0b, D, D2, C, alpha, alphab, s, sb)


# ---------------------------------------------------------------------------
# the linear system


def _delta_rows(can: _Canonical) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Rows of the coboundary (delta u)(i, j) = u_i + u_j - u_{ij} on the unknowns u_1..u_{k-1}."""
    G, T = can.G, can.T
    k = can.k
    rows, pairs = [], []
    for i in range(k):
        prods = T.coset_of[np.asarray(G.mul(T.reps[i], T.reps))]
        for j in range(k):
            r = np.zeros(k, dtype=np.int64)
            r[i] += 1
            r[j] += 1
            r[prods[j]] -= 1
            rows.append(r[1:])
            pairs.append((i, j))
    return np.array(rows, dtype=np.int64).reshape(len(rows), k - 1), pairs


def build_system(can: _Canonical, m: int, strict: bool = True):
    """(M, b) with M x = b (mod e) for x = (u_1..u_{k-1}, u'_1..u'_{k-1})."""
    e = can.e
    m = m % e
    k = can.k
    A, Ab = can.logs(can.alpha), can.logs(can.alphab)
    S, Sb = can.logs(can.s), can.logs(can.sb)
    delta, pairs = _delta_rows(can)
    rows, rhs = [], []
    # alpha^m = alpha'
    for (i, j), r in zip(pairs, delta):
        rows.append(np.concatenate([m * r, -r]))
        rhs.append(Ab[i, j] - m * A[i, j])
    # xi' = xi^m on C_G(N)
    cos = can.T.coset_of[can.C]
    for z in range(len(can.C)):
        r = np.zeros(2 * (k - 1), dtype=np.int64)
        c = int(cos[z])
        if c:
            r[c - 1] += m
            r[k - 1 + c - 1] -= 1
        rows.append(r)
        rhs.append(Sb[z] - m * S[z])
    em = m_part(e, m)
    if strict and em > 1:
        f = e // em
        for (i, j), r in zip(pairs, delta):
            rows.append(np.concatenate([f * r, 0 * r]))
            rhs.append(-f * A[i, j])
        for z in range(len(can.C)):
            r = np.zeros(2 * (k - 1), dtype=np.int64)
            c = int(cos[z])
            if c:
                r[c - 1] = f
            rows.append(r)
            rhs.append(-f * S[z])
    M = np.array(rows, dtype=np.int64).reshape(len(rows), 2 * (k - 1)) % e
    b = np.array(rhs, dtype=np.int64) % e
    both = np.unique(np.column_stack([M, b]), axis=0)
    return both[:, :-1], both[:, -1]


def solve_mod(M: np.ndarray, b: np.ndarray, e: int) -> np.ndarray | None:
    """A solution of M x = b (mod e), or None; exact, via the Smith normal form D = U M V."""
    rows, cols = M.shape
    if cols == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(b % e) else None
    D, U, V = smith_normal_decomp(Matrix(M.tolist()))
    Ub = [int(x) % e for x in U * Matrix([int(x) for x in b])]
    y = [0] * cols
    for i in range(rows):
        d = int(D[i, i]) if i < cols else 0
        if d == 0:
            if Ub[i] % e:
                return None
            continue
        g = math.gcd(d, e)
        if Ub[i] % g:
            return None
        y[i] = (Ub[i] // g) * pow(d // g, -1, e // g) % (e // g) if e // g > 1 else 0
    x = np.array([int(v) % e for v in V * Matrix(y)], dtype=np.int64)
    if np.any((M @ x - b) % e):
        raise ArithmeticError("Smith normal form back-substitution failed")
    return x


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class MApproxWitness:
    """Projective representations P, P' certifying (G, N, theta)^(m) ~ (G, N, theta')."""

    m: int
    P: ProjectiveRep
    P2: ProjectiveRep
    c: np.ndarray  # scaling on cosets (field encodings), P = P0 c
    c2: np.ndarray
    xi: list  # (z, xi, xi^m) for z in C_G(N)
    field: GF
    e: int
    strict: bool = True
    source: str = "solver"
    status: str = "witness"

    @property
    def alpha_order(self) -> int:
        return self.P.factor_set_order()

    @property
    def xi_orders(self) -> list[int]:
        return sorted({_order(self.field, [x]) for _, x, _ in self.xi})

    def to_json(self) -> dict:
        F = self.field
        return {"m": self.m, "e": self.e, "strict": self.strict, "source": self.source,
                "field": F.to_json(),
                "c_log": F.log(self.c).tolist(), "c2_log": F.log(self.c2).tolist(),
                "xi": [[int(z), int(F.log(x)), int(F.log(y))] for z, x, y in self.xi],
                "alpha_order": self.alpha_order, "xi_orders": self.xi_orders}


@dataclass
class Refutation:
    m: int
    e: int
    strict: bool
    reason: str
    scope: str = SCOPE
    status: str = "refuted"

    def to_json(self) -> dict:
        return {"m": self.m, "e": self.e, "strict": self.strict, "reason": self.reason, "scope": self.scope,
                "status": self.status}


def _witness_from(can: _Canonical, m: int, u, ub, strict: bool, source: str) -> MApproxWitness:
    F = can.F
    c = can.root(np.concatenate([[0], u]))
    c2 = can.root(np.concatenate([[0], ub]))
    cf = c[can.T.coset_of]
    c2f = c2[can.T.coset_of]
    P = can.P0.scale(cf)
    P2 = can.P0b.scale(c2f)
    xi = [(int(z), int(P.mats[z][0, 0]), int(P2.mats[z][0, 0])) for z in can.C]
    return MApproxWitness(m, P, P2, c, c2, xi, F, can.e, strict, source)


def check_m_approx(T: ModularCharacterTriple, T2: ModularCharacterTriple, m: int, strict: bool = True,
                   can: _Canonical | None = None):
    """Decide (G, N, theta)^(m) ~ (G, N, theta'); returns MApproxWitness or Refutation."""
    _check_coprime(m, T.N)
    can = can or canonical_data(T, T2)
    M, b = build_system(can, m, strict)
    x = solve_mod(M, b, can.e)
    if x is None:
        return Refutation(m, can.e, strict, f"linear system over Z/{can.e} ({M.shape[0]} x {M.shape[1]}) "
                                            "is inconsistent")
    k = can.k
    return _witness_from(can, m, x[:k - 1], x[k - 1:], strict, "solver")


def brute_force_m_approx(T: ModularCharacterTriple, T2: ModularCharacterTriple, m: int, strict: bool = True,
                         can: _Canonical | None = None, limit: int = 2_000_000) -> bool:
    """Enumerate every pair of scaling functions G/N -> mu_e and test the conditions directly."""
    _check_coprime(m, T.N)
    can = can or canonical_data(T, T2)
    F, G, Tr = can.F, can.G, can.T
    k, e = can.k, can.e
    if e ** (k - 1) > limit:
        raise ValueError("search space too large for exhaustive enumeration")
    cos_C = Tr.coset_of[can.C]
    prod_cos = np.array([Tr.coset_of[np.asarray(G.mul(Tr.reps[i], Tr.reps))] for i in range(k)])
    Q = F.q - 1

    def table(alpha, s, cs):
        # cs: (n, k) scalings as field encodings; returns alpha_c (n, k, k) and xi (n, |C|)
        a = F.mul(F.mul(alpha[None], cs[:, :, None]), cs[:, None, :])
        a = F.mul(a, F.inv(cs[:, prod_cos]))
        return a, F.mul(s[None], cs[:, cos_C])

    grid = np.array(list(itertools.product(range(e), repeat=k - 1)), dtype=np.int64).reshape(-1, k - 1)
    cs = can.root(np.column_stack([np.zeros(len(grid), dtype=np.int64), grid]))
    a, xi = table(can.alpha, can.s, cs)
    ab, xib = table(can.alphab, can.sb, cs)
    if strict:
        ok = np.ones(len(cs), dtype=bool)
        for vals in (a.reshape(len(cs), -1), xi):
            orders = Q // np.gcd(F.log(vals), Q)
            ok &= np.all(np.gcd(orders, m) == 1, axis=1)
        a, xi = a[ok], xi[ok]
    left = {np.concatenate([F.power(a[i].ravel(), m), F.power(xi[i], m)]).tobytes() for i in range(len(a))}
    right = (np.concatenate([ab[i].ravel(), xib[i]]).tobytes() for i in range(len(ab)))
    return any(key in left for key in right)


@dataclass
class VerificationReport:
    ok: bool
    failures: list = field(default_factory=list)


def verify_witness(w: MApproxWitness, D: MatrixRep, D2: MatrixRep, G: FiniteGroup, N: FiniteGroup
                   ) -> VerificationReport:
    """Re-check a witness from its matrices alone (no use of the solver's logs)."""
    F = w.field
    fails = []
    D, D2 = D.to_field(F), D2.to_field(F)
    for name, P, Dx in (("P", w.P, D), ("P'", w.P2, D2)):
        if not P.is_associated_with(MatrixRep.from_matrices(N, F, Dx.matrices)):
            fails.append(f"{name} is not associated with its representation of N")
    idx = np.arange(G.order)
    for h in range(G.order):
        gh = np.asarray(G.mul(idx, h))
        a = scalars_between(F, F.matmul(w.P.mats, w.P.mats[h]), w.P.mats[gh])
        a2 = scalars_between(F, F.matmul(w.P2.mats, w.P2.mats[h]), w.P2.mats[gh])
        if not np.array_equal(F.power(a, w.m), a2):
            fails.append(f"alpha(g, {h})^m != alpha'(g, {h})")
            break
        if w.strict and math.gcd(_order(F, a), w.m) != 1:
            fails.append(f"alpha(g, {h}) has order not coprime to m")
            break
    C = G.centralizer(N.embedding_into(G)[N.gens]).embedding_into(G)
    eye, eye2 = np.eye(w.P.dim, dtype=np.int64), np.eye(w.P2.dim, dtype=np.int64)
    for z in C:
        x, y = int(w.P.mats[z][0, 0]), int(w.P2.mats[z][0, 0])
        if not (np.array_equal(w.P.mats[z], F.smul(x, eye)) and np.array_equal(w.P2.mats[z], F.smul(y, eye2))):
            fails.append(f"P({z}) or P'({z}) is not scalar")
        elif int(F.power(x, w.m)) != y:
            fails.append(f"xi'({z}) != xi({z})^m")
        elif w.strict and math.gcd(_order(F, [x]), w.m) != 1:
            fails.append(f"xi({z}) has order not coprime to m")
    return VerificationReport(not fails, fails)


# ---------------------------------------------------------------------------
# the cyclic shortcut


@dataclass
class NotApplicable:
    reason: str
    status: str = "not-applicable"


def outer_quotient(G: FiniteGroup, N: FiniteGroup):
    """G / N C_G(N) and whether it is cyclic."""
    C = G.centralizer(N.embedding_into(G)[N.gens])
    mask = np.zeros(G.order, dtype=bool)
    mask[np.asarray(G.mul(N.embedding_into(G)[:, None], C.embedding_into(G)[None, :])).ravel()] = True
    NC = G.subgroup_from_members(np.nonzero(mask)[0], name="NC")
    Q, _ = quotient(G, NC)
    return Q, Q.order == 1 or int(Q.element_orders.max()) == Q.order


def cyclic_outer_shortcut(T: ModularCharacterTriple, T2: ModularCharacterTriple, m: int, strict: bool = True):
    """Witness from extensions (trivial factor sets) twisted by linear characters of G/N."""
    _check_coprime(m, T.N)
    G, N = T.G, T.N
    _, cyc = outer_quotient(G, N)
    if not cyc:
        return NotApplicable("G / N C_G(N) is not cyclic")
    Qg, _ = quotient(G, N)
    if not (Qg.order == 1 or int(Qg.element_orders.max()) == Qg.order):
        return NotApplicable("G/N is not cyclic, so extensions are not produced directly")
    can = canonical_data(T, T2)
    _, R = extend_character(_character_of(can.D, T.ell), G, can.D)
    _, R2 = extend_character(_character_of(can.Db, T.ell), G, can.Db)
    F = field_tower(T.ell, math.lcm(R.field.q - 1, R2.field.q - 1, can.F.q - 1))
    R, R2 = R.to_field(F), R2.to_field(F)
    lams = linear_brauer_characters(G, N, F)
    C = can.C
    xi = R.matrices[C][:, 0, 0]
    xi2 = R2.matrices[C][:, 0, 0]
    for lam in lams:
        x = F.mul(xi, lam.table[C])
        if strict and math.gcd(_order(F, x), m) != 1:
            continue
        for mu in lams:
            if np.array_equal(F.power(x, m), F.mul(xi2, mu.table[C])):
                P = ProjectiveRep(G, F, F.mul(R.matrices, lam.table[:, None, None]), N)
                P2 = ProjectiveRep(G, F, F.mul(R2.matrices, mu.table[:, None, None]), N)
                reps = can.T.reps
                P0 = can.P0.to_field(F)
                P0b = can.P0b.to_field(F)
                c = scalars_between(F, P.mats[reps], P0.mats[reps])
                c2 = scalars_between(F, P2.mats[reps], P0b.mats[reps])
                xis = [(int(z), int(P.mats[z][0, 0]), int(P2.mats[z][0, 0])) for z in C]
                e = math.lcm(can.e, _order(F, c), _order(F, c2))
                return MApproxWitness(m, P, P2, c, c2, xis, F, e, strict, "shortcut", "shortcut")
    return NotApplicable("no pair of linear twists satisfies the central character condition")


def _character_of(D: MatrixRep, ell: int) -> BrauerCharacter:
    from .modrep import brauer_character

    return brauer_character(D, ell)


def minimal_alpha_order(T: ModularCharacterTriple) -> int:
    """Least order of a factor set of a projective representation associated with T (over mu_e)."""
    can = canonical_data(T, T)
    e = can.e
    A = can.logs(can.alpha)
    delta, pairs = _delta_rows(can)
    rhs = np.array([A[i, j] for i, j in pairs], dtype=np.int64)
    for r in sorted(d for d in range(1, e + 1) if e % d == 0):
        # alpha_c^r = 1  <=>  r (A + delta u) = 0 mod e
        if solve_mod((r * delta) % e, (-r * rhs) % e, e) is not None:
            return r
    return e


# ---------------------------------------------------------------------------
# recipes


@dataclass
class CandidateRecipe:
    """A map theta -> theta' built from bar and sigma, chosen by the residue of m.

    tag: identity | bar | sigma | bar-sigma | piecewise-r | k-pair | table
    """

    tag: str
    r: int | None = None
    k: tuple[int, int] | None = None
    sigma_power: int = 1
    table: dict | None = None

    def describe(self) -> str:
        if self.tag == "piecewise-r":
            return f"piecewise-r(r={self.r if self.r else 'auto'})"
        if self.tag == "k-pair":
            return f"k-pair{self.k}"
        return self.tag


def r_theta(G: FiniteGroup, N: FiniteGroup, theta: BrauerCharacter) -> tuple[int, str]:
    """exp(Z(N)) when the outer stabiliser is cyclic, else the least achievable factor set order."""
    Gt = stabilizer_of_character(G, theta)
    Nt = rebase(N, Gt)
    _, cyc = outer_quotient(Gt, Nt)
    if cyc:
        return N.center().exponent, "exp(Z)"
    T = make_triple(Gt, Nt, rebase_character(theta, Nt))
    return minimal_alpha_order(T), "measured factor set order"


def _sigma(theta: BrauerCharacter, j: int) -> BrauerCharacter:
    return sigma_twist(theta, j) if j else theta


def apply_recipe(recipe: CandidateRecipe, theta: BrauerCharacter, m: int, G: FiniteGroup | None = None,
                 ibr: list | None = None) -> BrauerCharacter:
    tag = recipe.tag
    if tag == "identity":
        return theta
    if tag == "bar":
        return bar(theta)
    if tag == "sigma":
        return _sigma(theta, recipe.sigma_power)
    if tag == "bar-sigma":
        return bar(_sigma(theta, recipe.sigma_power))
    if tag == "table":
        if ibr is None:
            raise RecipeInapplicable("a table recipe needs the list IBr(N)")
        return ibr[recipe.table[index_in(theta, ibr)]]
    if tag == "piecewise-r":
        r = recipe.r
        if r is None:
            if G is None:
                raise RecipeInapplicable("the r_theta rule needs the overgroup G")
            r, _ = r_theta(G, theta.group, theta)
        if math.gcd(m, r) != 1:
            raise RecipeInapplicable(f"m = {m} is not coprime to r = {r}")
        if (m - 1) % r == 0:
            return theta
        if (m + 1) % r == 0:
            return bar(theta)
        raise RecipeInapplicable(f"m = {m} is neither 1 nor -1 modulo r = {r}")
    if tag == "k-pair":
        k1, k2 = recipe.k
        s1 = 1 if (m - 1) % k1 == 0 else (-1 if (m + 1) % k1 == 0 else 0)
        s2 = 1 if (m - 1) % k2 == 0 else (-1 if (m + 1) % k2 == 0 else 0)
        if not (s1 and s2):
            raise RecipeInapplicable(f"m = {m} is not +-1 modulo both {k1} and {k2}")
        out = _sigma(theta, recipe.sigma_power) if s1 < 0 else theta
        return bar(out) if s2 < 0 else out
    raise ValueError(f"unknown recipe tag {tag!r}")


def search_pool(ibr: list[BrauerCharacter]) -> list[tuple[str, list[int]]]:
    """Closure of {identity, bar, sigma} under composition, as permutations of IBr indices."""
    n = len(ibr)
    b = [index_in(bar(t), ibr) for t in ibr]
    s = [index_in(sigma_twist(t, 1), ibr) for t in ibr]
    pool = {tuple(range(n)): "identity"}
    frontier = [tuple(range(n))]
    while frontier:
        nxt = []
        for p in frontier:
            for gname, g in (("bar", b), ("sigma", s)):
                q = tuple(g[i] for i in p)
                if q not in pool:
                    pool[q] = f"{gname}*{pool[p]}" if pool[p] != "identity" else gname
                    nxt.append(q)
        frontier = nxt
    return [(name, list(p)) for p, name in pool.items()]


# ---------------------------------------------------------------------------
# fake Galois actions


def conjugation_permutations(G: FiniteGroup, ibr: list[BrauerCharacter]) -> list[list[int]]:
    """For each generator g of G, the permutation theta -> theta^g of IBr(N)."""
    return [[index_in(act_on_brauer(t, G, g), ibr) for t in ibr] for g in G.gens]


def orbits_of(perms: list[list[int]], n: int) -> list[list[int]]:
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        orb, stack = [], [i]
        seen[i] = True
        while stack:
            x = stack.pop()
            orb.append(x)
            for p in perms:
                if not seen[p[x]]:
                    seen[p[x]] = True
                    stack.append(p[x])
        out.append(sorted(orb))
    return out


def equivariance_violation(f: list[int], perms: list[list[int]]):
    """First (theta index, generator index) with f(theta^g) != f(theta)^g, or None."""
    for gi, p in enumerate(perms):
        for i in range(len(f)):
            if f[p[i]] != p[f[i]]:
                return i, gi
    return None


@dataclass
class OrbitResult:
    theta: int
    target: int
    orbit: list
    status: str  # witness | shortcut | refuted
    witness: MApproxWitness | None = None
    refutation: Refutation | None = None
    stabilizer_order: int = 0
    reverified: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"theta": self.theta, "target": self.target, "orbit": self.orbit, "status": self.status,
               "stabilizer_order": self.stabilizer_order, "reverified": self.reverified}
        if self.witness is not None:
            out["xi_orders"] = self.witness.xi_orders
            out["alpha_order"] = self.witness.alpha_order
        else:
            out["xi_orders"] = []
            out["alpha_order"] = None
            out["reason"] = self.refutation.reason if self.refutation else ""
        return out


@dataclass
class FakeGaloisMap:
    G: FiniteGroup
    N: FiniteGroup
    ell: int
    m: int
    perm: list
    orbits: list  # OrbitResult per orbit
    recipe: str
    equivariant: bool = True

    @property
    def witnesses(self) -> list:
        return [o.witness for o in self.orbits]

    def to_json(self) -> dict:
        return {"group": self.G.name, "normal": self.N.name, "ell": self.ell, "m": self.m, "recipe": self.recipe,
                "map": self.perm, "orbits": [o.to_json() for o in self.orbits], "equivariant": self.equivariant,
                "verdict": "verified"}


@dataclass
class FakeGaloisFailure:
    G: FiniteGroup
    N: FiniteGroup
    ell: int
    m: int
    recipe: str
    reason: str
    perm: list | None = None
    violation: tuple | None = None  # (theta index, generator element of G)
    orbits: list = field(default_factory=list)
    equivariant: bool = False

    def to_json(self) -> dict:
        out = {"group": self.G.name, "normal": self.N.name, "ell": self.ell, "m": self.m, "recipe": self.recipe,
               "map": self.perm, "orbits": [o.to_json() for o in self.orbits], "equivariant": self.equivariant,
               "verdict": "failure", "reason": self.reason}
        if self.violation is not None:
            out["violation"] = {"theta": self.violation[0], "g": self.violation[1]}
        return out


class FakeGaloisContext:
    """Per (G, N, l) data shared across values of m."""

    def __init__(self, G: FiniteGroup, N: FiniteGroup, ell: int, seed: int = 0, ibr=None):
        if not N.is_normal_in(G):
            raise StructureError("N is not normal in G")
        self.G, self.N, self.ell = G, N, ell
        self.ibr = ibr if ibr is not None else irr_brauer(N, ell, seed)
        self.perms = conjugation_permutations(G, self.ibr)
        self.orbits = orbits_of(self.perms, len(self.ibr))
        self._triples = {}
        self._canon = {}
        self._r = {}

    def triple(self, i: int) -> ModularCharacterTriple:
        if i not in self._triples:
            theta = self.ibr[i]
            Gt = stabilizer_of_character(self.G, theta)
            Nt = rebase(self.N, Gt)
            self._triples[i] = make_triple(Gt, Nt, rebase_character(theta, Nt))
        return self._triples[i]

    def pair(self, i: int, j: int):
        T = self.triple(i)
        T2 = make_triple(T.G, T.N, rebase_character(self.ibr[j], T.N))
        if T2.G is not T.G:
            raise PreconditionError("the target is not stable under the stabiliser of theta")
        key = (i, j)
        if key not in self._canon:
            self._canon[key] = canonical_data(T, T2)
        return T, T2, self._canon[key]

    def r_theta(self, i: int) -> int:
        if i not in self._r:
            self._r[i] = r_theta(self.G, self.N, self.ibr[i])[0]
        return self._r[i]


def _check_orbit(ctx: FakeGaloisContext, orbit, i: int, j: int, m: int, strict: bool, use_shortcut: bool) -> OrbitResult:
    T, T2, can = ctx.pair(i, j)
    res = None
    if use_shortcut:
        sc = cyclic_outer_shortcut(T, T2, m, strict)
        if isinstance(sc, MApproxWitness):
            res = sc
    if res is None:
        res = check_m_approx(T, T2, m, strict, can=can)
    out = OrbitResult(i, j, orbit, res.status, stabilizer_order=T.G.order)
    if isinstance(res, MApproxWitness):
        out.witness = res
        rep = verify_witness(res, can.D, can.Db, T.G, T.N)
        out.reverified = rep.ok
        if not rep.ok:
            out.status = "refuted"
            out.notes.extend(rep.failures)
            out.refutation = Refutation(m, can.e, strict, "witness failed independent re-verification")
    else:
        out.refutation = res
    return out


def _recipe_map(ctx: FakeGaloisContext, recipe: CandidateRecipe, m: int) -> list[int]:
    out = []
    for i, t in enumerate(ctx.ibr):
        if recipe.tag == "piecewise-r" and recipe.r is None:
            rec = CandidateRecipe("piecewise-r", r=ctx.r_theta(i))
        else:
            rec = recipe
        out.append(index_in(apply_recipe(rec, t, m, ctx.G, ctx.ibr), ctx.ibr))
    return out


def verify_fake_galois(G: FiniteGroup, N: FiniteGroup, ell: int, m: int, recipe="auto", strict: bool = True,
                       jobs: int = 1, seed: int = 0, all_theta: bool = False, use_shortcut: bool = True,
                       context: FakeGaloisContext | None = None):
    """Verify a G-equivariant f_m on IBr(N) with (G_theta, N, theta)^(m) ~ (G_theta, N, f_m(theta)).

    ``recipe`` is a CandidateRecipe, "auto" (piecewise-r with the r_theta rule) or "search".
    Returns FakeGaloisMap or FakeGaloisFailure.
    """
    _check_coprime(m, N)
    ctx = context or FakeGaloisContext(G, N, ell, seed)
    if recipe == "auto":
        recipe = CandidateRecipe("piecewise-r")
    if recipe == "search":
        return _search(ctx, m, strict, jobs, all_theta, use_shortcut)
    name = recipe.describe()
    try:
        f = _recipe_map(ctx, recipe, m)
    except RecipeInapplicable as exc:
        return FakeGaloisFailure(G, N, ell, m, name, f"recipe inapplicable: {exc}")
    if sorted(f) != list(range(len(f))):
        return FakeGaloisFailure(G, N, ell, m, name, "recipe is not a bijection", perm=f)
    viol = equivariance_violation(f, ctx.perms)
    if viol is not None:
        i, gi = viol
        return FakeGaloisFailure(G, N, ell, m, name, f"not G-equivariant at theta {i} and generator {G.gens[gi]}",
                                 perm=f, violation=(i, int(G.gens[gi])))
    reps = [(orb, i) for orb in ctx.orbits for i in (orb if all_theta else orb[:1])]
    results = _run(ctx, [(orb, i, f[i]) for orb, i in reps], m, strict, jobs, use_shortcut)
    if all(r.status != "refuted" for r in results):
        return FakeGaloisMap(G, N, ell, m, f, results, name)
    return FakeGaloisFailure(G, N, ell, m, name, "some orbit has no witness", perm=f, orbits=results,
                             equivariant=True)


def _run(ctx, tasks, m, strict, jobs, use_shortcut):
    if jobs > 1 and len(tasks) > 1:
        # warm shared caches serially so the threads only read them
        for _, i, j in tasks:
            ctx.pair(i, j)
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(lambda t: _check_orbit(ctx, t[0], t[1], t[2], m, strict, use_shortcut), tasks))
    return [_check_orbit(ctx, orb, i, j, m, strict, use_shortcut) for orb, i, j in tasks]


def _search(ctx: FakeGaloisContext, m: int, strict: bool, jobs: int, all_theta: bool, use_shortcut: bool):
    G, N = ctx.G, ctx.N
    pool = search_pool(ctx.ibr)
    # whole-map candidates first
    for name, f in pool:
        if equivariance_violation(f, ctx.perms) is not None:
            continue
        reps = [(orb, i) for orb in ctx.orbits for i in (orb if all_theta else orb[:1])]
        try:
            results = _run(ctx, [(orb, i, f[i]) for orb, i in reps], m, strict, jobs, use_shortcut)
        except PreconditionError:
            continue
        if all(r.status != "refuted" for r in results):
            return FakeGaloisMap(G, N, ctx.ell, m, f, results, f"searched:{name}")
    # per-orbit assignment with backtracking, keeping the map injective
    choices = []
    for orb in ctx.orbits:
        opts = []
        for name, f in pool:
            try:
                r = _check_orbit(ctx, orb, orb[0], f[orb[0]], m, strict, use_shortcut)
            except PreconditionError:
                continue
            if r.status != "refuted":
                opts.append((name, f, r))
        choices.append(opts)
    chosen = _assign(ctx, choices)
    if chosen is None:
        return FakeGaloisFailure(G, N, ctx.ell, m, "searched", "no candidate in the bar/sigma closure verifies",
                                 orbits=[])
    perm = [0] * len(ctx.ibr)
    for orb, (name, f, _) in zip(ctx.orbits, chosen):
        for i in orb:
            perm[i] = f[i]
    return FakeGaloisMap(G, N, ctx.ell, m, perm, [r for _, _, r in chosen], "searched:per-orbit")


def _assign(ctx: FakeGaloisContext, choices):
    def rec(k, used, acc):
        if k == len(choices):
            return acc
        orb = ctx.orbits[k]
        for opt in choices[k]:
            img = {opt[1][i] for i in orb}
            if img & used or len(img) != len(orb):
                continue
            out = rec(k + 1, used | img, acc + [opt])
            if out is not None:
                return out
        return None

    return rec(0, set(), [])


# ---------------------------------------------------------------------------
# stabilisers of linear characters under outer actions


@dataclass
class CharacterStabilizer:
    index: int
    values: list  # exponents on the generators of Z, modulo exp(Z)
    trivial: bool
    stabilizer_order: int
    cyclic: bool

    def to_json(self) -> dict:
        return {"index": self.index, "values": self.values, "trivial": self.trivial,
                "stabilizer_order": self.stabilizer_order, "cyclic": self.cyclic}


@dataclass
class StabilizerReport:
    Z: FiniteGroup
    acting_order: int
    exponent: int
    rows: list

    @property
    def nontrivial_all_cyclic(self) -> bool:
        return all(r.cyclic for r in self.rows if not r.trivial)

    def to_json(self) -> dict:
        return {"group": self.Z.name, "acting_order": self.acting_order, "exponent": self.exponent,
                "characters": [r.to_json() for r in self.rows],
                "nontrivial_all_cyclic": self.nontrivial_all_cyclic}


def orbit_stabilizer_cyclicity(Z: FiniteGroup, auts: list[GroupMap]) -> StabilizerReport:
    """For each linear character nu of the abelian group Z, its stabiliser in <auts> and whether cyclic."""
    if not Z.is_abelian():
        raise StructureError("Z must be abelian")
    for a in auts:
        if not a.is_automorphism():
            raise StructureError("the action must be by automorphisms")
    perms = [tuple(int(x) for x in a.table) for a in auts] or [tuple(range(Z.order))]
    A = FiniteGroup(Z.order, perms, name="A")
    M = Z.exponent
    chars = homs_to_cyclic(Z, M)
    # nu^a = nu o a^-1 ; a fixes nu iff nu o a = nu
    rows = []
    for idx, nu in enumerate(chars):
        stab = [i for i in range(A.order) if np.array_equal(nu[A.perms[i]], nu)]
        S = A.subgroup_from_members(stab)
        cyclic = S.order == 1 or int(S.element_orders.max()) == S.order
        rows.append(CharacterStabilizer(idx, [int(nu[g]) for g in Z.gens], not np.any(nu), S.order, cyclic))
    return StabilizerReport(Z, A.order, M, rows)
