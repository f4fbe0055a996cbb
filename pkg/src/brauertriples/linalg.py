"""Dense linear algebra over a finite field ``GF`` on integer-encoded numpy arrays."""

from __future__ import annotations

import numpy as np

from .gf import GF


def rref(F: GF, A):
    """Row-reduced echelon form; returns (R, pivots) with R having len(pivots) rows."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.smul(int(F.inv(piv)), R[r])
        col = R[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            R[others] = F.sub(R[others], F.mul(col[others, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: GF, A) -> int:
    return len(rref(F, A)[1])


def nullspace(F: GF, A):
    """Basis (rows) of the right nullspace {v : A v = 0}."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = F.neg(R[i, f])
    return basis


def left_nullspace(F: GF, A):
    """Basis (rows) of {v : v A = 0}."""
    return nullspace(F, np.asarray(A).T)


def inverse(F: GF, A):
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(F, aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def det_nonzero(F: GF, A) -> bool:
    A = np.asarray(A)
    return rank(F, A) == A.shape[0]


def solve_left(F: GF, A, B):
    """Solve X A = B for X (rows), or return None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    # X A = B  <=>  A^T X^T = B^T
    return solve(F, A.T, B.T, transpose_out=True)


def solve(F: GF, A, B, transpose_out=False):
    """Solve A X = B; returns one solution or None."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    n = A.shape[1]
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(F, aug)
    if piv and piv[-1] >= n:
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        X[pc] = R[i, n:]
    if vec:
        X = X[:, 0]
    return X.T if transpose_out else X


def scalar_multiple(F: GF, A, B):
    """Return c with A = c * B (B nonzero), or None if A is not a multiple of B."""
    A = np.asarray(A, dtype=np.int64).ravel()
    B = np.asarray(B, dtype=np.int64).ravel()
    nz = np.nonzero(B)[0]
    if nz.size == 0:
        raise ValueError("B is zero")
    i = nz[0]
    c = int(F.mul(A[i], F.inv(B[i])))
    if np.array_equal(F.smul(c, B), A):
        return c
    return None


def scalar_of(F: GF, A):
    """Return c if A = c * Id, else None."""
    A = np.asarray(A, dtype=np.int64)
    c = int(A[0, 0])
    if np.array_equal(A, c * np.eye(A.shape[0], dtype=np.int64)):
        return c
    return None


class EchelonSpace:
    """A subspace kept in reduced echelon form; supports incremental spinning."""

    def __init__(self, F: GF, n: int):
        self.F = F
        self.n = n
        self.basis = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, X):
        X = np.array(X, dtype=np.int64, copy=True)
        if X.ndim == 1:
            X = X[None, :]
        if self.pivots:
            coeff = X[:, self.pivots]
            X = self.F.sub(X, self.F.matmul(coeff, self.basis))
        return X

    def add(self, X):
        """Add vectors; return the new (reduced, independent) rows."""
        X = self.reduce(X)
        R, piv = rref(self.F, X)
        if not piv:
            return np.zeros((0, self.n), dtype=np.int64)
        # clear the new pivot columns from the old basis
        if self.dim:
            coeff = self.basis[:, piv]
            self.basis = self.F.sub(self.basis, self.F.matmul(coeff, R))
        allrows = np.concatenate([self.basis, R])
        allpiv = self.pivots + piv
        order = np.argsort(allpiv, kind="stable")
        self.basis = allrows[order]
        self.pivots = [allpiv[i] for i in order]
        return R

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))


def spin(F: GF, gens, seeds, limit: int | None = None):
    """Smallest subspace containing ``seeds`` and invariant under right multiplication by gens."""
    n = gens[0].shape[0] if gens else np.asarray(seeds).shape[-1]
    S = EchelonSpace(F, n)
    frontier = S.add(seeds)
    while frontier.shape[0]:
        if limit is not None and S.dim >= limit:
            break
        images = np.concatenate([F.matmul(frontier, g) for g in gens]) if gens else frontier[:0]
        frontier = S.add(images) if images.shape[0] else images
    return S


def action_on_subspace(F: GF, g, basis, pivots):
    """Matrix of v -> v g restricted to an invariant subspace with echelon basis."""
    img = F.matmul(basis, g)
    return img[:, pivots]


def action_on_quotient(F: GF, g, space: EchelonSpace):
    """Matrix of the induced action on V / space, using non-pivot coordinates."""
    n = space.n
    nonpiv = [c for c in range(n) if c not in set(space.pivots)]
    E = np.zeros((len(nonpiv), n), dtype=np.int64)
    E[np.arange(len(nonpiv)), nonpiv] = 1
    img = space.reduce(F.matmul(E, g))
    return img[:, nonpiv], nonpiv


def min_poly_vector(F: GF, A, v):
    """Minimal polynomial (monic, low degree first) of v under right action v -> v A."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    # rows of `red` are reduced Krylov vectors; `comb` expresses them in v, vA, vA^2, ...
    red = np.zeros((0, n), dtype=np.int64)
    comb = np.zeros((0, n + 1), dtype=np.int64)
    pivots: list[int] = []
    cur = np.asarray(v, dtype=np.int64)
    for k in range(n + 1):
        c = np.zeros(n + 1, dtype=np.int64)
        c[k] = 1
        r = cur.copy()
        for i, pc in enumerate(pivots):
            if r[pc]:
                f = int(r[pc])
                r = F.sub(r, F.smul(f, red[i]))
                c = F.sub(c, F.smul(f, comb[i]))
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            coeffs = [int(x) for x in c[: k + 1]]
            return coeffs
        pc = int(nz[0])
        inv = int(F.inv(int(r[pc])))
        red = np.vstack([red, F.smul(inv, r)])
        comb = np.vstack([comb, F.smul(inv, c)])
        pivots.append(pc)
        cur = F.matmul(cur[None, :], A)[0]
    raise RuntimeError("Krylov sequence exceeded dimension")


def poly_eval(F: GF, coeffs, xs):
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, xs), c)
    return acc


def poly_roots(F: GF, coeffs):
    xs = F.elements()
    vals = poly_eval(F, coeffs, xs)
    return [int(x) for x in xs[vals == 0]]


def matpow(F: GF, A, k: int):
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if k < 0:
        A = inverse(F, A)
        k = -k
    result = np.eye(n, dtype=np.int64)
    base = A
    while k:
        if k & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        k >>= 1
    return result


def eigenvalue_multiplicities(F: GF, A, candidates):
    """Algebraic multiplicities of the candidate eigenvalues of A (A semisimple not assumed).

    Uses nullity of (A - cI)^n, so it is exact for any A whose eigenvalues all
    lie among ``candidates``.
    """
    n = A.shape[0]
    out = {}
    for c in candidates:
        M = F.sub(A, F.smul(int(c), np.eye(n, dtype=np.int64)))
        Mp = matpow(F, M, n) if n > 1 else M
        k = n - rank(F, Mp)
        if k:
            out[int(c)] = k
    return out
