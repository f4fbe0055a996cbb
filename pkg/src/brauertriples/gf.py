"""Exact scalars: finite fields F_{l^d}, cyclotomic numbers, and the Brauer lift.

Finite field elements are encoded as integers ``c_0 + c_1 l + ... + c_{d-1} l^{d-1}``
where ``c_i`` is the coefficient of ``x^i`` modulo the defining polynomial.  Bulk
arithmetic works on numpy integer arrays of such encodings; :class:`FieldElement`
is a thin scalar wrapper for API use.

Defining polynomials are Conway polynomials, computed by exhaustive search for the
lexicographically least primitive polynomial compatible with all subfields.  This
makes the chosen generators compatible along the tower: the generator of
``F_{l^d}`` is ``x`` and it is the ``(l^D - 1)/(l^d - 1)`` power of the generator
of ``F_{l^D}`` whenever ``d | D``.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import cyclotomic_poly, factorint, isprime, totient
from sympy.abc import x as _sym_x


class InvalidOrderError(ValueError):
    pass


class FieldDomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists (low degree first)


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _pmod(prod, f, p)


def _pmod(a, f, p):
    a = list(a)
    d = len(f) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % p
    return _ptrim(a[:d])


def _ppowmod(a, n, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        n >>= 1
    return result


def _peval_poly_at(g, y, f, p):
    """Evaluate polynomial g (over F_p) at the residue y modulo f."""
    acc = []
    for c in reversed(g):
        acc = _pmulmod(acc, y, f, p) if acc else []
        acc = list(acc) + [0] * max(0, 1 - len(acc))
        acc[0] = (acc[0] + c) % p
        acc = _ptrim(acc)
    return acc


def _is_primitive(f, p, d):
    q1 = p**d - 1
    xpoly = [0, 1]
    if _ppowmod(xpoly, q1, f, p) != [1]:
        return False
    for r in factorint(q1):
        if _ppowmod(xpoly, q1 // r, f, p) == [1]:
            return False
    return True


_conway_lock = threading.RLock()
_conway_cache: dict[tuple[int, int], tuple[int, ...]] = {}


def conway_polynomial(p: int, d: int) -> tuple[int, ...]:
    """Coefficients ``(c_0, ..., c_{d-1}, 1)`` of the Conway polynomial of degree d."""
    with _conway_lock:
        key = (p, d)
        if key in _conway_cache:
            return _conway_cache[key]
        subs = [(e, conway_polynomial(p, e)) for e in range(1, d) if d % e == 0]
        q1 = p**d - 1
        # Conway order: compare (-1)^(d-i) c_i for i = d-1, ..., 0
        for k in itertools.product(range(p), repeat=d):
            coeffs = [0] * d
            for pos, ki in enumerate(k):
                i = d - 1 - pos
                coeffs[i] = ki if (d - i) % 2 == 0 else (-ki) % p
            f = coeffs + [1]
            if coeffs[0] == 0 and d > 0:
                continue
            if not _is_primitive(f, p, d):
                continue
            ok = True
            for e, g in subs:
                y = _ppowmod([0, 1], q1 // (p**e - 1), f, p)
                if _peval_poly_at(list(g), y, f, p):
                    ok = False
                    break
            if ok:
                _conway_cache[key] = tuple(f)
                return _conway_cache[key]
        raise RuntimeError(f"no Conway polynomial found for ({p}, {d})")


# ---------------------------------------------------------------------------
# finite fields


class GF:
    """The finite field F_{p^d}, with vectorised arithmetic on integer encodings."""

    def __init__(self, p: int, d: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.d = d
        self.q = p**d
        self.poly = conway_polynomial(p, d)
        q1 = self.q - 1
        self._pows = p ** np.arange(d, dtype=np.int64)
        # exp/log tables with x as the multiplicative generator
        exp = np.zeros(2 * q1 + 1, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        digits = [1] + [0] * (d - 1)
        f = self.poly
        for k in range(q1):
            enc = sum(c * p**i for i, c in enumerate(digits))
            exp[k] = enc
            log[enc] = k
            # multiply by x
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(digits[i] - top * f[i]) % p for i in range(d)]
        exp[q1 : 2 * q1] = exp[:q1]
        exp[2 * q1] = exp[0]
        self._exp = exp
        self._log = log
        # reduction of x^s, s < 2d-1, onto the power basis
        red = np.zeros((max(2 * d - 1, 1), d), dtype=np.int64)
        for s in range(2 * d - 1):
            r = _pmod([0] * s + [1], list(f), p) if s >= d else [0] * s + [1]
            for t, c in enumerate(r):
                red[s, t] = c
        self._red = red

    def __repr__(self):
        return f"GF({self.p}^{self.d})"

    def __reduce__(self):
        return (field_of, (self.p, self.d))

    @property
    def generator(self) -> int:
        return int(self._exp[1])

    @property
    def order(self) -> int:
        return self.q

    def to_json(self) -> dict:
        return {"l": self.p, "d": self.d, "poly": list(self.poly)}

    # -- encodings <-> digits
    def digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pows) % self.p

    def from_digits(self, dg):
        return (np.asarray(dg, dtype=np.int64) * self._pows).sum(-1)

    # -- arithmetic on arrays of encodings
    def add(self, a, b):
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        return self.from_digits((self.digits(a) + self.digits(b)) % self.p)

    def sub(self, a, b):
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        return self.from_digits((self.digits(a) - self.digits(b)) % self.p)

    def neg(self, a):
        if self.d == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self.from_digits((-self.digits(a)) % self.p)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.d == 1:
            return (a * b) % self.p
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def smul(self, c: int, a):
        """Multiply the array ``a`` by the scalar encoding ``c``."""
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) * c) % self.p
        a = np.asarray(a, dtype=np.int64)
        if c == 0:
            return np.zeros_like(a)
        r = self._exp[self._log[a] + self._log[c]]
        return np.where(a == 0, 0, r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in finite field")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def power(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        q1 = self.q - 1
        if n == 0:
            return np.ones_like(a)
        if n < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        r = self._exp[(self._log[a] * (n % q1)) % q1]
        return np.where(a == 0, 0, r)

    def log(self, a):
        """Discrete logarithm to the base of the field generator (table lookup)."""
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldDomainError("logarithm of zero")
        return self._log[a]

    def exp(self, k):
        return self._exp[np.asarray(k, dtype=np.int64) % (self.q - 1)]

    def frobenius(self, a):
        return self.power(a, self.p)

    def root_of_unity(self, e: int) -> int:
        """The chosen primitive e-th root of unity ``x^((q-1)/e)``."""
        if (self.q - 1) % e:
            raise InvalidOrderError(f"{e} does not divide |{self!r}^x| = {self.q - 1}")
        return int(self._exp[(self.q - 1) // e])

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def matmul(self, A, B):
        """Matrix product (batched over leading axes of A) of encoded matrices."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p, d = self.p, self.d
        k = A.shape[-1]
        exact = k * d * (p - 1) ** 2 < 2**53
        if d == 1:
            if exact:
                return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
            return np.vectorize(int)(np.asarray(A, dtype=object) @ B) % p
        m = B.shape[-1]
        # A_cat = [A_0 .. A_{d-1}] and a block-Toeplitz B so that one product yields
        # every convolution coefficient C_s = sum_{i+j=s} A_i B_j
        Ad = self.digits(A)  # (..., n, k, d)
        A_cat = np.moveaxis(Ad, -1, -2).reshape(A.shape[:-1] + (d * k,))
        Bd = self.digits(B)  # (k, m, d)
        s = 2 * d - 1
        Bt = np.zeros((d, k, s, m), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                Bt[i, :, i + j, :] = Bd[:, :, j]
        Bt = Bt.reshape(d * k, s * m)
        if exact:
            C = np.rint(A_cat.astype(np.float64) @ Bt.astype(np.float64)).astype(np.int64) % p
        else:
            C = (A_cat @ Bt) % p
        C = C.reshape(A.shape[:-1] + (s, m))  # (..., n, s, m)
        out = np.tensordot(C, self._red, axes=([-2], [0])) % p  # (..., n, m, d)
        return self.from_digits(out)

    def identity(self, n: int):
        return np.eye(n, dtype=np.int64)

    def element(self, value) -> "FieldElement":
        return FieldElement(self, value)

    def embed(self, other: "GF", a):
        """Embed encodings of the subfield ``other`` into this field."""
        if other.p != self.p or self.d % other.d:
            raise ValueError(f"{other!r} is not a subfield of {self!r}")
        a = np.asarray(a, dtype=np.int64)
        if other.d == self.d:
            return a.copy()
        scale = (self.q - 1) // (other.q - 1)
        r = self._exp[(other._log[a] * scale) % (self.q - 1)]
        return np.where(a == 0, 0, r)


_registry_lock = threading.Lock()
_fields: dict[tuple[int, int], GF] = {}


def field_of(p: int, d: int) -> GF:
    with _registry_lock:
        key = (p, d)
        if key not in _fields:
            _fields[key] = GF(p, d)
        return _fields[key]


def splitting_degree(ell: int, e: int) -> int:
    """Smallest d with e | ell^d - 1."""
    if e <= 0 or math.gcd(e, ell) != 1:
        raise InvalidOrderError(f"order {e} is not a positive integer coprime to {ell}")
    d = 1
    while (ell**d - 1) % e:
        d += 1
    return d


def field_tower(ell: int, e: int) -> GF:
    """The smallest F_{ell^d} containing a primitive e-th root of unity."""
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    return field_of(ell, splitting_degree(ell, e))


def ell_part(n: int, ell: int) -> int:
    while n % ell == 0:
        n //= ell
    return n


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: GF, value):
        self.field = field
        self.value = int(value)
        if not 0 <= self.value < field.q:
            raise ValueError(f"{value} is not an element encoding of {field!r}")

    def _wrap(self, v):
        return FieldElement(self.field, int(v))

    def _other(self, o):
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                raise ValueError("field mismatch")
            return o.value
        return int(o) % self.field.p

    def __add__(self, o):
        return self._wrap(self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.field.sub(self.value, self._other(o)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __mul__(self, o):
        return self._wrap(self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        ov = self._other(o)
        return self._wrap(self.field.mul(self.value, self.field.inv(ov)))

    def __pow__(self, n: int):
        if self.value == 0 and n < 0:
            raise ZeroDivisionError("negative power of zero")
        return self._wrap(self.field.power(self.value, n))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.field is o.field and self.value == o.value
        if isinstance(o, int):
            return self.value == o % self.field.p and self.value < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.value))

    def __repr__(self):
        return f"FieldElement({self.field!r}, {self.value})"

    def is_zero(self):
        return self.value == 0

    def to_json(self) -> dict:
        f = self.field
        return {"l": f.p, "d": f.d, "poly": list(f.poly), "coeffs": [int(c) for c in f.digits(self.value)]}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldElement":
        f = field_of(obj["l"], obj["d"])
        if list(f.poly) != list(obj["poly"]):
            raise ValueError("defining polynomial mismatch")
        return cls(f, int(f.from_digits(obj["coeffs"])))


def root_order(x: FieldElement) -> int:
    """Multiplicative order of a nonzero field element."""
    if x.value == 0:
        raise FieldDomainError("zero has no multiplicative order")
    q1 = x.field.q - 1
    k = int(x.field.log(x.value))
    return q1 // math.gcd(k, q1)


def discrete_log(x: FieldElement, base: FieldElement) -> int | None:
    """Least k >= 0 with base^k = x (baby-step giant-step), or None."""
    if base.value == 0:
        raise FieldDomainError("base must be nonzero")
    if x.value == 0:
        return None
    n = root_order(base)
    m = math.isqrt(n) + 1
    f = base.field
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = int(f.mul(cur, base.value))
    step = int(f.power(base.value, -m))
    gamma = x.value
    for i in range(m + 1):
        if gamma in table:
            k = i * m + table[gamma]
            if k < n:
                return k
        gamma = int(f.mul(gamma, step))
    return None


# ---------------------------------------------------------------------------
# cyclotomic numbers


@lru_cache(maxsize=None)
def _cyclo_data(K: int):
    phi = int(totient(K))
    coeffs = [int(c) for c in reversed(cyclotomic_poly(K, _sym_x, polys=True).all_coeffs())]
    # basis images of zeta^j for j < K
    images = []
    cur = [0] * phi
    cur[0] = 1
    for j in range(K):
        images.append(tuple(cur))
        # multiply by zeta
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [cur[i] - top * coeffs[i] for i in range(phi)]
    # normalised traces Tr(zeta^j)/phi
    traces = []
    for j in range(K):
        g = math.gcd(j, K)
        k = K // g
        mu = _mobius(k)
        traces.append(Fraction(mu, int(totient(k))))
    return phi, tuple(coeffs), tuple(images), tuple(traces)


def _mobius(n: int) -> int:
    f = factorint(n)
    if any(v > 1 for v in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


class CycloNumber:
    """An element of Q(zeta_K) in the power basis 1, zeta_K, ..., zeta_K^(phi(K)-1)."""

    __slots__ = ("K", "coeffs")

    def __init__(self, K: int, coeffs):
        phi = _cyclo_data(K)[0]
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {K}")
        self.K = K
        self.coeffs = coeffs

    @classmethod
    def from_exponents(cls, K: int, exps) -> "CycloNumber":
        """Build sum_j a_j zeta_K^j from a mapping or sequence of (j, a_j)."""
        phi, _, images, _ = _cyclo_data(K)
        acc = [Fraction(0)] * phi
        items = exps.items() if isinstance(exps, dict) else exps
        for j, a in items:
            if a:
                img = images[j % K]
                for i in range(phi):
                    if img[i]:
                        acc[i] += a * img[i]
        return cls(K, acc)

    @classmethod
    def zeta(cls, K: int, j: int = 1) -> "CycloNumber":
        return cls.from_exponents(K, [(j, 1)])

    @classmethod
    def rational(cls, r, K: int = 1) -> "CycloNumber":
        return cls.from_exponents(K, [(0, Fraction(r))])

    def to_conductor(self, L: int) -> "CycloNumber":
        if L == self.K:
            return self
        if L % self.K:
            raise ValueError(f"conductor {self.K} does not divide {L}")
        s = L // self.K
        return CycloNumber.from_exponents(L, [(i * s, c) for i, c in enumerate(self.coeffs)])

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.K == self.K:
                return self, other
            L = math.lcm(self.K, other.K)
            return self.to_conductor(L), other.to_conductor(L)
        if isinstance(other, (int, Fraction)):
            return self, CycloNumber.rational(other, self.K)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.K, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.K, [-c for c in self.coeffs])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.K, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.K, [c * other for c in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        K = a.K
        conv: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        k = (i + j) % K
                        conv[k] = conv.get(k, 0) + x * y
        return CycloNumber.from_exponents(K, conv)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.K, [c / Fraction(other) for c in self.coeffs])
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = CycloNumber.rational(1, self.K)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        _, _, _, traces = _cyclo_data(self.K)
        # normalised trace is invariant under change of conductor
        t = sum((c * traces[i] for i, c in enumerate(self.coeffs) if c), Fraction(0))
        return hash(t)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.K}^{i}")
        return "0" if not terms else " + ".join(terms)

    def galois(self, a: int) -> "CycloNumber":
        """Apply zeta_K -> zeta_K^a (a coprime to K)."""
        if math.gcd(a, self.K) != 1:
            raise ValueError(f"{a} is not coprime to {self.K}")
        return CycloNumber.from_exponents(self.K, [(a * i, c) for i, c in enumerate(self.coeffs)])

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_int(self) -> int:
        r = self.to_fraction()
        if r.denominator != 1:
            raise ValueError(f"{r} is not an integer")
        return int(r)

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.K), math.sin(2 * math.pi / self.K))
        return sum((float(c) * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def sort_key(self, K: int | None = None):
        v = self.to_conductor(K) if K else self
        return tuple(v.coeffs)

    def to_json(self) -> dict:
        return {"conductor": self.K, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNumber":
        return cls(obj["conductor"], [Fraction(c) for c in obj["coeffs"]])


def cyclo_sum(values, K: int = 1) -> CycloNumber:
    total = CycloNumber.rational(0, K)
    for v in values:
        total = total + v
    return total


# ---------------------------------------------------------------------------
# the Brauer lift


class LiftConvention:
    """Fixed identification of l'-roots of unity in F_l-bar with complex roots of unity.

    The chosen primitive e-th root in ``F_{l^d}`` is ``x^((l^d - 1)/e)`` where x is
    the Conway generator; under the Conway embeddings these choices are compatible
    along the whole tower, so lifting commutes with field embeddings.
    """

    def __init__(self, ell: int):
        if not isprime(ell):
            raise ValueError(f"{ell} is not prime")
        self.ell = ell

    def chosen_root(self, e: int) -> FieldElement:
        f = field_tower(self.ell, e)
        return FieldElement(f, f.root_of_unity(e))

    def lift_log(self, field: GF, k: int) -> CycloNumber:
        """Lift of the field element with discrete log k."""
        q1 = field.q - 1
        g = math.gcd(k % q1, q1)
        e = q1 // g
        return CycloNumber.zeta(e, (k % q1) // g)

    def lift(self, x: FieldElement) -> CycloNumber:
        if x.field.p != self.ell:
            raise ValueError("field characteristic does not match the convention")
        if x.value == 0:
            raise FieldDomainError("zero has no Brauer lift")
        return self.lift_log(x.field, int(x.field.log(x.value)))

    def unlift(self, field: GF, z: CycloNumber) -> int:
        """Inverse of the lift on roots of unity of order dividing |field^x|."""
        q1 = field.q - 1
        for j in range(z.K):
            if CycloNumber.zeta(z.K, j) == z:
                if q1 % z.K:
                    raise InvalidOrderError(f"order {z.K} root not in {field!r}")
                return int(field.exp(j * (q1 // z.K)))
        raise FieldDomainError(f"{z!r} is not a root of unity of order dividing {z.K}")


def brauer_lift(x: FieldElement, conv: LiftConvention) -> CycloNumber:
    return conv.lift(x)
