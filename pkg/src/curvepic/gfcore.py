"""Finite fields, univariate polynomials over them, and dense linear algebra.

Field elements are plain integers in ``[0, q)``: the base-``p`` digits of the
integer are the coefficients of the element in the power basis of the
defining polynomial (little-endian).  Vectors and matrices are numpy integer
arrays holding such encodings.
"""

from __future__ import annotations

import builtins
import math
import os
from functools import lru_cache

import numpy as np


class DomainError(ValueError):
    """Input violates a mathematical precondition."""


class CapExceededError(RuntimeError):
    """A Las Vegas loop hit its iteration cap."""


def max_trials(expected):
    """Iteration cap: 64 times the expected number of trials.

    The environment variable ``PICARD_MAX_TRIALS`` overrides the cap.
    """
    env = os.environ.get("PICARD_MAX_TRIALS")
    if env:
        return max(1, int(env))
    return max(1, int(math.ceil(64 * expected)))


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Fields


class Field:
    """The field F_p[a]/(modulus(a)) with modulus monic and irreducible over F_p."""

    ADD_TABLE_LIMIT = 1024

    def __init__(self, p, modulus=None):
        if not _is_prime(p):
            raise DomainError(f"{p} is not prime")
        if modulus is None:
            modulus = (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise DomainError("defining polynomial must be monic of degree >= 1")
        self.p = p
        self.n = len(modulus) - 1
        self.q = p**self.n
        self.modulus = modulus
        if self.n > 1 and not _irreducible_over_prime(p, modulus):
            raise DomainError("defining polynomial is reducible")
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        self.pw = p ** np.arange(n, dtype=np.int64)
        ar = np.arange(q, dtype=np.int64)
        self.digits = (ar[:, None] // self.pw[None, :]) % p
        if n == 1:
            self._exp = self._log = None
            self.inv_table = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                self.inv_table[a] = pow(a, p - 2, p)
            self.neg_table = (-ar) % p
            self.add_table = None
            self._inv_list = self.inv_table.tolist()
            self.gen = _prime_field_generator(p)
            return
        exp = self._power_sequence()
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self._exp = np.concatenate([exp[: q - 1], exp[: q - 1]])
        self._log = log
        self._exp_list = self._exp.tolist()
        self._log_list = log.tolist()
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = self._exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv_list = self.inv_table.tolist()
        self.neg_table = ((-self.digits) % p) @ self.pw
        self._neg_list = self.neg_table.tolist()
        if q <= self.ADD_TABLE_LIMIT and p != 2:
            s = (self.digits[:, None, :] + self.digits[None, :, :]) % p
            self.add_table = s @ self.pw
            self._add_list = self.add_table.tolist()
        else:
            self.add_table = None
        # regular representation: row u of _reg[a] holds the digits of a * x^u
        xu = [self.from_coeffs([0] * u + [1]) for u in range(n)]
        self._reg = np.stack([self.digits[self.mul(ar, x)] for x in xu], axis=1)

    def _power_sequence(self):
        """Powers of a primitive element, as integers."""
        p, n, q = self.p, self.n, self.q
        mod = self.modulus
        order = q - 1
        factors = _prime_factors(order)
        for g in range(p, q):
            gd = [(g // p**i) % p for i in range(n)]
            seq = [1]
            cur = [1] + [0] * (n - 1)
            ok = True
            for k in range(1, order):
                cur = _polymulmod_prime(cur, gd, mod, p)
                v = 0
                for i in range(n - 1, -1, -1):
                    v = v * p + cur[i]
                if v == 1:
                    ok = False
                    break
                seq.append(v)
            if ok:
                self.gen = g
                return np.array(seq, dtype=np.int64)
        raise AssertionError("no primitive element found")  # unreachable

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"

    @property
    def is_prime(self):
        return self.n == 1

    # -- encoding ----------------------------------------------------------

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise DomainError("too many coefficients")
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (int(c) % self.p)
        return v

    def coeffs(self, a):
        return [int(c) for c in self.digits[int(a)]]

    # -- scalar arithmetic (python ints) -----------------------------------

    def add_s(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.add_table is not None:
            return self._add_list[a][b]
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self.pw)

    def neg_s(self, a):
        if self.n == 1:
            return (-a) % self.p
        return self._neg_list[a]

    def sub_s(self, a, b):
        return self.add_s(a, self.neg_s(b))

    def mul_s(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv_s(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv_list[a]

    def div_s(self, a, b):
        return self.mul_s(a, self.inv_s(b))

    def pow_s(self, a, e):
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.n == 1:
            return pow(a, e, self.p)
        return self._exp_list[(self._log_list[a] * e) % (self.q - 1)]

    # -- vectorised arithmetic (numpy arrays) ------------------------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.add_table is not None:
            return self.add_table[a, b]
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.pw

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a * b) % self.p
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    def power(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.n == 1:
            out = np.ones_like(a)
            base = a.copy()
            while e:
                if e & 1:
                    out = (out * base) % self.p
                base = (base * base) % self.p
                e >>= 1
            return out
        r = self._exp[(self._log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def frobenius(self, a, k=1):
        """a -> a^(p^k)."""
        return self.power(a, self.p ** (k % self.n) if self.n > 1 else 1)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
            raise DomainError(f"shape mismatch {A.shape} x {B.shape}")
        m, r = A.shape
        c = B.shape[1]
        if self.n == 1:
            if r == 0:
                return np.zeros((m, c), dtype=np.int64)
            return (A @ B) % self.p
        n = self.n
        RA = self._reg[A]  # (m, r, n_u, n_s)
        RA = RA.transpose(0, 3, 1, 2).reshape(m * n, r * n)
        Bd = self.digits[B].transpose(0, 2, 1).reshape(r * n, c)
        Cd = (RA @ Bd) % self.p  # (m*n, c)
        Cd = Cd.reshape(m, n, c).transpose(0, 2, 1)
        return Cd @ self.pw

    def scale_rows(self, c, M):
        return self.mul(np.asarray(c)[:, None], M)

    def random(self, rng, size=None):
        return rng.integers(0, self.q, size=size, dtype=np.int64)


def _prime_field_generator(p):
    if p == 2:
        return 1
    fs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise AssertionError


def _polymulmod_prime(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k] % p
        if c:
            for t in range(n + 1):
                prod[k - n + t] -= c * mod[t]
    return [prod[i] % p for i in range(n)]


def _irreducible_over_prime(p, modulus):
    Fp = prime_field(p)
    return is_irreducible(Poly(Fp, modulus))


@lru_cache(maxsize=None)
def prime_field(p):
    return Field(p)


@lru_cache(maxsize=None)
def _canonical_field(p, n):
    """Deterministic field of order p^n: first primitive monic polynomial in
    lexicographic order of coefficients."""
    if n == 1:
        return prime_field(p)
    Fp = prime_field(p)
    q = p**n
    fs = _prime_factors(q - 1)
    for tail in range(p**n):
        coeffs = [(tail // p**i) % p for i in range(n)] + [1]
        if coeffs[0] == 0:
            continue
        f = Poly(Fp, coeffs)
        if not is_irreducible(f):
            continue
        x = Poly(Fp, [0, 1])
        if all(poly_powmod(x, (q - 1) // r, f).coeffs != [1] for r in fs):
            return Field(p, coeffs)
    raise AssertionError


def field_of_order(q):
    """The canonical field with q elements."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    n = round(math.log(q, p))
    if p**n != q:
        raise DomainError(f"{q} is not a prime power")
    return _canonical_field(p, n)


@lru_cache(maxsize=None)
def embedding(small, big):
    """Table sending each element of ``small`` to its image in ``big``.

    Both fields share the characteristic; the image of the generator ``a`` of
    ``small`` is the least root (as an integer) of its defining polynomial.
    """
    if small.p != big.p or big.n % small.n:
        raise DomainError(f"{small} does not embed in {big}")
    if small == big:
        return np.arange(small.q, dtype=np.int64)
    allb = np.arange(big.q, dtype=np.int64)
    val = np.zeros(big.q, dtype=np.int64)
    for c in reversed(small.modulus):
        val = big.add(big.mul(val, allb), c)
    roots = np.nonzero(val == 0)[0]
    if len(roots) == 0:
        raise AssertionError("defining polynomial has no root in the extension")
    a = int(roots[0])
    powers = [1]
    for _ in range(small.n - 1):
        powers.append(big.mul_s(powers[-1], a))
    table = np.zeros(small.q, dtype=np.int64)
    for t in range(small.n):
        table = big.add(table, big.mul(small.digits[:, t], powers[t]))
    return table


@lru_cache(maxsize=None)
def restriction(small, big):
    """Inverse of ``embedding``: dict-like array with -1 outside the image."""
    emb = embedding(small, big)
    back = -np.ones(big.q, dtype=np.int64)
    back[emb] = np.arange(small.q, dtype=np.int64)
    return back


def canonical_extension(base, degree):
    """Deterministic extension of ``base`` of the given degree (flattened)."""
    if degree < 1:
        raise DomainError("degree must be positive")
    if degree == 1:
        return base
    return _canonical_field(base.p, base.n * degree)


def make_extension(base, degree, rng):
    """Random field extension of ``base`` of the given degree.

    Random monic polynomials of the flattened degree over the prime field are
    drawn until one is irreducible.  The embedding of ``base`` is available as
    ``embedding(base, result)``.
    """
    if degree < 1:
        raise DomainError("degree must be positive")
    if degree == 1:
        return base
    p, N = base.p, base.n * degree
    Fp = prime_field(p)
    cap = max_trials(N)
    for _ in range(cap):
        coeffs = [int(c) for c in rng.integers(0, p, size=N)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible(Poly(Fp, coeffs)):
            big = Field(p, coeffs)
            embedding(base, big)
            return big
    raise CapExceededError("no irreducible polynomial found")


def discrete_log_mu_l(F, zeta, x, l):
    """Exponent e mod l with zeta^e = x, by a table of powers of zeta."""
    zeta, x = int(zeta), int(x)
    if F.pow_s(zeta, l) != 1 or (l > 1 and zeta == 1):
        raise DomainError("zeta is not a primitive l-th root of unity")
    table = {}
    cur = 1
    for e in range(l):
        table[cur] = e
        cur = F.mul_s(cur, zeta)
    if x not in table:
        raise DomainError("x is not an l-th root of unity")
    return table[x]


# ---------------------------------------------------------------------------
# Polynomials


class Poly:
    """Univariate polynomial over a Field; coefficients little-endian."""

    __slots__ = ("F", "coeffs")

    def __init__(self, F, coeffs):
        c = [int(x) % F.q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.coeffs = c

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, Poly) and self.F == other.F and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.F, tuple(self.coeffs)))

    def __repr__(self):
        return f"Poly({self.coeffs})"

    def __add__(self, o):
        F = self.F
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return Poly(F, [F.add_s(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return Poly(self.F, [self.F.neg_s(c) for c in self.coeffs])

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        F = self.F
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly(F, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add_s(out[i + j], F.mul_s(x, y))
        return Poly(F, out)

    def scale(self, c):
        return Poly(self.F, [self.F.mul_s(c, x) for x in self.coeffs])

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.F.inv_s(self.lead()))

    def divmod(self, o):
        F = self.F
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = o.degree
        inv = F.inv_s(o.lead())
        if len(r) - 1 < db:
            return Poly(F, []), Poly(F, r)
        qc = [0] * (len(r) - db)
        bc = o.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c:
                c = F.mul_s(c, inv)
                qc[k - db] = c
                for t in range(db + 1):
                    if bc[t]:
                        r[k - db + t] = F.sub_s(r[k - db + t], F.mul_s(c, bc[t]))
        return Poly(F, qc), Poly(F, r[:db])

    def __mod__(self, o):
        return self.divmod(o)[1]

    def __floordiv__(self, o):
        return self.divmod(o)[0]

    def derivative(self):
        F = self.F
        return Poly(F, [F.mul_s(i % F.p, c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        F = self.F
        v = 0
        for c in reversed(self.coeffs):
            v = F.add_s(F.mul_s(v, x), c)
        return v

    @classmethod
    def x(cls, F):
        return cls(F, [0, 1])

    @classmethod
    def one(cls, F):
        return cls(F, [1])


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """(g, s, t) with s a + t b = g monic."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly(F, [])
    t0, t1 = Poly(F, []), Poly.one(F)
    while not r1.is_zero():
        qt, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv_s(r0.lead())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def poly_powmod(a, e, m):
    result = Poly.one(a.F) % m
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


def is_irreducible(f):
    """Rabin's test."""
    F = f.F
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    x = Poly.x(F)
    q = F.q

    def frob_power(k):
        h = x
        for _ in range(k):
            h = poly_powmod(h, q, f)
        return h

    if frob_power(n) != x % f:
        return False
    for r in _prime_factors(n):
        h = frob_power(n // r)
        if poly_gcd(f, h - x).degree != 0:
            return False
    return True


def _pth_root(f):
    F = f.F
    p = F.p
    e = p ** (F.n - 1)
    return Poly(F, [F.pow_s(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)])


def squarefree_decomposition(f):
    """List of (g, m): f = lead * prod g^m with g squarefree, pairwise coprime."""
    F = f.F
    f = f.monic()
    if f.degree < 1:
        return []
    out = []
    fp = f.derivative()
    if fp.is_zero():
        return [(g, m * F.p) for g, m in squarefree_decomposition(_pth_root(f))]
    c = poly_gcd(f, fp)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, m * F.p) for g, m in squarefree_decomposition(_pth_root(c)))
    return out


def distinct_degree_factorization(f):
    F = f.F
    x = Poly.x(F)
    out = []
    h = x % f
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = poly_powmod(h, F.q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def equal_degree_factorization(f, d, rng):
    F = f.F
    if f.degree == d:
        return [f.monic()]
    n = f.degree
    cap = max_trials(4 * (n // d))
    for _ in range(cap):
        a = Poly(F, [int(v) for v in rng.integers(0, F.q, size=n)])
        if a.degree < 1:
            continue
        if F.p == 2:
            # absolute trace from F_{2^{nd}} to F_2
            t = a % f
            s = t
            for _ in range(F.n * d - 1):
                t = (t * t) % f
                s = s + t
            b = s
        else:
            b = poly_powmod(a, (F.q**d - 1) // 2, f) - Poly.one(F)
        g = poly_gcd(f, b)
        if 0 < g.degree < n:
            return equal_degree_factorization(g, d, rng) + equal_degree_factorization(f // g, d, rng)
    raise CapExceededError("equal-degree splitting did not converge")


def factor_poly(f, rng):
    """Factor f into monic irreducibles: list of (factor, multiplicity)."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree_factorization(g):
            for irr in equal_degree_factorization(h, d, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
    return out


# ---------------------------------------------------------------------------
# Linear algebra


def rref(F, M):
    """Reduced row echelon form of M; returns (R, pivots) with zero rows dropped."""
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise DomainError("matrix expected")
    rows, cols = M.shape
    pivots = []
    r = 0
    prime = F.n == 1
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        a = int(M[r, c])
        if a != 1:
            if prime:
                M[r] = (M[r] * pow(a, p - 2, p)) % p
            else:
                M[r] = F.mul(M[r], F.inv_s(a))
        col = M[:, c]
        others = np.flatnonzero(col)
        others = others[others != r]
        if others.size:
            if prime:
                M[others] = (M[others] - col[others, None] * M[r][None, :]) % p
            else:
                M[others] = F.sub(M[others], F.mul(col[others, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


class Subspace:
    """Subspace of F^ambient, stored by its reduced echelon basis."""

    __slots__ = ("F", "basis", "pivots", "ambient", "_key")

    def __init__(self, F, basis, pivots, ambient):
        self.F = F
        self.basis = basis
        self.pivots = list(pivots)
        self.ambient = ambient
        self._key = None

    @classmethod
    def span(cls, F, vectors, ambient=None):
        V = np.asarray(vectors, dtype=np.int64)
        if V.ndim == 1:
            V = V.reshape(1, -1) if V.size else V.reshape(0, ambient or 0)
        if ambient is None:
            ambient = V.shape[1]
        if V.shape[0] == 0:
            return cls.zero(F, ambient)
        if V.shape[1] != ambient:
            raise DomainError("vector length does not match ambient dimension")
        R, piv = rref(F, V)
        return cls(F, R, piv, ambient)

    @classmethod
    def zero(cls, F, ambient):
        return cls(F, np.zeros((0, ambient), dtype=np.int64), [], ambient)

    @classmethod
    def full(cls, F, ambient):
        return cls(F, np.eye(ambient, dtype=np.int64), list(range(ambient)), ambient)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def codim(self):
        return self.ambient - self.dim

    def key(self):
        if self._key is None:
            self._key = (self.ambient, self.basis.tobytes())
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.F == other.F
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def reduce(self, v):
        """Reduce rows of v modulo the subspace (zero on pivot columns)."""
        v = np.array(v, dtype=np.int64, copy=True)
        single = v.ndim == 1
        if single:
            v = v[None, :]
        if self.dim:
            c = v[:, self.pivots]
            v = self.F.sub(v, self.F.matmul(c, self.basis))
        return v[0] if single else v

    def contains(self, v):
        return not np.any(self.reduce(v))

    def contains_space(self, other):
        return other.dim == 0 or not np.any(self.reduce(other.basis))

    def coords(self, v):
        """Coordinates of vectors lying in the subspace."""
        v = np.asarray(v, dtype=np.int64)
        return v[..., self.pivots]

    def complement_columns(self):
        s = set(self.pivots)
        return [c for c in range(self.ambient) if c not in s]

    def quotient_coords(self, v):
        """Coordinates of v in ambient/self w.r.t. the non-pivot unit vectors."""
        return self.reduce(v)[..., self.complement_columns()]

    def map_entries(self, table, F_new):
        """Apply an entrywise map (a field embedding or automorphism)."""
        return Subspace.span(F_new, table[self.basis], self.ambient) if self.dim else Subspace.zero(F_new, self.ambient)


def kernel(F, M):
    """{x : M x = 0} for M of shape (m, n)."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise DomainError("matrix expected")
    n = M.shape[1]
    if M.shape[0] == 0:
        return Subspace.full(F, n)
    R, piv = rref(F, M)
    free = [c for c in range(n) if c not in set(piv)]
    if not free:
        return Subspace.zero(F, n)
    B = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        B[i, f] = 1
        if piv:
            B[i, piv] = F.neg(R[:, f])
    return Subspace.span(F, B, n)


def left_kernel(F, M):
    """{y : y M = 0}."""
    return kernel(F, np.asarray(M, dtype=np.int64).T)


def image(F, M):
    """Column space of M."""
    M = np.asarray(M, dtype=np.int64)
    return Subspace.span(F, M.T, M.shape[0])


def row_space(F, M, ambient=None):
    return Subspace.span(F, M, ambient)


def solve(F, M, v):
    """Some x with M x = v, or None."""
    M = np.asarray(M, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if M.shape[0] != v.shape[0]:
        raise DomainError("dimension mismatch")
    n = M.shape[1]
    R, piv = rref(F, np.concatenate([M, v[:, None]], axis=1))
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, n]
    return x


def solve_left(F, M, b):
    """Some y with y M = b, or None."""
    return solve(F, np.asarray(M).T, b)


def _check_ambient(U, V):
    if U.ambient != V.ambient:
        raise DomainError("ambient dimensions differ")


def sum_subspaces(U, V):
    _check_ambient(U, V)
    return Subspace.span(U.F, np.concatenate([U.basis, V.basis]), U.ambient)


def intersect(U, V):
    _check_ambient(U, V)
    F = U.F
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(F, U.ambient)
    K = left_kernel(F, np.concatenate([U.basis, V.basis]))
    if K.dim == 0:
        return Subspace.zero(F, U.ambient)
    return Subspace.span(F, F.matmul(K.basis[:, : U.dim], U.basis), U.ambient)


def annihilator(V):
    """{x : v . x = 0 for all v in V}."""
    if V.dim == 0:
        return Subspace.full(V.F, V.ambient)
    return kernel(V.F, V.basis)


def preimage(F, M, V):
    """{x : M x in V} for M of shape (m, n), V a subspace of F^m."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] != V.ambient:
        raise DomainError("shape mismatch")
    A = annihilator(V)
    if A.dim == 0:
        return Subspace.full(F, M.shape[1])
    return kernel(F, F.matmul(A.basis, M))


def random_vector(V, rng):
    F = V.F
    if V.dim == 0:
        return np.zeros(V.ambient, dtype=np.int64)
    c = F.random(rng, size=(1, V.dim))
    return F.matmul(c, V.basis)[0]


def random_nonzero(V, rng):
    if V.dim == 0:
        raise DomainError("zero space has no nonzero vector")
    F = V.F
    cap = max_trials(1.0 / (1.0 - 1.0 / F.q ** V.dim))
    for _ in range(cap):
        c = F.random(rng, size=(1, V.dim))
        if np.any(c):
            return F.matmul(c, V.basis)[0]
    raise CapExceededError("random_nonzero")


def det(F, M):
    M = np.array(M, dtype=np.int64, copy=True)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DomainError("square matrix expected")
    d = 1
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
            d = F.neg_s(d)
        a = int(M[c, c])
        d = F.mul_s(d, a)
        row = F.mul(M[c], F.inv_s(a))
        below = np.flatnonzero(M[c + 1 :, c]) + c + 1
        if below.size:
            M[below] = F.sub(M[below], F.mul(M[below, c][:, None], row[None, :]))
    return d


def inverse(F, M):
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DomainError("square matrix expected")
    R, piv = rref(F, np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise DomainError("matrix is singular")
    return R[:, n:]


def rank(F, M):
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


# Public names for the subspace sum; `builtins.sum` stays reachable below.
sum = sum_subspaces  # noqa: A001
_bsum = builtins.sum
