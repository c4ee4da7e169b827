"""Truncated homogeneous coordinate rings of curves, and zeta functions.

A ``GradedRing`` stores, for 1 <= i <= h, a monomial basis of Gamma(X, L^i)
and the values of that basis at an evaluation divisor: a list of closed
points of total degree > h * deg L, each given by one representative over a
fixed extension K of the base field.  Products of sections are computed
pointwise at these points and converted back to coordinates.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gfcore as gf
from .gfcore import DomainError, Poly

POINT_COUNT_LIMIT = 5 * 10**4


# ---------------------------------------------------------------------------
# point enumeration


def _affine_points(kind, coeffs, K):
    """All affine points over K as an (N, 2) int array (y = 0 for P^1).

    ``coeffs`` are already embedded in K.
    """
    allK = np.arange(K.q, dtype=np.int64)
    if kind == "p1":
        return np.stack([allK, np.zeros_like(allK)], axis=1)
    if kind == "elliptic":
        a1, a2, a3, a4, a6 = coeffs
        x = allK
        x2 = K.mul(x, x)
        c = K.add(K.add(K.mul(x2, x), K.mul(a2, x2)), K.add(K.mul(a4, x), a6))
        b = K.add(K.mul(a1, x), a3)
        return _solve_quadratic(K, x, b, c)
    if kind == "hyperelliptic":
        f = coeffs
        x = allK
        c = np.zeros_like(x)
        for co in reversed(f):
            c = K.add(K.mul(c, x), co)
        return _solve_quadratic(K, x, np.zeros_like(x), c)
    raise DomainError(f"unknown curve kind {kind}")


def _solve_quadratic(K, x, b, c):
    """Points (x, y) with y^2 + b y = c."""
    allK = np.arange(K.q, dtype=np.int64)
    xs, ys = [], []
    if K.p == 2:
        sq_root = np.zeros(K.q, dtype=np.int64)
        sq_root[K.mul(allK, allK)] = allK
        as_root = -np.ones(K.q, dtype=np.int64)
        as_root[K.add(K.mul(allK, allK), allK)] = allK
        zero_b = b == 0
        xs.append(x[zero_b])
        ys.append(sq_root[c[zero_b]])
        nb = ~zero_b
        bb, cc, xx = b[nb], c[nb], x[nb]
        w = K.mul(cc, K.inv(K.mul(bb, bb)))
        z = as_root[w]
        ok = z >= 0
        z0 = z[ok]
        for zz in (z0, K.add(z0, 1)):
            xs.append(xx[ok])
            ys.append(K.mul(bb[ok], zz))
    else:
        sq_root = -np.ones(K.q, dtype=np.int64)
        sq_root[K.mul(allK, allK)] = allK
        two = 2 % K.p
        inv2 = K.inv_s(two)
        # (2y + b)^2 = 4c + b^2
        D = K.add(K.mul(4 % K.p, c), K.mul(b, b))
        r = sq_root[D]
        ok = r >= 0
        for sgn in (1, -1):
            rr = r[ok] if sgn == 1 else K.neg(r[ok])
            sel = np.ones(rr.shape, dtype=bool) if sgn == 1 else rr != r[ok]
            xs.append(x[ok][sel])
            ys.append(K.mul(K.sub(rr[sel], b[ok][sel]), inv2))
    pts = np.stack([np.concatenate(xs), np.concatenate(ys)], axis=1)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return pts[order]


def _points_at_infinity(kind):
    return 1


# ---------------------------------------------------------------------------
# the graded ring


class GradedRing:
    """The truncated ring S^(h) = direct sum of Gamma(X, L^i), i <= h."""

    def __init__(self, kind, k, params, h, degL_multiplier=1):
        if h < 2:
            raise DomainError("truncation level h must be at least 2")
        self.kind = kind
        self.k = k
        self.h = h
        self.params = params
        self.mult = degL_multiplier
        if kind == "p1":
            d = params["d"]
            if d < 1:
                raise DomainError("d must be positive")
            self.g, self.degL = 0, d
        elif kind == "elliptic":
            if degL_multiplier not in (1, 2):
                raise DomainError("deg L must be 3 or 6 on an elliptic curve")
            self.g, self.degL = 1, 3 * degL_multiplier
            if _weierstrass_discriminant(k, params["a"]) == 0:
                raise DomainError("singular Weierstrass equation")
        elif kind == "hyperelliptic":
            f = Poly(k, params["f"])
            if k.p == 2:
                raise DomainError("hyperelliptic model needs odd characteristic")
            if f.degree < 3 or f.degree % 2 == 0:
                raise DomainError("f must have odd degree >= 3")
            if gf.poly_gcd(f, f.derivative()).degree > 0:
                raise DomainError("f is not squarefree")
            self.g = (f.degree - 1) // 2
            self.degL = f.degree
            self._f = f.coeffs
        else:
            raise DomainError(f"unknown curve kind {kind}")
        self.monomials = [self._monomials(i) for i in range(h + 1)]
        self._choose_evaluation()
        self._eval_cache = {}
        self._inv_cache = {}
        self._prod_cache = {}
        self._bpf_cache = {}
        for i in (1, 2):
            if self.dim(i) != i * self.degL + 1 - self.g:
                raise AssertionError("Riemann-Roch dimension check failed")

    # -- monomials and orders at infinity ---------------------------------

    def _monomials(self, i):
        if self.kind == "p1":
            return [(a, 0) for a in range(self.degL * i + 1)]
        w = 3 if self.kind == "elliptic" else self.degL
        top = self.degL * i
        out = [(a, 0) for a in range(top // 2 + 1)]
        out += [(a, 1) for a in range((top - w) // 2 + 1)] if top >= w else []
        out.sort(key=lambda m: 2 * m[0] + w * m[1])
        return out

    def pole_order(self, mono):
        """Pole order at the point at infinity of the function of a monomial."""
        a, b = mono
        if self.kind == "p1":
            return a
        w = 3 if self.kind == "elliptic" else self.degL
        return 2 * a + w * b

    def infinity_order(self, i, idx):
        """Vanishing order at infinity of basis element idx of Gamma(L^i)."""
        return self.degL * i - self.pole_order(self.monomials[i][idx])

    def dim(self, i):
        return len(self.monomials[i])

    # -- evaluation setup --------------------------------------------------

    def _coeffs_in(self, K):
        emb = gf.embedding(self.k, K)
        if self.kind == "p1":
            return None
        if self.kind == "elliptic":
            a1, a2, a3, a4, a6 = self.params["a"]
            return tuple(int(emb[c]) for c in (a1, a2, a3, a4, a6))
        return [int(emb[c]) for c in self._f]

    def affine_points(self, K):
        return _affine_points(self.kind, self._coeffs_in(K), K)

    def _choose_evaluation(self):
        need = self.h * self.degL + 1
        k = self.k
        r = 1
        while True:
            K = gf.canonical_extension(k, r)
            pts = self.affine_points(K)
            if len(pts) >= need:
                break
            r += 1
        self.K = K
        self.emb = gf.embedding(k, K)
        # one representative per Frobenius orbit
        q = k.q
        seen = set()
        reps, degs = [], []
        for x, y in pts.tolist():
            if (x, y) in seen:
                continue
            orbit = [(x, y)]
            cx, cy = K.pow_s(x, q), K.pow_s(y, q)
            while (cx, cy) != (x, y):
                orbit.append((cx, cy))
                cx, cy = K.pow_s(cx, q), K.pow_s(cy, q)
            seen.update(orbit)
            reps.append(min(orbit))
            degs.append(len(orbit))
        order = sorted(range(len(reps)), key=lambda t: reps[t])
        chosen, total = [], 0
        for t in order:
            chosen.append(t)
            total += degs[t]
            if total >= need:
                break
        self.points = np.array([reps[t] for t in chosen], dtype=np.int64)
        self.point_degrees = [degs[t] for t in chosen]
        self.N = len(self.points)

    def monomial_values(self, i, pts, K):
        """Values of the level-i basis at points (x, y) over K; shape (dim, len(pts))."""
        x, y = pts[:, 0], pts[:, 1]
        maxa = max(m[0] for m in self.monomials[i])
        xp = [np.ones_like(x)]
        for _ in range(maxa):
            xp.append(K.mul(xp[-1], x))
        rows = []
        for a, b in self.monomials[i]:
            v = xp[a]
            if b:
                v = K.mul(v, y)
            rows.append(v)
        return np.array(rows, dtype=np.int64).reshape(len(self.monomials[i]), len(pts))

    def _values(self, i):
        if i not in self._eval_cache:
            self._eval_cache[i] = self.monomial_values(i, self.points, self.K)
        return self._eval_cache[i]

    def _inverse(self, i):
        """Pivot columns and inverse for converting evaluations to coordinates."""
        if i in self._inv_cache:
            return self._inv_cache[i]
        k, K = self.k, self.K
        Fp = gf.prime_field(k.p)
        V = self._values(i)  # (m, N) over K
        m = V.shape[0]
        n, e = k.n, K.n
        omega = self.emb[k.pw]  # images of basis 1, a, a^2, ...
        # row (j, t) = digits of omega_t * b_j at all points
        rows = K.mul(V[:, None, :], omega[None, :, None])  # (m, n, N)
        Ep = K.digits[rows].reshape(m * n, self.N * e)
        _, piv = gf.rref(Fp, Ep)
        if len(piv) != m * n:
            raise AssertionError("evaluation map is not injective")
        inv = gf.inverse(Fp, Ep[:, piv])
        self._inv_cache[i] = (np.array(piv), inv)
        return self._inv_cache[i]

    # -- sections ----------------------------------------------------------

    def evaluate(self, i, C):
        """Values at the evaluation points of sections with coordinates C (rows)."""
        C = np.asarray(C, dtype=np.int64).reshape(-1, self.dim(i))
        return self.K.matmul(self.emb[C], self._values(i))

    def from_values(self, i, V):
        """Coordinates of sections of L^i given by their values (rows)."""
        k, K = self.k, self.K
        V = np.asarray(V, dtype=np.int64)
        piv, inv = self._inverse(i)
        D = K.digits[V].reshape(V.shape[0], self.N * K.n)[:, piv]
        c = (D @ inv) % k.p
        return c.reshape(V.shape[0], self.dim(i), k.n) @ k.pw

    def multiply(self, i, A, j, B):
        """All products a*b (a-major) of rows of A (level i) and B (level j)."""
        if i + j > self.h:
            raise DomainError(f"level {i + j} exceeds truncation {self.h}")
        VA = self.evaluate(i, A)
        VB = self.evaluate(j, B)
        P = self.K.mul(VA[:, None, :], VB[None, :, :]).reshape(-1, self.N)
        return self.from_values(i + j, P)

    def multiply_rows(self, i, A, j, B):
        """Row-wise products a_r * b_r."""
        if i + j > self.h:
            raise DomainError(f"level {i + j} exceeds truncation {self.h}")
        P = self.K.mul(self.evaluate(i, A), self.evaluate(j, B))
        return self.from_values(i + j, P)

    def product_table(self, i, j):
        """T[a, b] = coordinates of basis_a * basis_b."""
        key = (i, j)
        if key not in self._prod_cache:
            T = self.multiply(i, np.eye(self.dim(i), dtype=np.int64), j, np.eye(self.dim(j), dtype=np.int64))
            self._prod_cache[key] = T.reshape(self.dim(i), self.dim(j), self.dim(i + j))
        return self._prod_cache[key]

    def full_space(self, i):
        return gf.Subspace.full(self.k, self.dim(i))

    def bpf_pair(self, j):
        """Two sections of L^j without common zeros: the monomials with
        maximal and zero pole order at infinity."""
        if j not in self._bpf_cache:
            m = self.dim(j)
            B = np.zeros((2, m), dtype=np.int64)
            B[0, 0] = 1
            B[1, m - 1] = 1
            self._bpf_cache[j] = gf.Subspace.span(self.k, B, m)
        return self._bpf_cache[j]

    def infinity_space(self, i, r):
        """Gamma(L^i(-r * infinity)) as the span of monomials vanishing to order >= r."""
        m = self.dim(i)
        idx = [t for t in range(m) if self.infinity_order(i, t) >= r]
        B = np.zeros((len(idx), m), dtype=np.int64)
        for row, t in enumerate(idx):
            B[row, t] = 1
        return gf.Subspace.span(self.k, B, m)

    # -- identity / serialisation -------------------------------------------

    def description(self):
        d = {"kind": self.kind, "p": self.k.p, "n": self.k.n, "field_poly": list(self.k.modulus), "h": self.h}
        if self.kind == "p1":
            d["d"] = self.params["d"]
        elif self.kind == "elliptic":
            for name, v in zip(("a1", "a2", "a3", "a4", "a6"), self.params["a"]):
                d[name] = self.k.coeffs(v)
            if self.mult != 1:
                d["degL"] = 3 * self.mult
        else:
            d["f"] = [self.k.coeffs(c) for c in self.params["f"]]
        return d

    @cached_property
    def curve_hash(self):
        s = json.dumps(self.description(), sort_keys=True)
        return hashlib.sha256(s.encode()).hexdigest()[:16]

    def __repr__(self):
        return f"GradedRing({self.kind}, {self.k}, g={self.g}, degL={self.degL}, h={self.h})"

    def same_curve(self, other):
        return self.description() == other.description()

    def with_h(self, h):
        return _rebuild(self, self.k, h, None)

    def point_count(self, r=1):
        """#X(F_{q^r})."""
        if self.k.q ** r > POINT_COUNT_LIMIT:
            raise DomainError("field too large for point enumeration")
        K = gf.canonical_extension(self.k, r)
        return len(self.affine_points(K)) + _points_at_infinity(self.kind)


def _rebuild(X, k_new, h, emb):
    if emb is None:
        params = X.params
    elif X.kind == "p1":
        params = X.params
    elif X.kind == "elliptic":
        params = {"a": tuple(int(emb[c]) for c in X.params["a"])}
    else:
        params = {"f": [int(emb[c]) for c in X.params["f"]]}
    return GradedRing(X.kind, k_new, params, h, X.mult)


def base_change(X, k_new):
    """The same curve (same model and basis) over an extension of its base field."""
    if k_new == X.k:
        return X
    cache = X.__dict__.setdefault("_base_changes", {})
    key = (k_new.p, tuple(k_new.modulus))
    if key not in cache:
        emb = gf.embedding(X.k, k_new)
        Y = _rebuild(X, k_new, X.h, emb)
        Y.base = X
        cache[key] = Y
    return cache[key]


def _weierstrass_discriminant(k, a):
    a1, a2, a3, a4, a6 = a
    m, ad, s = k.mul_s, k.add_s, k.sub_s
    b2 = ad(m(a1, a1), m(4 % k.p, a2))
    b4 = ad(m(2 % k.p, a4), m(a1, a3))
    b6 = ad(m(a3, a3), m(4 % k.p, a6))
    b8 = s(ad(ad(m(m(a1, a1), a6), m(m(4 % k.p, a2), a6)), s(m(a2, m(a3, a3)), m(a1, m(a3, a4)))), m(a4, a4))
    t1 = m(m(b2, b2), b8)
    t2 = m(8 % k.p, m(b4, m(b4, b4)))
    t3 = m(27 % k.p, m(b6, b6))
    t4 = m(9 % k.p, m(b2, m(b4, b6)))
    return ad(s(s(k.neg_s(t1), t2), t3), t4)


def _field_value(k, v):
    """Accept an int (already encoded) or a coefficient list."""
    if isinstance(v, (list, tuple)):
        return k.from_coeffs(v)
    return int(v) % k.q if k.n == 1 else int(v)


def build_p1(k, d, h):
    return GradedRing("p1", k, {"d": int(d)}, h)


def build_elliptic(k, a1, a2, a3, a4, a6, h, degL=3):
    if degL not in (3, 6):
        raise DomainError("deg L must be 3 or 6")
    a = tuple(_field_value(k, v) for v in (a1, a2, a3, a4, a6))
    return GradedRing("elliptic", k, {"a": a}, h, degL // 3)


def build_hyperelliptic(k, f, h):
    if isinstance(f, Poly):
        coeffs = f.coeffs
    else:
        coeffs = [_field_value(k, v) for v in f]
    return GradedRing("hyperelliptic", k, {"f": list(Poly(k, coeffs).coeffs)}, h)


def from_description(desc):
    p = int(desc["p"])
    n = int(desc.get("n", 1))
    if "field_poly" in desc and desc["field_poly"] is not None and n > 1:
        k = gf.Field(p, desc["field_poly"])
    else:
        k = gf.canonical_extension(gf.prime_field(p), n)
    h = int(desc.get("h", 7))
    kind = desc["kind"]
    if kind == "p1":
        return build_p1(k, int(desc["d"]), h)
    if kind == "elliptic":
        vals = [desc.get(nm, 0) for nm in ("a1", "a2", "a3", "a4", "a6")]
        return build_elliptic(k, *vals, h, degL=int(desc.get("degL", 3)))
    if kind == "hyperelliptic":
        return build_hyperelliptic(k, desc["f"], h)
    raise DomainError(f"unknown curve kind {kind}")


# ---------------------------------------------------------------------------
# zeta functions


@dataclass(frozen=True)
class ZetaData:
    q: int
    g: int
    L: tuple  # integer coefficients a_0..a_2g

    def __post_init__(self):
        L = self.L
        if len(L) != 2 * self.g + 1 or L[0] != 1:
            raise DomainError("L must have degree 2g and constant term 1")
        for i in range(self.g + 1):
            if L[2 * self.g - i] != self.q ** (self.g - i) * L[i]:
                raise DomainError("functional equation violated")

    def power_sum(self, n):
        """s_n = sum of n-th powers of the inverse roots."""
        a = list(self.L) + [0] * max(0, n + 1 - len(self.L))
        s = [0] * (n + 1)
        for m in range(1, n + 1):
            v = -m * a[m]
            for i in range(1, m):
                v -= s[i] * a[m - i]
            s[m] = v
        return s[n]

    def inverse_roots(self):
        # roots of t^{2g} L(1/t)
        if self.g == 0:
            return np.array([])
        return np.roots(list(self.L))

    def points(self, n):
        return self.q**n + 1 - self.power_sum(n)

    def over_extension(self, r):
        """Zeta data of the base change to the degree-r extension."""
        g = self.g
        s = [self.power_sum(r * m) for m in range(1, g + 1)]
        return ZetaData.from_power_sums(self.q**r, g, s)

    @classmethod
    def from_power_sums(cls, q, g, s):
        a = [1] + [0] * (2 * g)
        for n in range(1, g + 1):
            v = 0
            for i in range(1, n + 1):
                v -= s[i - 1] * a[n - i]
            if v % n:
                raise DomainError("inconsistent point counts")
            a[n] = v // n
        for i in range(g + 1, 2 * g + 1):
            a[i] = q ** (i - g) * a[2 * g - i]
        return cls(q, g, tuple(a))

    def char_poly(self):
        """Characteristic polynomial of Frobenius: t^{2g} L(1/t), low degree first."""
        return list(reversed(self.L))


def zeta_from_point_counts(X, counter=None):
    """ZetaData from #X(F_{q^i}), i = 1..g (counter(i) -> int)."""
    q, g = X.k.q, X.g
    if q**g > POINT_COUNT_LIMIT:
        raise DomainError("q^g exceeds the point-counting limit")
    if counter is None:
        counter = X.point_count
    s = []
    for i in range(1, g + 1):
        si = q**i + 1 - int(counter(i))
        if abs(si) > 2 * g * math.sqrt(q**i) + 1e-9:
            raise DomainError("point counts violate the Weil bound")
        s.append(si)
    return ZetaData.from_power_sums(q, g, s)


def count_effective(Z, n):
    if n < 0:
        raise DomainError("n must be non-negative")
    q = Z.q
    return sum(Z.L[i] * (q ** (n - i + 1) - 1) // (q - 1) for i in range(min(n, 2 * Z.g) + 1))


def _mobius(n):
    res, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            res = -res
        d += 1
    if m > 1:
        res = -res
    return res


def count_prime_divisors(Z, n):
    if n < 1:
        raise DomainError("n must be positive")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(n // d) * Z.points(d)
    if total % n:
        raise AssertionError("non-integral prime divisor count")
    return total // n


def class_number(Z):
    return sum(Z.L)
