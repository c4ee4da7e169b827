"""Relations among l-torsion points, Kummer data and a basis of J[l](k)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curve as cv
from . import gfcore as gf
from . import pairing as pr
from . import picard as pc
from . import sampler
from .gfcore import CapExceededError, DomainError, Poly


def generation_sample_size(d, alpha, field_size):
    """Number of uniform vectors that generate a d-dimensional space with probability >= alpha."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    if d < 0:
        raise DomainError("d must be non-negative")
    if d == 0:
        return 0
    return d - 1 + math.ceil(math.log(1 / (1 - alpha ** (1 / d))) / math.log(field_size))


# ---------------------------------------------------------------------------
# integer polynomials (little-endian lists) modulo N


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, N):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim(c % N for c in out)


def _padd(f, g, N):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim((a + b) % N for a, b in zip(f, g))


def _pmod(f, m, N):
    """f mod the monic polynomial m, coefficients mod N."""
    f = [c % N for c in f]
    dm = len(m) - 1
    for i in range(len(f) - 1, dm - 1, -1):
        c = f[i]
        if c:
            for j in range(dm + 1):
                f[i - dm + j] = (f[i - dm + j] - c * m[j]) % N
    return _trim(f[:dm] if dm >= 0 else [])


def _to_Fl(Fl, f):
    return Poly(Fl, [c % Fl.p for c in f])


def _hensel_lift(chi, g, h, l, N):
    """Lift chi = g h mod l (g, h monic, coprime) to chi = g h mod l^N."""
    Fl = gf.prime_field(l)
    one, s, t = gf.poly_xgcd(_to_Fl(Fl, g), _to_Fl(Fl, h))
    if one.coeffs != [1]:
        raise DomainError("factors are not coprime mod l")
    s, t = s.coeffs, t.coeffs
    for j in range(1, N):
        lj = l**j
        mod = lj * l
        diff = _padd(chi, [-c for c in _pmul(g, h, mod)], mod)
        if any(c % lj for c in diff):
            raise AssertionError("Hensel lifting lost precision")
        delta = [(c // lj) % l for c in diff]
        A = _pmod(_pmul(delta, t, l), g, l)
        B = _pmod(_pmul(delta, s, l), h, l)
        g = _padd(g, [lj * c for c in A], mod)
        h = _padd(h, [lj * c for c in B], mod)
    return g, h


def _inverse_mod(a, m, l, N):
    """Inverse of a modulo the monic m over Z/l^N, by Newton iteration."""
    Fl = gf.prime_field(l)
    one, w, _ = gf.poly_xgcd(_to_Fl(Fl, a), _to_Fl(Fl, m))
    if one.coeffs != [1]:
        raise DomainError("not invertible mod l")
    w = w.coeffs
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        mod = l**prec
        aw = _pmod(_pmul(a, w, mod), m, mod)
        two_minus = _padd([2], [-c for c in aw], mod)
        w = _pmod(_pmul(w, two_minus, mod), m, mod)
    return w


@dataclass(frozen=True)
class KummerData:
    l: int
    chi: tuple  # characteristic polynomial of Frobenius, t^(2g) L(1/t), low degree first
    b: int
    precision: int  # f, f_perp, e and h_a are known modulo l^precision
    f: tuple
    f_perp: tuple
    a: int
    c_a: int
    m_a: int
    e: tuple  # idempotent of the f-component, reduced mod chi
    h_a: tuple  # (t^a - 1) / l mod f

    def factorisation_report(self):
        return {
            "l": self.l,
            "chi": list(self.chi),
            "b": self.b,
            "a": self.a,
            "c_a": self.c_a,
            "m_a": self.m_a,
            "precision": self.precision,
            "f": list(self.f),
            "f_perp": list(self.f_perp),
            "e": list(self.e),
            "h_a": list(self.h_a),
        }


def kummer_data(Z, l, X=None):
    """Kummer data for the l-divisible group cut out by the eigenvalue one."""
    if X is not None and X.k.p == l:
        raise DomainError("l equals the characteristic")
    if Z.q % l == 0:
        raise DomainError("l equals the characteristic")
    if not gf._is_prime(l):
        raise DomainError("l must be prime")
    chi = Z.char_poly()
    Fl = gf.prime_field(l)
    chibar = _to_Fl(Fl, chi)
    lin = Poly(Fl, [Fl.neg_s(1), 1])
    b, fbar = 0, Poly.one(Fl)
    rest = chibar
    while True:
        qt, r = rest.divmod(lin)
        if not r.is_zero():
            break
        rest, fbar, b = qt, fbar * lin, b + 1
    if b == 0:
        return KummerData(l, tuple(chi), 0, 1, (1,), tuple(chi), 1, 0, 1, (), ())
    gamma = 0
    while l**gamma < b:
        gamma += 1
    a = l**gamma
    order = cv.class_number(Z.over_extension(a))
    c_a, m_a = 0, order
    while m_a % l == 0:
        c_a, m_a = c_a + 1, m_a // l
    # h_a is needed to precision l^c_a, which requires t^a - 1 mod f to l^(c_a + 1)
    N = c_a + 1
    f, fp = _hensel_lift(chi, fbar.coeffs, rest.coeffs, l, N)
    mod = l**N
    w = _inverse_mod(fp, f, l, N)
    e = _pmod(_pmul(w, fp, mod), chi, mod)
    ta = _pmod(_padd([0] * a + [1], [-1], mod), f, mod)
    if any(c % l for c in ta):
        raise AssertionError("t^a - 1 is not divisible by l modulo f")
    h_a = [(c // l) % l**c_a for c in ta]
    e = [c % l**c_a for c in e]
    return KummerData(l, tuple(chi), b, N, tuple(f), tuple(fp), a, c_a, m_a, tuple(e), tuple(_trim(h_a)))


# ---------------------------------------------------------------------------
# Picard arithmetic helpers


def _linear_combination(X, coeffs, points):
    total = pc.zero_element(X)
    for c, x in zip(coeffs, points):
        if c:
            total = pc.add(total, pc.scalar_mul(int(c), x))
    return total


def _apply_poly(ctx, poly, x):
    """poly(F_q)(x) for an integer polynomial with non-negative coefficients."""
    X = x.curve
    total = pc.zero_element(X)
    y = x
    for i, c in enumerate(poly):
        if i:
            y = sampler.frobenius_point(ctx, y)
        if c:
            total = pc.add(total, pc.scalar_mul(int(c), y))
    return total


def _mu_l_degree(q, l):
    e, v = 1, q % l
    while v != 1:
        v, e = (v * q) % l, e + 1
    return e


def _zeta_of(X, Z):
    """Zeta data of X from the zeta data of the curve it was base-changed from."""
    base = getattr(X, "base", None)
    if Z is None:
        return cv.zeta_from_point_counts(X)
    if Z.q == X.k.q:
        return Z
    if base is not None and Z.q == base.k.q:
        return Z.over_extension(X.k.n // base.k.n)
    raise DomainError("zeta data does not belong to this curve")


@dataclass
class RelationBasis:
    l: int
    vectors: list  # rows, entries in F_l

    @property
    def dim(self):
        return len(self.vectors)


def find_relations(X, points, l, alpha, rng, Z=None, max_rounds=None):
    """Basis of the kernel of (c_i) -> sum c_i x_i on F_l^n, for l-torsion x_i on X."""
    if X.k.p == l:
        raise DomainError("l equals the characteristic")
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    if X.h < 7:
        raise gf.DomainError("finding relations needs h >= 7")
    n = len(points)
    Fl = gf.prime_field(l)
    if n == 0:
        return RelationBasis(l, [])
    Z = _zeta_of(X, Z)
    e = _mu_l_degree(X.k.q, l)
    K = gf.canonical_extension(X.k, e)
    XK = cv.base_change(X, K)
    ZK = Z.over_extension(e) if e > 1 else Z
    table = sampler.SmoothCountTable(ZK)
    xs = [pc.base_extend(x, XK) if e > 1 else x for x in points]
    pairings = [pr.FreyRuck(x, l, rng) for x in xs]
    m = generation_sample_size(n, alpha, l)
    rounds = max_rounds or gf.max_trials(1 / alpha)
    for _ in range(rounds):
        ys = [sampler.random_picard_element(XK, table, rng) for _ in range(m)]
        M = np.array([[P(y, rng)[1] for P in pairings] for y in ys], dtype=np.int64).reshape(m, n)
        ker = gf.kernel(Fl, M)
        if all(pc.is_zero(_linear_combination(X, b, points)) for b in ker.basis):
            return RelationBasis(l, [[int(c) for c in b] for b in ker.basis])
    raise CapExceededError("no verified relation basis found")


# ---------------------------------------------------------------------------
# random elements of G[l](k_a) and the basis of J[l](k)


def _curve_over(X, a):
    return cv.base_change(X, gf.canonical_extension(X.k, a))


def random_Gl_element(X, kd, rng, Z=None, table=None):
    """Uniform element of G[l](k_a), as a Picard element of X over k_a."""
    Xa = _curve_over(X, kd.a)
    if kd.b == 0:
        return pc.zero_element(Xa)
    if X.h < 7:
        raise gf.DomainError("sampling G[l] needs h >= 7")
    if table is None:
        Z = _zeta_of(X, Z)
        table = sampler.SmoothCountTable(Z.over_extension(kd.a) if kd.a > 1 else Z)
    ctx = sampler.FrobeniusContext(X.k, Xa.k)
    x = sampler.random_picard_element(Xa, table, rng)
    y = pc.scalar_mul(kd.m_a, x) if kd.m_a > 1 else x
    z = _apply_poly(ctx, kd.e, y)
    return _apply_poly(ctx, kd.h_a, z)


@dataclass
class TorsionBasis:
    basis: list  # PicardElements over k_a
    frobenius_matrix: list
    kummer: KummerData


def _independent_subsequence(rel, r):
    """Indices of a maximal independent subsequence given the relation basis."""
    if not rel.vectors:
        return list(range(r))
    R, piv = gf.rref(gf.prime_field(rel.l), np.array(rel.vectors, dtype=np.int64))
    return [i for i in range(r) if i not in set(piv)]


def l_torsion_basis(X, Z, l, alpha, rng, O=None, max_rounds=None):
    """F_l-basis of J[l](k).  With a degree-one divisor O the output is descended to k."""
    kd = kummer_data(Z, l, X)
    if kd.b == 0:
        return TorsionBasis([], [], kd)
    Xa = _curve_over(X, kd.a)
    Za = Z.over_extension(kd.a) if kd.a > 1 else Z
    table = sampler.SmoothCountTable(Za)
    r = generation_sample_size(kd.b, alpha, l)
    rounds = max_rounds or gf.max_trials(1 / alpha)
    for _ in range(rounds):
        xs = [random_Gl_element(X, kd, rng, table=table) for _ in range(r)]
        rel = find_relations(Xa, xs, l, alpha, rng, Z=Z)
        if rel.dim <= r - kd.b:
            break
    else:
        raise CapExceededError("random elements did not generate G[l]")
    ys = [xs[i] for i in _independent_subsequence(rel, r)]
    if len(ys) != kd.b:
        raise AssertionError("G[l] has unexpected dimension")
    ctx = sampler.FrobeniusContext(X.k, Xa.k)
    Fl = gf.prime_field(l)
    M = np.zeros((kd.b, kd.b), dtype=np.int64)
    for i, y in enumerate(ys):
        Fy = sampler.frobenius_point(ctx, y)
        rel = find_relations(Xa, ys + [Fy], l, alpha, rng, Z=Z)
        row = next((v for v in rel.vectors if v[-1] % l), None)
        if row is None:
            raise AssertionError("Frobenius image is not in the span of the basis")
        c = Fl.neg_s(Fl.inv_s(row[-1]))
        M[i] = Fl.mul(np.array(row[:-1], dtype=np.int64), c)
    fixed = gf.left_kernel(Fl, Fl.sub(M, np.eye(kd.b, dtype=np.int64)))
    zs = [_linear_combination(Xa, v, ys) for v in fixed.basis]
    if O is not None and kd.a > 1:
        out = []
        for z in zs:
            ok, zk = pc.descend(z, O)
            if not ok:
                raise AssertionError("Frobenius-fixed element did not descend")
            out.append(zk)
        zs = out
    return TorsionBasis(zs, M.tolist(), kd)
