"""Finite morphisms between projective curves given by graded homomorphisms.

A morphism f: X -> Y is stored as the linear maps
f#_i: Gamma(Y, L_Y^i) -> Gamma(X, L_X^i) for i <= h, each a matrix whose
rows are the images of the monomial basis of Y (so a section with
coordinate row c maps to c @ maps[i]).
"""

from __future__ import annotations

import numpy as np

from . import curve as cv
from . import divisor as dv
from . import gfcore as gf
from .gfcore import DomainError, Poly, Subspace


class FiniteMorphism:
    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        self.h = min(source.h, target.h)
        self.maps = {i: np.asarray(maps[i], dtype=np.int64) for i in range(1, self.h + 1)}
        if source.degL % target.degL:
            raise DomainError("deg L_X is not a multiple of deg L_Y")
        self.degree = source.degL // target.degL
        if check:
            self.validate()

    def validate(self):
        X, Y, k = self.source, self.target, self.source.k
        if X.k != Y.k:
            raise DomainError("source and target have different base fields")
        for i, M in self.maps.items():
            if M.shape != (Y.dim(i), X.dim(i)):
                raise DomainError(f"f#_{i} has shape {M.shape}")
        if gf.rank(k, self.maps[1]) != Y.dim(1):
            raise DomainError("f#_1 is not injective")
        for i in range(1, self.h):
            for j in range(i, self.h - i + 1):
                TY = Y.product_table(i, j).reshape(Y.dim(i) * Y.dim(j), Y.dim(i + j))
                lhs = k.matmul(TY, self.maps[i + j])
                rhs = dv.mult_coords(X, i, self.maps[i], j, self.maps[j])
                if not np.array_equal(lhs, rhs):
                    raise DomainError(f"f# is not multiplicative in degrees {i}, {j}")

    def apply(self, i, C):
        """f#_i applied to the rows of C."""
        C = np.asarray(C, dtype=np.int64).reshape(-1, self.target.dim(i))
        return self.source.k.matmul(C, self.maps[i])

    def to_dict(self):
        return {
            "source": self.source.description(),
            "target": self.target.description(),
            "maps": {str(i): self.maps[i].tolist() for i in self.maps},
        }

    @classmethod
    def from_dict(cls, d):
        X = cv.from_description(d["source"])
        Y = cv.from_description(d["target"])
        return cls(X, Y, {int(i): np.array(m) for i, m in d["maps"].items()})

    def __repr__(self):
        return f"FiniteMorphism(deg={self.degree}, {self.source!r} -> {self.target!r})"


def compose(f, g):
    """g o f for f: X -> Y and g: Y -> Z (f# o g# on sections)."""
    if f.target is not g.source:
        raise DomainError("morphisms do not compose")
    h = min(f.h, g.h)
    k = f.source.k
    return FiniteMorphism(f.source, g.target, {i: k.matmul(g.maps[i], f.maps[i]) for i in range(1, h + 1)})


# ---------------------------------------------------------------------------
# constructors


def power_map(k, d, m, h):
    """(u:v) -> (u^m : v^m) from P^1 with O(m d) to P^1 with O(d)."""
    Y = cv.build_p1(k, d, h)
    X = cv.build_p1(k, m * d, h)
    maps = {}
    for i in range(1, h + 1):
        M = np.zeros((Y.dim(i), X.dim(i)), dtype=np.int64)
        for a in range(Y.dim(i)):
            M[a, m * a] = 1
        maps[i] = M
    return FiniteMorphism(X, Y, maps)


def x_map(k, a, h):
    """(x, y) -> x from the Weierstrass curve with L = O(6 inf) to P^1 with O(3)."""
    X = cv.build_elliptic(k, *a, h, degL=6)
    Y = cv.build_p1(k, 3, h)
    maps = {}
    for i in range(1, h + 1):
        index = {mono: t for t, mono in enumerate(X.monomials[i])}
        M = np.zeros((Y.dim(i), X.dim(i)), dtype=np.int64)
        for e in range(Y.dim(i)):
            M[e, index[(e, 0)]] = 1
        maps[i] = M
    return FiniteMorphism(X, Y, maps)


def identity_map(X):
    return FiniteMorphism(X, X, {i: np.eye(X.dim(i), dtype=np.int64) for i in range(1, X.h + 1)})


def negation_map(X):
    """The hyperelliptic involution y -> -y - a1 x - a3 (y -> -y for y^2 = f)."""
    if X.kind == "p1":
        raise DomainError("P^1 has no hyperelliptic involution in this model")
    k = X.k
    a1, a3 = (X.params["a"][0], X.params["a"][2]) if X.kind == "elliptic" else (0, 0)
    maps = {}
    for i in range(1, X.h + 1):
        index = {mono: t for t, mono in enumerate(X.monomials[i])}
        M = np.zeros((X.dim(i), X.dim(i)), dtype=np.int64)
        for t, (a, b) in enumerate(X.monomials[i]):
            if b == 0:
                M[t, t] = 1
                continue
            M[t, t] = k.neg_s(1)
            if a1:
                M[t, index[(a + 1, 0)]] = k.neg_s(a1)
            if a3:
                M[t, index[(a, 0)]] = k.neg_s(a3)
        maps[i] = M
    return FiniteMorphism(X, X, maps)


# ---------------------------------------------------------------------------
# images, pull-backs, push-forwards


def image_divisor(f, D):
    """Schematic image f(D), at the level of D."""
    i = D.level
    if i > f.h:
        raise dv.TruncationError(f"level {i} exceeds the truncation of the morphism")
    W = gf.preimage(f.source.k, f.maps[i].T, D.space)
    return dv.DivisorRep(f.target, i, W)


def _pull_back_level(f, i, degE):
    X = f.source
    for j in range(1, f.h - i + 1):
        if (j - i) * X.degL + f.degree * degE >= 2 * X.g - 1:
            return j
    raise dv.TruncationError("no helper level for the pull-back")


def pull_back(f, E, j=None):
    """f^*E at the level of E."""
    X, Y = f.source, f.target
    i, degE = E.level, E.degree
    if f.degree * degE > i * X.degL - 2 * X.g or degE > i * Y.degL - 2 * Y.g:
        raise DomainError("divisor too large for a pull-back at this level")
    if degE == 0:
        return dv.zero_divisor(X, i)
    if j is None:
        j = _pull_back_level(f, i, degE)
    elif (j - i) * X.degL + f.degree * degE < 2 * X.g - 1:
        raise DomainError("helper level too small for the pull-back")
    dv._need(X, i + j)
    W = Subspace.span(X.k, f.apply(i, E.space.basis), X.dim(i))
    res = dv.DivisorRep(X, i, dv.inflate(X, W, i, j=j))
    if res.degree != f.degree * degE:
        raise AssertionError("pull-back has the wrong degree")
    return res


def push_forward(f, D, rng):
    """f_*D at the level of D."""
    X, Y = f.source, f.target
    i = D.level
    if D.degree > i * X.degL - 2 * X.g - 1 or D.degree > i * Y.degL - 2 * Y.g:
        raise DomainError("divisor too large for a push-forward at this level")
    total = dv.zero_divisor(Y, i)
    for part in dv.decompose(D, rng):
        Q = image_divisor(f, part.prime)
        if part.degree % Q.degree:
            raise AssertionError("residue degree of the image does not divide")
        for _ in range(part.multiplicity * (part.degree // Q.degree)):
            total = dv.add_divisors(total, Q, i)
    return total


def ramification_index(f, P, rng):
    """Multiplicity of the prime P in f^*(f(P))."""
    X, Y = f.source, f.target
    i = P.level
    while f.degree * P.degree > i * X.degL - 2 * X.g:
        i += 1
    if 2 * i > X.h:
        raise dv.TruncationError("no level large enough for the ramification index")
    Pi = dv.at_level(P, i)
    E = pull_back(f, image_divisor(f, Pi))
    for part in dv.decompose(E, rng):
        if part.prime == Pi:
            return part.multiplicity
    raise AssertionError("prime does not occur in the pull-back of its image")


# ---------------------------------------------------------------------------
# push-forward by a rational function


def _point_of(X, W):
    """Coordinates of the rational point cut out by W at level 2 (None for infinity)."""
    a = gf.annihilator(W)
    if a.dim != 1:
        raise DomainError("not a rational point")
    v = a.basis[0]
    K = X.k
    mono = X.monomials[2]
    c = v[mono.index((0, 0))]
    if c == 0:
        return None
    v = K.mul(v, K.inv_s(int(c)))
    x = int(v[mono.index((1, 0))])
    y = int(v[mono.index((0, 1))]) if X.kind != "p1" else 0
    return (x, y)


def _values_at(X, i, pt, C):
    """Values of level-i sections C (rows) at a rational point; None is infinity."""
    K = X.k
    if pt is None:
        # only the monomial of full pole order is nonzero at infinity
        return [int(c) for c in np.asarray(C)[:, -1]]
    vals = X.monomial_values(i, np.array([pt], dtype=np.int64), K)[:, 0]
    return [int(c) for c in K.matmul(np.asarray(C, dtype=np.int64), vals[:, None])[:, 0]]


def _norm_form(k, K, a, b):
    """Coefficients over k (by power of u) of N_{K/k}(b u - a v)."""
    e = K.n // k.n
    prod = Poly(K, [1])
    for t in range(e):
        at, bt = K.pow_s(a, k.q ** t), K.pow_s(b, k.q ** t)
        prod = prod * Poly(K, [K.neg_s(at), bt])
    coeffs = prod.coeffs + [0] * (e + 1 - len(prod.coeffs))
    back = gf.restriction(k, K)
    out = [int(back[c]) for c in coeffs]
    if min(out) < 0:
        raise AssertionError("norm form is not defined over the base field")
    return out


def _homog_mul(k, f, g):
    return (Poly(k, f) * Poly(k, g)).coeffs


def push_forward_by_function(X, s, t, i, D, rng):
    """Binary form of degree deg D defining psi_*D for psi = s/t.

    s and t are sections of L^i; D is given at level 2.  The result lists the
    coefficients of u^j v^(d-j) for j = 0..d, scaled so that the highest
    nonzero coefficient is 1.  A common zero of s and t on the support of D
    is an error.
    """
    k = X.k
    s = np.asarray(s, dtype=np.int64).reshape(1, X.dim(i))
    t = np.asarray(t, dtype=np.int64).reshape(1, X.dim(i))
    if gf.rank(k, np.concatenate([s, t])) < 2:
        raise DomainError("s/t is constant")
    if D.level != 2:
        D = dv.at_level(D, 2)
    d = D.degree
    if d > X.degL:
        raise DomainError("degree of D exceeds deg L")
    result = [1]
    for part in dv.decompose(D, rng):
        e = part.degree
        K = gf.canonical_extension(k, e)
        XK = cv.base_change(X, K)
        emb = gf.embedding(k, K)
        QK = dv.DivisorRep(XK, 2, Subspace.span(K, emb[part.prime.space.basis], X.dim(2)))
        pts = []
        for sub in dv.decompose(QK, rng):
            if sub.degree == 1:
                pts.append(_point_of(XK, sub.prime.space))
        if not pts:
            raise AssertionError("base-changed prime has no rational point")
        pt = min(pts, key=lambda p: (p is None, p or (0, 0)))
        a, b = _values_at(XK, i, pt, np.concatenate([emb[s], emb[t]]))
        if a == 0 and b == 0:
            raise DomainError("s and t have a common zero on the support of D")
        form = _norm_form(k, K, a, b)
        for _ in range(part.multiplicity):
            result = _homog_mul(k, result, form)
    result = result + [0] * (d + 1 - len(result))
    top = max(j for j, c in enumerate(result) if c)
    return [int(c) for c in k.mul(np.array(result, dtype=np.int64), k.inv_s(result[top]))]
