"""Degree-zero Picard group in the medium model.

An element x is stored as Gamma(L^2(-D)) for an effective divisor D of
degree deg L with x = [L(-D)].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curve as cv
from . import divisor as dv
from . import gfcore as gf
from . import morphism as mo
from .gfcore import DomainError, Subspace


@dataclass(frozen=True, eq=False)
class PicardElement:
    curve: object
    space: Subspace

    @property
    def divisor(self):
        return dv.DivisorRep(self.curve, 2, self.space)

    def key(self):
        return self.space.key()

    def __repr__(self):
        return f"PicardElement(codim={self.space.codim})"


def make_element(X, space, check=True):
    if space.ambient != X.dim(2):
        raise DomainError("space is not a subspace of Gamma(L^2)")
    if check and not dv.is_valid_divisor_space(X, space, X.degL, 2):
        raise DomainError("space does not represent an element of Pic^0")
    return PicardElement(X, space)


def _need5(X):
    if X.h < 5:
        raise dv.TruncationError("Picard group arithmetic needs h >= 5")


# ---------------------------------------------------------------------------
# zero element, zero test, addflip


def zero_element_with_section(X, rng=None, u=None):
    """u * Gamma(L) for a nonzero u in Gamma(L), together with u.

    Without u or rng the constant section (first monomial) is used."""
    if u is None:
        if rng is None:
            u = np.zeros(X.dim(1), dtype=np.int64)
            u[0] = 1
        else:
            u = gf.random_nonzero(X.full_space(1), rng)
    u = np.asarray(u, dtype=np.int64)
    return PicardElement(X, dv.divisor_of_section(X, u, 1, 2).space), u


def zero_element(X, rng=None, u=None):
    return zero_element_with_section(X, rng, u)[0]


def zero_test(x):
    """(True, s) with div s = D when [L(-D)] = 0, else (False, None)."""
    X = x.curve
    V = dv.divide(X, x.space, X.bpf_pair(1), 1)
    if V.dim == 0:
        return False, None
    return True, V.basis[0].copy()


def is_zero(x):
    return zero_test(x)[0]


def addflip(x, y):
    """An element representing -x-y and s in Gamma(L^3) with div s = D + E + F."""
    X = x.curve
    _need5(X)
    U4 = dv.mult_spaces(X, x.space, 2, y.space, 2)
    V3 = dv.divide(X, U4, X.bpf_pair(1), 3)
    s = V3.basis[0].copy()
    U5 = dv.multiply_by_section(X, s, 3, X.full_space(2), 2)
    F = dv.divide(X, U5, V3, 2, div_level=3)
    if F.codim != X.degL:
        raise AssertionError("addflip produced a space of the wrong codimension")
    return PicardElement(X, F), s


def neg(x):
    return addflip(x, zero_element(x.curve))[0]


def add(x, y):
    return neg(addflip(x, y)[0])


def sub(x, y):
    return addflip(neg(x), y)[0]


def equal(x, y):
    return is_zero(sub(x, y))


# ---------------------------------------------------------------------------
# anti-addition chains


@dataclass
class AntiAdditionChain:
    values: list
    pairs: list = field(default_factory=list)  # pairs[l - 2] = (i(l), j(l))

    @property
    def length(self):
        return len(self.values) - 1

    def check(self):
        if self.values[:2] != [0, 1]:
            return False
        for l, (i, j) in enumerate(self.pairs, start=2):
            if not (i < l and j < l) or self.values[l] != -self.values[i] - self.values[j]:
                return False
        return len(self.pairs) == len(self.values) - 2


def find_anti_addition_chain(n):
    """Binary method with sign tracking: doubling is -(c + c), a one bit
    is added through -1 = -(1 + 0), and a final -(c + 0) fixes the sign."""
    n = int(n)
    if n == 0:
        raise DomainError("n must be nonzero")
    vals, pairs = [0, 1], []

    def push(i, j):
        vals.append(-vals[i] - vals[j])
        pairs.append((i, j))
        return len(vals) - 1

    cur = 1
    minus_one = None
    for bit in bin(abs(n))[3:]:
        cur = push(cur, cur)
        if bit == "1":
            if vals[cur] > 0:
                cur = push(cur, 1)
            else:
                if minus_one is None:
                    minus_one = push(1, 0)
                cur = push(cur, minus_one)
    if vals[cur] != n:
        cur = push(cur, 0)
    return AntiAdditionChain(vals, pairs)


def scalar_mul(n, x):
    X = x.curve
    zero = zero_element(X)
    if n == 0:
        return zero
    chain = find_anti_addition_chain(n)
    elems = [zero, x]
    for i, j in chain.pairs:
        elems.append(addflip(elems[i], elems[j])[0])
    return elems[-1]


# ---------------------------------------------------------------------------
# points and normalised representatives


def point_class(X, pt):
    """Class of L(-P - (deg L - 1) inf) = [O(inf - P)]; pt is an affine
    rational point (x, y) or None for the point at infinity."""
    r = X.degL - 1
    if pt is None:
        return PicardElement(X, X.infinity_space(2, X.degL))
    P = dv.point_divisor(X, pt, 2)
    return PicardElement(X, gf.intersect(P.space, X.infinity_space(2, r)))


def multiple_space(O, r):
    """Gamma(L^2(-r O)) for a degree-one divisor O."""
    X = O.curve
    cache = X.__dict__.setdefault("_multiples", {})
    key = (O.key(), r)
    if key not in cache:
        if r == 0:
            cache[key] = X.full_space(2)
        else:
            D = dv.at_level(O, 2)
            acc = D
            for _ in range(r - 1):
                acc = dv.add_divisors(acc, D, 2)
            cache[key] = acc.space
    return cache[key]


def normalised_representative(x, O):
    """(r, Gamma(L^2(-R))) with R = R' + r O canonical for the class of x."""
    X = x.curve
    if O is None:
        raise DomainError("a rational point is required")
    if O.degree != 1:
        raise DomainError("O must be a divisor of degree one")
    if X.h < 4:
        raise dv.TruncationError("normalised representatives need h >= 4")
    D = neg(x).space
    for r in range(X.degL, X.degL - X.g - 1, -1):
        U4 = dv.mult_spaces(X, D, 2, multiple_space(O, r), 2)
        V = dv.divide(X, U4, X.bpf_pair(2), 2)
        if V.dim:
            s = V.basis[0]
            U = dv.multiply_by_section(X, s, 2, X.full_space(2), 2)
            return r, dv.divide(X, U, D, 2, div_level=2)
    raise AssertionError("no normalised representative found")


def normalised(x, O):
    return PicardElement(x.curve, normalised_representative(x, O)[1])


# ---------------------------------------------------------------------------
# base extension and descent


def base_extend(x, XK):
    emb = gf.embedding(x.curve.k, XK.k)
    return PicardElement(XK, Subspace.span(XK.k, emb[x.space.basis], x.space.ambient))


def _conjugate(S, F, q):
    return Subspace.span(F, F.power(S.basis, q), S.ambient)


def descend(xK, O):
    """(True, x) with x on the base curve extending to xK, or (False, None).

    O is a degree-one divisor on the base curve."""
    XK = xK.curve
    X = XK.base
    K, k = XK.k, X.k
    OK = dv.base_extend(O, XK)
    _, R = normalised_representative(xK, OK)
    # the k-rational part of R is the intersection of its Galois conjugates
    W = R
    S = R
    for _ in range(K.n // k.n - 1):
        S = _conjugate(S, K, k.q)
        W = gf.intersect(W, S)
    back = gf.restriction(k, K)[W.basis]
    if W.codim != X.degL or np.any(back < 0):
        return False, None
    return True, PicardElement(X, Subspace(k, back, W.pivots, W.ambient))


# ---------------------------------------------------------------------------
# Picard and Albanese maps


def picard_map(f, y):
    """Class of the pull-back of y along f."""
    E = dv.DivisorRep(f.target, 2, y.space)
    return PicardElement(f.source, mo.pull_back(f, E, j=2).space)


def _base_change_morphism(f, K):
    XK, YK = cv.base_change(f.source, K), cv.base_change(f.target, K)
    emb = gf.embedding(f.source.k, K)
    return mo.FiniteMorphism(XK, YK, {i: emb[M] for i, M in f.maps.items()}, check=False)


def rational_point_of(D, rng):
    """Least rational point in the support of D as a degree-one prime."""
    best = None
    for part in dv.decompose(D, rng):
        if part.degree != 1:
            continue
        pt = mo._point_of(D.curve, dv.at_level(part.prime, 2).space)
        key = (pt is None, pt or (0, 0))
        if best is None or key < best[0]:
            best = (key, part.prime)
    if best is None:
        raise AssertionError("no rational point in the support")
    return best[1]


def albanese_map(f, x, O, rng):
    """Class of N_f(L_X(-D)) on the target; O a rational point divisor there."""
    from . import sampler

    X, Y = f.source, f.target
    if min(X.h, Y.h) < 6:
        raise dv.TruncationError("the Albanese map needs h >= 6")
    k = X.k
    r = Y.degL - 1
    total = zero_element(Y)
    for part in dv.decompose(x.divisor, rng):
        e = part.degree
        K = gf.canonical_extension(k, e)
        fK = _base_change_morphism(f, K)
        XK, YK = fK.source, fK.target
        PK = dv.base_extend(dv.at_level(part.prime, 2), XK)
        Pp = rational_point_of(PK, rng)
        image = mo.image_divisor(fK, Pp)
        OK = dv.base_extend(O, YK)
        if r:
            rO = dv.DivisorRep(YK, 2, multiple_space(OK, r))
            space = dv.sum_space(YK, image, rO, 2)
        else:
            space = image.space
        yP = PicardElement(YK, space)
        yP = sampler.trace(sampler.FrobeniusContext(k, K), yP, O) if e > 1 else PicardElement(Y, space)
        for _ in range(part.multiplicity):
            total = add(total, yP)
    y0 = PicardElement(Y, multiple_space(O, Y.degL))
    return sub(total, scalar_mul(f.degree * r, y0)) if r else total


# ---------------------------------------------------------------------------
# enumeration helpers for small curves


def class_group_size(X):
    Z = cv.zeta_from_point_counts(X)
    return cv.class_number(Z)
