"""Finite commutative algebras over finite fields.

An algebra of dimension d is stored by structure constants ``c[i, j]`` (the
coordinates of ``e_i * e_j``) together with the coordinates of its identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gfcore as gf
from .gfcore import CapExceededError, DomainError, Poly, Subspace


class MalformedAlgebraError(DomainError):
    """Structure constants are not commutative, associative or unital."""


class FiniteAlgebra:
    def __init__(self, F, c, one, check=True):
        c = np.asarray(c, dtype=np.int64)
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise MalformedAlgebraError("structure constants must have shape (d, d, d)")
        self.F = F
        self.d = d
        self.c = c
        self.one = np.asarray(one, dtype=np.int64)
        if check:
            self.validate()

    # multiplication matrix: row j is e_j * a
    def mult_matrix(self, a):
        a = np.asarray(a, dtype=np.int64)
        F, d = self.F, self.d
        # (e_j * a)_k = sum_i a_i c[j, i, k]
        return F.matmul(a[None, :], self.c.transpose(1, 0, 2).reshape(d, d * d)).reshape(d, d)

    def mul(self, a, b):
        return self.F.matmul(np.asarray(a, dtype=np.int64)[None, :], self.mult_matrix(b))[0]

    def power(self, a, e):
        r = self.one.copy()
        base = np.asarray(a, dtype=np.int64)
        while e:
            if e & 1:
                r = self.mul(r, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return r

    def validate(self, rng=None):
        F, d, c = self.F, self.d, self.c
        if not np.array_equal(c, c.transpose(1, 0, 2)):
            raise MalformedAlgebraError("multiplication is not commutative")
        E = np.eye(d, dtype=np.int64)
        if not np.array_equal(self.mult_matrix(self.one), E):
            raise MalformedAlgebraError("identity does not act as identity")
        # associativity: (e_i e_j) e_k = e_i (e_j e_k)
        triples = range(d) if d <= 12 else (rng or np.random.default_rng(0)).integers(0, d, size=12)
        right_op = c.reshape(d, d * d)
        pairs = c.reshape(d * d, d)
        for i in triples:
            left = F.matmul(c[i], right_op).reshape(d, d, d)  # (e_i e_j) e_k
            right = F.matmul(pairs, c[i]).reshape(d, d, d)  # e_i (e_j e_k)
            if not np.array_equal(left, right):
                raise MalformedAlgebraError("multiplication is not associative")

    def is_unit(self, a):
        return gf.rank(self.F, self.mult_matrix(a)) == self.d

    def min_poly(self, a, unit=None):
        """Minimal polynomial of a acting on the subalgebra with identity ``unit``."""
        F = self.F
        unit = self.one if unit is None else np.asarray(unit, dtype=np.int64)
        vecs = [unit]
        M = self.mult_matrix(a)
        while True:
            nxt = F.matmul(vecs[-1][None, :], M)[0]
            A = np.array(vecs)
            x = gf.solve_left(F, A, nxt)
            if x is not None:
                # a^m = sum x_i a^i
                coeffs = [F.neg_s(int(v)) for v in x] + [1]
                return Poly(F, coeffs)
            vecs.append(nxt)

    def eval_poly(self, f, a, unit=None):
        F = self.F
        unit = self.one if unit is None else np.asarray(unit, dtype=np.int64)
        M = self.mult_matrix(a)
        r = np.zeros(self.d, dtype=np.int64)
        for co in reversed(f.coeffs):
            r = F.add(F.matmul(r[None, :], M)[0], F.mul(unit, co))
        return r


def is_unit(A, a):
    return A.is_unit(a)


@dataclass
class LocalFactor:
    """One local factor A_i = e_i A of a decomposition.

    ``basis`` spans e_i A inside A; ``projection`` maps coordinates in A to
    coordinates in ``basis``; ``max_ideal`` holds the maximal ideal in those
    coordinates.
    """

    idempotent: np.ndarray
    basis: np.ndarray
    projection: np.ndarray
    dim: int
    max_ideal: Subspace
    residue_degree: int

    def prime_ideal(self, A):
        """The prime ideal of A lying over this factor (A-coordinates)."""
        F = A.F
        other = Subspace.span(F, A.mult_matrix(F.sub(A.one, self.idempotent)), A.d)
        lifted = F.matmul(self.max_ideal.basis, self.basis) if self.max_ideal.dim else np.zeros((0, A.d), dtype=np.int64)
        return gf.sum_subspaces(other, Subspace.span(F, lifted, A.d))


def nilradical(A):
    """Kernel of a -> a^(q^r) with q^r >= d; this map is k-linear."""
    F, d = A.F, A.d
    e = F.q
    while e < d:
        e *= F.q
    images = np.array([A.power(row, e) for row in np.eye(d, dtype=np.int64)])
    return gf.left_kernel(F, images)


def _split_count(A, ideal, unit, sub):
    """Number of local factors of the subalgebra ``sub`` (identity ``unit``).

    Counts dimension of {a in sub : a^q - a in N} minus dim N.
    """
    F = A.F
    images = []
    for row in sub.basis:
        images.append(F.sub(A.power(row, F.q), row))
    images = np.array(images)
    # a = c . sub.basis ; need (c . images) in N
    coef = gf.preimage(F, images.T, ideal) if ideal.dim < A.d else gf.Subspace.full(F, sub.dim)
    return coef.dim - gf.intersect(ideal, sub).dim


def primary_decomposition(A, rng):
    """Split A into local factors."""
    F, d = A.F, A.d
    A.validate(rng)
    N = nilradical(A)
    pending = [A.one]
    done = []
    trials = 0
    cap = gf.max_trials(4 * d + 4)
    while pending:
        e = pending.pop()
        sub = Subspace.span(F, A.mult_matrix(e), d)
        if _split_count(A, N, e, sub) == 1:
            done.append((e, sub))
            continue
        while True:
            trials += 1
            if trials > cap:
                raise CapExceededError("primary decomposition did not split")
            a = gf.random_vector(sub, rng)
            parts = _split_idempotents(A, a, e, rng)
            if len(parts) > 1:
                pending.extend(parts)
                break
    factors = []
    for e, sub in sorted(done, key=lambda t: t[1].key()):
        Ni = gf.intersect(N, sub)
        proj = A.mult_matrix(e)  # row j: e_j * e
        proj = sub.coords(proj)
        mi = Subspace.span(F, sub.coords(Ni.basis), sub.dim) if Ni.dim else Subspace.zero(F, sub.dim)
        factors.append(
            LocalFactor(
                idempotent=e,
                basis=sub.basis,
                projection=proj,
                dim=sub.dim,
                max_ideal=mi,
                residue_degree=sub.dim - Ni.dim,
            )
        )
    return factors


def _split_idempotents(A, a, unit, rng):
    """Orthogonal idempotents from coprime factors of the minimal polynomial."""
    F = A.F
    m = A.min_poly(a, unit)
    fac = gf.factor_poly(m, rng)
    if len(fac) < 2:
        return [unit]
    parts = []
    for g, k in fac:
        gk = Poly.one(F)
        for _ in range(k):
            gk = gk * g
        rest = m // gk
        _, s, t = gf.poly_xgcd(gk, rest)
        # t * rest is 1 mod gk and 0 mod rest
        parts.append(A.eval_poly(t * rest, a, unit))
    return parts


def algebra_from_structure(F, c, one, check=True):
    return FiniteAlgebra(F, c, one, check)


def algebra_from_matrices(F, mats):
    """FiniteAlgebra whose basis is the given d x d matrices (a subalgebra of End)."""
    mats = [np.asarray(M, dtype=np.int64) for M in mats]
    d = len(mats)
    n = mats[0].shape[0]
    flat = np.array([M.reshape(-1) for M in mats])
    S = Subspace.span(F, flat, n * n)
    if S.dim != d:
        raise MalformedAlgebraError("matrices are linearly dependent")
    basis = [S.basis[i].reshape(n, n) for i in range(d)]
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = F.matmul(basis[i], basis[j]).reshape(-1)
            if not S.contains(prod):
                raise MalformedAlgebraError("span is not closed under multiplication")
            c[i, j] = S.coords(prod)
    eye = np.eye(n, dtype=np.int64).reshape(-1)
    if not S.contains(eye):
        raise MalformedAlgebraError("span does not contain the identity")
    one = S.coords(eye)
    return FiniteAlgebra(F, c, one), basis


# ---------------------------------------------------------------------------
# bilinear maps


@dataclass
class BilinearMap:
    """mu(m_i, n_j) = sum_k T[i, j, k] o_k."""

    F: object
    T: np.ndarray

    @property
    def dims(self):
        return self.T.shape

    def left_matrix(self, g):
        """Matrix of m -> mu(m, g) (rows indexed by basis of M)."""
        F = self.F
        dm, dn, do = self.T.shape
        g = np.asarray(g, dtype=np.int64)
        return F.matmul(g[None, :], self.T.transpose(1, 0, 2).reshape(dn, dm * do)).reshape(dm, do)

    def right_matrix(self, m):
        """Matrix of n -> mu(m, n)."""
        F = self.F
        dm, dn, do = self.T.shape
        m = np.asarray(m, dtype=np.int64)
        return F.matmul(m[None, :], self.T.reshape(dm, dn * do)).reshape(dn, do)

    def extend(self, big):
        return BilinearMap(big, gf.embedding(self.F, big)[self.T])


def extension_degree_for(d, q):
    return max(1, math.ceil(math.log(max(2 * d, q)) / math.log(q) - 1e-12))


def find_generator(mu, rng, side="right", candidates=None):
    """Random g with mu(., g) (or mu(g, .)) an isomorphism.

    Returns (g, matrix).  ``candidates`` restricts coefficients to a subset of
    the field.
    """
    F = mu.F
    dm, dn, do = mu.T.shape
    dim = dn if side == "right" else dm
    if dm != dn or dn != do:
        raise DomainError("M, N, O must have equal dimensions")
    if candidates is not None:
        sigma = np.asarray(candidates, dtype=np.int64)
        expected = 2.0
    else:
        sigma = None
        expected = 1.0 / max(1e-9, (1.0 - 1.0 / F.q) ** dim) if F.q > 1 else 2.0
    cap = gf.max_trials(max(2.0, expected))
    for _ in range(cap):
        if sigma is None:
            g = F.random(rng, size=dim)
        else:
            g = sigma[rng.integers(0, len(sigma), size=dim)]
        G = mu.left_matrix(g) if side == "right" else mu.right_matrix(g)
        if gf.rank(F, G) == dim:
            return g, G
    raise CapExceededError("no generator found")


def _reconstruct(mu, g, G):
    F = mu.F
    d = mu.T.shape[0]
    Ginv = gf.inverse(F, G)
    mats = []
    for j in range(d):
        e = np.zeros(d, dtype=np.int64)
        e[j] = 1
        mats.append(F.matmul(mu.left_matrix(e), Ginv))
    return mats


def algebra_from_bilinear_map(mu, rng):
    """Matrices (acting on row vectors of M) spanning the image of A in End(M)."""
    F = mu.F
    d = mu.T.shape[0]
    if d == 0:
        return []
    deg = extension_degree_for(d, F.q)
    big = gf.canonical_extension(F, deg)
    mu_big = mu.extend(big) if deg > 1 else mu
    g, G = find_generator(mu_big, rng)
    mats = _reconstruct(mu_big, g, G)
    if deg == 1:
        S = Subspace.span(F, np.array([M.reshape(-1) for M in mats]), d * d)
    else:
        Sb = Subspace.span(big, np.array([M.reshape(-1) for M in mats]), d * d)
        back = gf.restriction(F, big)[Sb.basis]
        if np.any(back < 0):
            raise DomainError("bilinear map is not defined by an algebra over the base field")
        S = Subspace(F, back, Sb.pivots, d * d)
    if S.dim != d:
        raise DomainError("bilinear map is not perfect")
    return [S.basis[i].reshape(d, d) for i in range(d)]


def algebra_from_bilinear_map_sigma(mu, sigma, rng):
    """Variant drawing generator coefficients from a set sigma with #sigma >= 2 dim."""
    F = mu.F
    d = mu.T.shape[0]
    sigma = sorted(set(int(s) for s in sigma))
    if len(sigma) < 2 * d:
        raise DomainError("sigma too small")
    g, G = find_generator(mu, rng, candidates=sigma)
    mats = _reconstruct(mu, g, G)
    S = Subspace.span(F, np.array([M.reshape(-1) for M in mats]), d * d)
    return [S.basis[i].reshape(d, d) for i in range(d)]


def quotient_algebra(F, f):
    """k[x]/(f) with basis 1, x, ..., x^(deg f - 1)."""
    f = f.monic() if isinstance(f, Poly) else Poly(F, f).monic()
    d = f.degree
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            r = Poly(F, [0] * (i + j) + [1]) % f
            c[i, j, : len(r.coeffs)] = r.coeffs
    one = np.zeros(d, dtype=np.int64)
    one[0] = 1
    return FiniteAlgebra(F, c, one)
