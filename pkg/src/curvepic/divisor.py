"""Effective divisors represented by spaces of sections.

An effective divisor D is stored at a level i as the subspace
Gamma(X, L^i(-D)) of Gamma(X, L^i), in coordinates with respect to the
monomial basis of the curve.  Its degree is the codimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import finalg
from . import gfcore as gf
from .gfcore import CapExceededError, DomainError, Subspace


class TruncationError(DomainError):
    """The computation needs a graded piece beyond the truncation level."""


class NotSubdivisorError(DomainError):
    """Subtraction of a divisor that is not contained in the other."""


@dataclass(eq=False)
class DivisorRep:
    curve: object
    level: int
    space: Subspace
    section: tuple | None = field(default=None, repr=False)  # (j, s) when D = div s

    @property
    def degree(self):
        return self.space.codim

    def __eq__(self, other):
        if not isinstance(other, DivisorRep) or other.curve is not self.curve:
            return NotImplemented
        if self.level == other.level:
            return self.space == other.space
        m = max(self.level, other.level)
        return at_level(self, m).space == at_level(other, m).space

    def __hash__(self):
        return hash((self.level, self.space.key()))

    def key(self):
        return (self.level, self.space.key())

    def __repr__(self):
        return f"DivisorRep(level={self.level}, degree={self.degree})"


def make_divisor(X, space, level, check=True):
    rep = DivisorRep(X, level, space)
    if check:
        bound = level * X.degL - 2 * X.g
        if rep.degree > bound:
            raise DomainError(f"degree {rep.degree} exceeds level bound {bound}")
    return rep


def _need(X, level):
    if level > X.h:
        raise TruncationError(f"level {level} exceeds truncation {X.h}")


# ---------------------------------------------------------------------------
# multiplication and division of spaces


def mult_coords(X, i, A, j, B):
    """All products of rows of A (level i) and rows of B (level j)."""
    _need(X, i + j)
    k = X.k
    A = np.asarray(A, dtype=np.int64).reshape(-1, X.dim(i))
    B = np.asarray(B, dtype=np.int64).reshape(-1, X.dim(j))
    T = X.product_table(i, j)
    mi, mj, mt = T.shape
    C = k.matmul(A, T.reshape(mi, mj * mt)).reshape(A.shape[0], mj, mt)
    C = C.transpose(1, 0, 2).reshape(mj, A.shape[0] * mt)
    P = k.matmul(B, C).reshape(B.shape[0], A.shape[0], mt)
    return P.transpose(1, 0, 2).reshape(-1, mt)


def mult_spaces(X, A, i, B, j):
    """Span of the products of two subspaces (levels i and j)."""
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(X.k, X.dim(i + j))
    return Subspace.span(X.k, mult_coords(X, i, A.basis, j, B.basis), X.dim(i + j))


def divide(X, target, divisor_space, out_level, div_level=None):
    """{s in Gamma(L^out_level) : s * divisor_space lies in target}."""
    t_level = _level_of(X, target)
    j = div_level if div_level is not None else _level_of(X, divisor_space)
    if out_level + j != t_level:
        raise DomainError("level bookkeeping mismatch in divide")
    k = X.k
    mi = X.dim(out_level)
    r = divisor_space.dim
    if r == 0:
        return X.full_space(out_level)
    if target.codim == 0:
        return X.full_space(out_level)
    T = X.product_table(out_level, j)  # (mi, mj, mt)
    mj, mt = T.shape[1], T.shape[2]
    P = k.matmul(divisor_space.basis, T.transpose(1, 0, 2).reshape(mj, mi * mt))
    P = P.reshape(r, mi, mt).transpose(1, 0, 2).reshape(mi * r, mt)
    Q = target.quotient_coords(P).reshape(mi, -1)
    return gf.left_kernel(k, Q)


def _level_of(X, space):
    for i in range(1, X.h + 1):
        if X.dim(i) == space.ambient:
            return i
    raise DomainError("space does not belong to a graded piece")


# ---------------------------------------------------------------------------
# changing levels


def _very_ample_mult_ok(X, level, deg):
    return level * X.degL - deg >= 2 * X.g + 1


def _mult_bpf_ok(X, i, deg, j):
    """V in Gamma(L^i) with common divisor of degree deg times Gamma(L^j)."""
    return i * X.degL - deg >= 2 * X.g and (j - i) * X.degL + deg >= 2 * X.g - 1


def raise_space(X, W, i, deg, m):
    """Gamma(L^m(-D)) from Gamma(L^i(-D)), for any m with D still representable."""
    if m == i:
        return W
    if m < i:
        return divide(X, W, X.bpf_pair(i - m), m)
    _need(X, m)
    if _very_ample_mult_ok(X, i, deg) or _mult_bpf_ok(X, i, deg, m - i):
        return mult_spaces(X, W, i, X.full_space(m - i), m - i)
    for t in range(m + 1, X.h + 1):
        if _mult_bpf_ok(X, i, deg, t - i):
            U = mult_spaces(X, W, i, X.full_space(t - i), t - i)
            return divide(X, U, X.bpf_pair(t - m), m)
    raise TruncationError("no admissible level for raising a divisor space")


def at_level(D, m):
    """The same divisor represented at level m."""
    X = D.curve
    if m == D.level:
        return D
    if D.section is not None and m > D.section[0]:
        j, s = D.section
        _need(X, m)
        W = Subspace.span(X.k, mult_coords(X, j, s, m - j, np.eye(X.dim(m - j), dtype=np.int64)), X.dim(m))
        return DivisorRep(X, m, W, D.section)
    return DivisorRep(X, m, raise_space(X, D.space, D.level, D.degree, m), D.section)


def minimal_level(X, deg):
    """Least level at which a divisor of degree deg is representable."""
    return max(1, math.ceil((deg + 2 * X.g) / X.degL))


# ---------------------------------------------------------------------------
# constructors


def divisor_of_section(X, s, j, out_level):
    """div(s) for s in Gamma(L^j), represented at out_level >= j+1."""
    s = np.asarray(s, dtype=np.int64).reshape(1, X.dim(j))
    if not np.any(s):
        raise DomainError("the zero section has no divisor")
    if out_level < j + 1:
        raise DomainError("output level must exceed the level of the section")
    _need(X, out_level)
    W = Subspace.span(X.k, mult_coords(X, j, s, out_level - j, np.eye(X.dim(out_level - j), dtype=np.int64)), X.dim(out_level))
    return DivisorRep(X, out_level, W, (j, s))


def zero_divisor(X, level):
    return DivisorRep(X, level, X.full_space(level))


def infinity_divisor(X, r, level):
    """r times the point at infinity (the point with x = infinity, or (1:0) on P^1)."""
    rep = DivisorRep(X, level, X.infinity_space(level, r))
    if rep.degree != r:
        raise DomainError("multiple of infinity not representable at this level")
    return rep


def point_divisor(X, pt, level):
    """Rational affine point (x, y) with coordinates in k (P^1: (t, 0))."""
    k = X.k
    pts = np.array([pt], dtype=np.int64)
    vals = X.monomial_values(level, pts, k)[:, 0]
    # sections vanishing at the point: kernel of the evaluation functional
    return DivisorRep(X, level, gf.kernel(k, vals[None, :]))


def rational_points(X):
    """Affine k-rational points (x, y) of the model."""
    return [tuple(p) for p in X.affine_points(X.k).tolist()]


# ---------------------------------------------------------------------------
# deflation / inflation


def inflation_level(X, i, deg=None):
    j = i + 1
    if i + j <= X.h:
        return j
    for j in range(X.h - i, 0, -1):
        if deg is None or (j - i) * X.degL + deg >= 2 * X.g - 1:
            return j
        break
    raise TruncationError("truncation too small to inflate")


def inflate(X, V, i, deg=None, j=None):
    """Gamma(L^i(-D)) from a subspace V whose common divisor is D."""
    if V.dim == 0:
        raise DomainError("cannot inflate the zero space")
    if j is None:
        j = inflation_level(X, i, deg)
    U = mult_spaces(X, V, i, X.full_space(j), j)
    return divide(X, U, X.bpf_pair(j), i)


def deflate(X, W, i, rng):
    """Small subspace of W with the same common divisor, verified by inflation."""
    if W.dim <= 2:
        return W
    bound = max(2, math.ceil(math.log2(i * X.degL)))
    if bound >= W.dim:
        return W
    cap = gf.max_trials(2)
    deg = W.codim
    for _ in range(cap):
        for t in range(2, bound + 1):
            B = np.array([gf.random_vector(W, rng) for _ in range(t)])
            V = Subspace.span(X.k, B, W.ambient)
            if V.dim < t:
                continue
            if inflate(X, V, i, deg) == W:
                return V
    raise CapExceededError("deflation did not find a basepoint-free subspace")


# ---------------------------------------------------------------------------
# arithmetic of divisors


def sum_space(X, D, E, m):
    """Gamma(L^m(-D-E)) from representations of D and E."""
    degD, degE = D.degree, E.degree
    a = max(1, math.ceil((degD + 2 * X.g + 1) / X.degL))
    b = max(1, math.ceil((degE + 2 * X.g + 1) / X.degL))
    choices = []
    for la in (D.level, a, m - E.level, m - b):
        lb = m - la
        if la >= a and lb >= b:
            choices.append((la, lb))
    if choices:
        la, lb = choices[0]
        return mult_spaces(X, at_level(D, la).space, la, at_level(E, lb).space, lb)
    _need(X, a + b)
    U = mult_spaces(X, at_level(D, a).space, a, at_level(E, b).space, b)
    return divide(X, U, X.bpf_pair(a + b - m), m)


def add_divisors(D, E, out_level=None):
    X = D.curve
    m = out_level if out_level is not None else D.level + E.level
    return DivisorRep(X, m, sum_space(X, D, E, m))


def subtract_divisors(D, E, out_level):
    """D - E at out_level; E must be contained in D."""
    X = D.curve
    j = E.level
    Dm = at_level(D, out_level + j)
    W = divide(X, Dm.space, E.space, out_level)
    res = DivisorRep(X, out_level, W)
    if res.degree != D.degree - E.degree:
        raise NotSubdivisorError("the subtracted divisor is not contained in the other")
    return res


def gcd_divisors(D, E):
    if D.level != E.level:
        raise DomainError("gcd needs equal levels")
    X = D.curve
    S = gf.sum_subspaces(D.space, E.space)
    return DivisorRep(X, D.level, inflate(X, S, D.level, S.codim))


def is_valid_divisor_space(X, W, expected_degree, level=2):
    """True iff W = Gamma(L^level(-D)) for an effective D of the given degree."""
    if W.codim != expected_degree:
        return False
    if expected_degree > level * X.degL - 2 * X.g:
        return False
    if W.dim == 0:
        return False
    j = level
    if 2 * level > X.h:
        j = X.h - level
    U = mult_spaces(X, W, level, X.full_space(j), j)
    if U.codim != expected_degree:
        return False
    return divide(X, U, X.bpf_pair(j), level) == W


def multiply_by_section(X, s, j, W, i):
    """s * W as a subspace of Gamma(L^{i+j})."""
    return Subspace.span(X.k, mult_coords(X, j, np.asarray(s).reshape(1, -1), i, W.basis), X.dim(i + j))


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class PrimeDivisorData:
    prime: DivisorRep
    degree: int
    multiplicity: int


def divisor_algebra(D, rng, space_2i=None):
    """Gamma(D, O_D) as a subalgebra of End(Gamma(D, L^i)).

    Returns (algebra, matrices, complement columns).
    """
    X, i = D.curve, D.level
    _need(X, 2 * i)
    W1 = D.space
    W2 = space_2i if space_2i is not None else at_level(D, 2 * i).space
    if W2.codim != W1.codim:
        raise DomainError("inconsistent divisor spaces")
    C1 = W1.complement_columns()
    d = len(C1)
    T = X.product_table(i, i)[np.ix_(C1, C1)]
    mu = W2.quotient_coords(T.reshape(d * d, -1)).reshape(d, d, d)
    mats = finalg.algebra_from_bilinear_map(finalg.BilinearMap(X.k, mu), rng)
    A, basis = finalg.algebra_from_matrices(X.k, mats)
    return A, basis, C1


def decompose(D, rng, space_2i=None):
    """Prime divisors of D with multiplicities."""
    X, i = D.curve, D.level
    if D.degree > i * X.degL - 2 * X.g + 1:
        raise DomainError("degree too large for decomposition at this level")
    if D.degree == 0:
        return []
    k = X.k
    A, basis, C1 = divisor_algebra(D, rng, space_2i)
    d = len(C1)
    out = []
    for fac in finalg.primary_decomposition(A, rng):
        P = fac.prime_ideal(A)
        rows = []
        for vec in P.basis:
            M = np.zeros((d, d), dtype=np.int64)
            for r, c in enumerate(vec):
                if c:
                    M = k.add(M, k.mul(basis[r], int(c)))
            rows.append(M)
        PM = Subspace.span(k, np.concatenate(rows), d) if rows else Subspace.zero(k, d)
        lifts = np.zeros((PM.dim, D.space.ambient), dtype=np.int64)
        lifts[:, C1] = PM.basis
        W = gf.sum_subspaces(D.space, Subspace.span(k, lifts, D.space.ambient))
        prime = DivisorRep(X, i, W)
        if prime.degree != fac.residue_degree:
            raise AssertionError("prime divisor degree mismatch")
        out.append(PrimeDivisorData(prime, prime.degree, fac.dim // fac.residue_degree))
    out.sort(key=lambda t: (t.degree, t.prime.key()))
    return out


def recombine(X, parts, level):
    """Sum of m_P * P at the given level."""
    total = None
    for part in parts:
        for _ in range(part.multiplicity):
            total = part.prime if total is None else add_divisors(total, part.prime, level)
    if total is None:
        return zero_divisor(X, level)
    return at_level(total, level)


def base_extend(D, XK):
    """D on X viewed on the base change XK (same monomial basis)."""
    emb = gf.embedding(D.curve.k, XK.k)
    W = Subspace.span(XK.k, emb[D.space.basis], D.space.ambient)
    return DivisorRep(XK, D.level, W)
