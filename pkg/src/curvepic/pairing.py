"""Norm trivialisations over an effective divisor and the Frey-Rueck pairing.

For an effective divisor E of degree deg L and a line bundle L^a(-F), the
space Gamma(E, L^a(-F)) is the quotient Gamma(L^a(-F)) / Gamma(L^a(-F-E)).
A NormFrame fixes a basis of such a quotient; determinants of maps between
frames give the trivialisations of the norm N_{E/k}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import divisor as dv
from . import gfcore as gf
from . import picard as pc
from .gfcore import CapExceededError, DomainError, Subspace


class NotTorsionError(DomainError):
    """n x is not zero."""


class UnsupportedOrderError(DomainError):
    """n does not divide #k^* (no n-th roots of unity in k)."""


class NormFrame:
    """A basis of Gamma(L^a(-F)) / Gamma(L^a(-F-E)).

    ``A`` and ``B`` are the two spaces at level a.  The basis representatives
    are the reduced row echelon basis of A modulo B unless ``reps`` is given.
    """

    def __init__(self, F, level, A, B, reps=None):
        self.F = F
        self.level = level
        self.A = A
        self.B = B
        if reps is None:
            R = Subspace.span(F, B.reduce(A.basis), A.ambient)
            reps = R.basis
        self.reps = np.asarray(reps, dtype=np.int64)
        S = np.concatenate([self.reps, B.basis]) if B.dim else self.reps
        _, piv = gf.rref(F, S)
        if len(piv) != S.shape[0]:
            raise AssertionError("frame representatives are dependent modulo B")
        self._cols = list(piv)
        self._inv = gf.inverse(F, S[:, self._cols])

    @property
    def dim(self):
        return self.reps.shape[0]

    def coords(self, V):
        """Quotient coordinates of the rows of V (which must lie in A)."""
        V = np.asarray(V, dtype=np.int64).reshape(-1, self.A.ambient)
        return self.F.matmul(V[:, self._cols], self._inv)[:, : self.dim]


def _mult_matrix(X, src, s, b, dst):
    """Matrix of multiplication by s (level b) from src to dst."""
    P = dv.mult_coords(X, src.level, src.reps, b, np.asarray(s, dtype=np.int64).reshape(1, -1))
    return dst.coords(P)


def _is_invertible(F, M):
    return M.shape[0] == M.shape[1] and gf.rank(F, M) == M.shape[0]


def norm_linearity_lambda(X, frames, levels, rng):
    """lambda = det(alpha_3) / (det(alpha_1) det(alpha_2)).

    frames = (F0, F1, F2, F3, G1, G2, G3) are frames for Gamma(E, L^2),
    Gamma(E, L^(i+2)(-D1)), Gamma(E, L^(j+2)(-D2)), Gamma(E, L^(i+j+2)(-D1-D2))
    and the auxiliary Gamma(E, L^(i+4)(-D1)), Gamma(E, L^(j+4)(-D2)),
    Gamma(E, L^(i+j+4)(-D1-D2)); levels = (i, j).
    """
    F0, F1, F2, F3, G1, G2, G3 = frames
    i, j = levels
    k = X.k
    cap = gf.max_trials(4 * F0.dim + 4)

    def pick(space, checks):
        for _ in range(cap):
            b = gf.random_vector(space, rng)
            mats = [_mult_matrix(X, src, b, lvl, dst) for src, lvl, dst in checks]
            if all(_is_invertible(k, M) for M in mats):
                return mats
        raise CapExceededError("no generator of the rank one module found")

    Mb0_1, Mb0_2, Mb0_3 = pick(F0.A, [(F1, 2, G1), (F2, 2, G2), (F3, 2, G3)])
    (Mb1,) = pick(F1.A, [(F0, i + 2, G1)])
    Mb2_2, Mb2_3 = pick(F2.A, [(F0, j + 2, G2), (F1, j + 2, G3)])
    a1 = k.matmul(Mb1, gf.inverse(k, Mb0_1))
    a2 = k.matmul(Mb2_2, gf.inverse(k, Mb0_2))
    a3 = k.matmul(k.matmul(a1, Mb2_3), gf.inverse(k, Mb0_3))
    d1, d2, d3 = gf.det(k, a1), gf.det(k, a2), gf.det(k, a3)
    return k.div_s(d3, k.mul_s(d1, d2))


# ---------------------------------------------------------------------------
# transcripts


@dataclass
class PairingTranscript:
    chain: object
    spaces: list  # Gamma(L^2(-D_l)) for l = 0..m
    u: np.ndarray
    sections: dict = field(default_factory=dict)  # l -> s_l in Gamma(L^3)
    v: np.ndarray | None = None

    def check(self, X):
        """div(u) = D_0, div(s_l) = D_l + D_i + D_j, div(v) = D_m."""
        if dv.divisor_of_section(X, self.u, 1, 2).space != self.spaces[0]:
            return False
        for l, (i, j) in enumerate(self.chain.pairs, start=2):
            lhs = dv.divisor_of_section(X, self.sections[l], 3, 5).space
            D = [dv.DivisorRep(X, 2, self.spaces[t]) for t in (l, i, j)]
            rhs = dv.add_divisors(dv.add_divisors(D[0], D[1], 4), D[2], 5).space
            if lhs != rhs:
                return False
        return self.v is not None and dv.divisor_of_section(X, self.v, 1, 2).space == self.spaces[-1]


def build_transcript(x, n, rng, chain=None):
    X = x.curve
    if chain is None:
        chain = pc.find_anti_addition_chain(n)
    elif chain.values[-1] != n or not chain.check():
        raise DomainError("chain does not compute n")
    zero, u = pc.zero_element_with_section(X, rng)
    spaces = [zero.space, x.space]
    elems = [zero, x]
    sections = {}
    for l, (i, j) in enumerate(chain.pairs, start=2):
        z, s = pc.addflip(elems[i], elems[j])
        elems.append(z)
        spaces.append(z.space)
        sections[l] = s
    ok, v = pc.zero_test(elems[-1])
    if not ok:
        raise NotTorsionError(f"{n} x is not zero")
    return PairingTranscript(chain, spaces, u, sections, v)


# ---------------------------------------------------------------------------
# the isomorphisms I^E_{s,t}


class _Frames:
    """Lazily built frames for one divisor E (given as Gamma(L^2(-E)))."""

    def __init__(self, X, T, WE):
        self.X, self.T, self.WE = X, T, WE
        self.k = X.k
        self._cache = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _mul(self, A, a, B, b):
        return dv.mult_spaces(self.X, A, a, B, b)

    def _full(self, a):
        return self.X.full_space(a)

    def f0(self):
        return self._get("L2", lambda: NormFrame(self.k, 2, self._full(2), self.WE))

    def _D(self, l):
        return self.T.spaces[l]

    def _B4(self, l):
        # Gamma(L^4(-D_l-E))
        return self._get(("B4", l), lambda: self._mul(self._D(l), 2, self.WE, 2))

    def l3(self, l):
        """Gamma(E, L^3(-D_l)); for l = 0 the basis is u times the basis of Gamma(E, L^2)."""

        def build():
            X = self.X
            if l == 0:
                u = self.T.u
                F0 = self.f0()
                A = dv.multiply_by_section(X, u, 1, self._full(2), 2)
                B = dv.multiply_by_section(X, u, 1, self.WE, 2)
                reps = dv.mult_coords(X, 2, F0.reps, 1, u.reshape(1, -1))
                return NormFrame(self.k, 3, A, B, reps)
            A = dv.raise_space(X, self._D(l), 2, X.degL, 3)
            B = dv.divide(X, self._B4(l), X.bpf_pair(1), 3)
            return NormFrame(self.k, 3, A, B)

        return self._get(("L3", l), build)

    def l5(self, l):
        """Gamma(E, L^5(-D_l))."""

        def build():
            A = self._mul(self._D(l), 2, self._full(3), 3)
            B = self._mul(self._B4(l), 4, self._full(1), 1)
            return NormFrame(self.k, 5, A, B)

        return self._get(("L5", l), build)

    def _A4ij(self, l):
        i, j = self.T.chain.pairs[l - 2]
        return self._get(("A4", l), lambda: self._mul(self._D(i), 2, self._D(j), 2))

    def l4ij(self, l):
        """Gamma(E, L^4(-D_i(l) - D_j(l)))."""

        def build():
            X = self.X
            A = self._A4ij(l)
            B = dv.divide(X, self._mul(A, 4, self.WE, 2), X.bpf_pair(2), 4)
            return NormFrame(self.k, 4, A, B)

        return self._get(("L4", l), build)

    def l6ij(self, l):
        def build():
            A = self._A4ij(l)
            return NormFrame(self.k, 6, self._mul(A, 4, self._full(2), 2), self._mul(A, 4, self.WE, 2))

        return self._get(("L6", l), build)

    def l5lij(self, l):
        """Gamma(E, L^5(-D_l - D_i - D_j)) = s_l Gamma(E, L^2)."""

        def build():
            X, s = self.X, self.T.sections[l]
            A = dv.multiply_by_section(X, s, 3, self._full(2), 2)
            B = dv.multiply_by_section(X, s, 3, self.WE, 2)
            return NormFrame(self.k, 5, A, B)

        return self._get(("L5lij", l), build)

    def l7lij(self, l):
        def build():
            X, s = self.X, self.T.sections[l]
            W4 = self._mul(self.WE, 2, self._full(2), 2)
            A = dv.multiply_by_section(X, s, 3, self._full(4), 4)
            B = dv.multiply_by_section(X, s, 3, W4, 4)
            return NormFrame(self.k, 7, A, B)

        return self._get(("L7", l), build)


def compute_I_Est(X, T, WE, rng):
    """I^E_{s,t} for E given by Gamma(L^2(-E)) (deg E = deg L), up to n-th powers."""
    if X.h < 7:
        raise dv.TruncationError("the pairing needs h >= 7")
    if WE.codim != X.degL:
        raise DomainError("E must have degree deg L")
    if T.v is None:
        raise DomainError("inconsistent transcript: no section v with div v = D_m")
    k = X.k
    Fr = _Frames(X, T, WE)
    F0 = Fr.f0()
    gamma = {0: 1, 1: 1}
    for l, (i, j) in enumerate(T.chain.pairs, start=2):
        lam1 = norm_linearity_lambda(
            X, (F0, Fr.l3(i), Fr.l3(j), Fr.l4ij(l), Fr.l5(i), Fr.l5(j), Fr.l6ij(l)), (1, 1), rng
        )
        lam2 = norm_linearity_lambda(
            X, (F0, Fr.l3(l), Fr.l4ij(l), Fr.l5lij(l), Fr.l5(l), Fr.l6ij(l), Fr.l7lij(l)), (1, 2), rng
        )
        sigma = gf.det(k, _mult_matrix(X, F0, T.sections[l], 3, Fr.l5lij(l)))
        lam = k.mul_s(lam1, lam2)
        gamma[l] = k.div_s(lam, k.mul_s(sigma, k.mul_s(gamma[i], gamma[j])))
    m = T.chain.length
    delta = gf.det(k, _mult_matrix(X, F0, T.v, 1, Fr.l3(m)))
    return k.inv_s(k.mul_s(gamma[m], delta))


# ---------------------------------------------------------------------------
# Frey-Rueck pairing


def root_of_unity(k, n):
    """The fixed primitive n-th root of unity gen^((q-1)/n)."""
    if (k.q - 1) % n:
        raise UnsupportedOrderError(f"{n} does not divide #k^* = {k.q - 1}")
    return k.pow_s(k.gen, (k.q - 1) // n)


class FreyRuck:
    """[x, .]_n for a fixed n-torsion x; the transcript and I(E^+) are reused."""

    def __init__(self, x, n, rng, chain=None):
        X = x.curve
        self.curve, self.n = X, n
        self.zeta = root_of_unity(X.k, n)
        if X.h < 7:
            raise dv.TruncationError("the pairing needs h >= 7")
        self.transcript = build_transcript(x, n, rng, chain)
        w = gf.random_nonzero(X.full_space(1), rng)
        Eplus = dv.divisor_of_section(X, w, 1, 2).space
        self._Iplus = compute_I_Est(X, self.transcript, Eplus, rng)

    def __call__(self, y, rng):
        """(value, discrete log) of [x, y]_n."""
        k = self.curve.k
        Im = compute_I_Est(self.curve, self.transcript, y.space, rng)
        val = k.pow_s(k.div_s(self._Iplus, Im), (k.q - 1) // self.n)
        return val, gf.discrete_log_mu_l(k, self.zeta, val, self.n)


def frey_ruck(x, y, n, rng):
    """[x, y]_n as (value, discrete log base the fixed n-th root of unity)."""
    root_of_unity(x.curve.k, n)
    return FreyRuck(x, n, rng)(y, rng)
