"""Frobenius, traces and uniform random divisors over finite fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import curve as cv
from . import divisor as dv
from . import gfcore as gf
from . import picard as pc
from .gfcore import CapExceededError, DomainError, Subspace


# ---------------------------------------------------------------------------
# Frobenius and traces


@dataclass(frozen=True)
class FrobeniusContext:
    k: object
    K: object

    @property
    def degree(self):
        return self.K.n // self.k.n

    def apply(self, M):
        return self.K.power(np.asarray(M, dtype=np.int64), self.k.q)

    @classmethod
    def for_curve(cls, XK):
        base = getattr(XK, "base", XK)
        return cls(base.k, XK.k)


def _frobenius_space(ctx, S):
    # the Frobenius automorphism keeps reduced row echelon form
    return Subspace(ctx.K, ctx.apply(S.basis), S.pivots, S.ambient)


def frobenius_divisor(ctx, D):
    return dv.DivisorRep(D.curve, D.level, _frobenius_space(ctx, D.space))


def frobenius_point(ctx, x):
    return pc.PicardElement(x.curve, _frobenius_space(ctx, x.space))


def trace(ctx, x, O):
    """Trace to the base curve of x in Pic^0 over the extension; O a
    degree-one divisor on the base curve."""
    total = x
    y = x
    for _ in range(ctx.degree - 1):
        y = frobenius_point(ctx, y)
        total = pc.add(total, y)
    if ctx.degree == 1:
        return x
    ok, res = pc.descend(total, O)
    if not ok:
        raise AssertionError("trace did not descend to the base field")
    return res


# ---------------------------------------------------------------------------
# random prime divisors


def _randbelow(rng, n):
    """Uniform integer in [0, n) for arbitrarily large n."""
    if n <= 0:
        raise DomainError("empty range")
    if n < 2**62:
        return int(rng.integers(0, n))
    bits = n.bit_length()
    while True:
        words = rng.integers(0, 2**32, size=(bits + 31) // 32, dtype=np.uint64)
        v = 0
        for w in words:
            v = (v << 32) | int(w)
        v >>= 32 * len(words) - bits
        if v < n:
            return v


def minimal_prime_level(X, d):
    return max(1, math.ceil((d + 2 * X.g) / X.degL))


def random_prime_divisor(X, d, i, rng):
    """Uniform prime divisor of degree d at level i, by rejection from
    divisors of random sections of L^i."""
    if d < 1 or d > i * X.degL - 2 * X.g:
        raise DomainError("degree out of range for this level")
    dv._need(X, 2 * i + 2)
    slots = (i * X.degL) // d
    cap = 2048 * math.ceil(i * X.degL / d)
    full = X.full_space(i)
    for _ in range(cap):
        s = gf.random_nonzero(full, rng)
        D = dv.divisor_of_section(X, s, i, i + 1)
        irr = [part.prime for part in dv.decompose(D, rng) if part.degree == d]
        u = int(rng.integers(0, slots))
        if u < len(irr):
            return dv.at_level(irr[u], i)
    raise CapExceededError(f"no prime divisor of degree {d} found; there may be none")


# ---------------------------------------------------------------------------
# counting smooth divisors


def _multichoose(N, l):
    if l == 0:
        return 1
    if N <= 0:
        return 0
    return math.comb(N - 1 + l, l)


@dataclass
class SmoothCountTable:
    zeta: object
    _primes: dict = field(default_factory=dict)
    _le: dict = field(default_factory=dict)

    def primes(self, d):
        if d not in self._primes:
            self._primes[d] = cv.count_prime_divisors(self.zeta, d)
        return self._primes[d]

    def eff_eq(self, l, m):
        """Divisors of degree l*m made of primes of degree m."""
        return _multichoose(self.primes(m), l)

    def eff_le(self, n, m):
        """m-smooth effective divisors of degree n."""
        if n < 0:
            return 0
        key = (n, m)
        if key not in self._le:
            if m == 1:
                val = self.eff_eq(n, 1)
            else:
                val = sum(self.eff_eq(l, m) * self.eff_le(n - l * m, m - 1) for l in range(n // m + 1))
            self._le[key] = val
        return self._le[key]

    def marginal(self, n, m):
        """Weights of l_m = 0..n//m (numerators of the marginal distribution)."""
        return [self.eff_eq(l, m) * self.eff_le(n - l * m, m - 1) for l in range(n // m + 1)]

    def dump(self, n_max, m_max):
        return {
            "primes": [self.primes(d) for d in range(1, m_max + 1)],
            "eff_le": [[self.eff_le(n, m) for m in range(1, m_max + 1)] for n in range(n_max + 1)],
        }


def random_decomposition_type(table, n, m, rng):
    if n < 0:
        raise DomainError("n must be non-negative")
    if m < 1:
        raise DomainError("m must be positive")
    out = [0] * m
    while m > 1:
        weights = table.marginal(n, m)
        total = sum(weights)
        if total == 0:
            raise DomainError("no m-smooth divisor of this degree exists")
        x = _randbelow(rng, total)
        l = 0
        while x >= weights[l]:
            x -= weights[l]
            l += 1
        out[m - 1] = l
        n -= l * m
        m -= 1
    if n and table.primes(1) == 0:
        raise DomainError("no m-smooth divisor of this degree exists")
    out[0] = n
    return tuple(out)


def random_multiset(N, l, sample, equal, rng):
    """Uniform multiset of size l from a set of size N, as (element, multiplicity) pairs."""
    if N < 1:
        raise DomainError("the set must be non-empty")
    if l == 0:
        return []
    x = np.sort(rng.choice(l + N - 1, size=l, replace=False)) + 1
    y = [int(x[i]) - (i + 1) for i in range(l)]
    counts = {}
    for v in y:
        counts[v] = counts.get(v, 0) + 1
    a = [0] * (l + 1)
    for c in counts.values():
        a[c] += 1
    need = sum(a)
    distinct = []
    cap = gf.max_trials(need * max(1.0, math.log(need + 1)) * N / max(1, N - need + 1))
    for _ in range(cap):
        if len(distinct) == need:
            break
        s = sample()
        if not any(equal(s, t) for t in distinct):
            distinct.append(s)
    if len(distinct) < need:
        raise CapExceededError("could not draw enough distinct elements")
    out, pos = [], 0
    for mult in range(1, l + 1):
        for _ in range(a[mult]):
            out.append((distinct[pos], mult))
            pos += 1
    return out


def random_divisor(X, table, n, m, i, rng):
    """Uniform m-smooth effective divisor of degree n at level i."""
    if n < 0 or n > i * X.degL - 2 * X.g:
        raise DomainError("degree out of range for this level")
    if n == 0:
        return dv.zero_divisor(X, i)
    ltype = random_decomposition_type(table, n, m, rng)
    total = None
    for d, l in enumerate(ltype, start=1):
        if l == 0:
            continue
        j = minimal_prime_level(X, d)

        def draw(d=d, j=j):
            return random_prime_divisor(X, d, j, rng)

        for P, mult in random_multiset(table.primes(d), l, draw, lambda a, b: a == b, rng):
            for _ in range(mult):
                Pi = dv.at_level(P, i)
                total = Pi if total is None else dv.add_divisors(total, Pi, i)
    if total.degree != n:
        raise AssertionError("random divisor has the wrong degree")
    return total


def random_picard_element(X, table, rng):
    """Uniform element of Pic^0 X."""
    dv._need(X, 6)
    D = random_divisor(X, table, X.degL, X.degL, 2, rng)
    return pc.PicardElement(X, D.space)


def _sub_multisets(parts, n):
    """All choices of multiplicities (c_P <= m_P) with sum c_P deg P = n."""
    out = []

    def rec(t, left, acc):
        if left == 0:
            out.append(list(acc) + [0] * (len(parts) - t))
            return
        if t == len(parts):
            return
        part = parts[t]
        for c in range(min(part.multiplicity, left // part.degree) + 1):
            acc.append(c)
            rec(t + 1, left - c * part.degree, acc)
            acc.pop()

    rec(0, n, [])
    return out


def random_divisor_biased(X, n, rng):
    """Fast non-uniform sampler: a random sub-divisor of degree n of a
    random hypersurface section.  Not uniform."""
    i = max(1, math.ceil((n + 2 * X.g + 1) / X.degL))
    dv._need(X, 2 * i + 2)
    full = X.full_space(i)
    for _ in range(gf.max_trials(4)):
        s = gf.random_nonzero(full, rng)
        parts = dv.decompose(dv.divisor_of_section(X, s, i, i + 1), rng)
        choices = _sub_multisets(parts, n)
        if not choices:
            continue
        pick = choices[int(rng.integers(0, len(choices)))]
        total = dv.zero_divisor(X, i)
        for part, c in zip(parts, pick):
            for _ in range(c):
                total = dv.add_divisors(total, dv.at_level(part.prime, i), i)
        return total
    raise CapExceededError("no section with a sub-divisor of the requested degree")
