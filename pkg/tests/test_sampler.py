import itertools
import math
from collections import Counter

import galois
import numpy as np
import pytest

from curvepic import curve as cv
from curvepic import divisor as dv
from curvepic import gfcore as gf
from curvepic import picard as pc
from curvepic import sampler
from curvepic.acceptance import ELLIPTIC, elliptic_curve, genus2_curve
from curvepic.gfcore import DomainError


F2 = gf.prime_field(2)


def four_sigma(counts, probs, N):
    return all(abs(c - N * p) <= 4 * math.sqrt(N * p * (1 - p)) for c, p in zip(counts, probs))


def p1_f2(h=6):
    return cv.build_p1(F2, 1, h)


def table_of(X):
    return sampler.SmoothCountTable(cv.zeta_from_point_counts(X))


# -- Frobenius ---------------------------------------------------------------


def f4_setup():
    X = elliptic_curve("F2", 6)
    K = gf.canonical_extension(F2, 2)
    XK = cv.base_change(X, K)
    return X, K, XK, sampler.FrobeniusContext.for_curve(XK)


def test_frobenius_fixes_base_divisors():
    X, K, XK, ctx = f4_setup()
    for pt in dv.rational_points(X):
        D = dv.base_extend(dv.point_divisor(X, pt, 2), XK)
        assert sampler.frobenius_divisor(ctx, D) == D


def test_frobenius_conjugates_points():
    X, K, XK, ctx = f4_setup()
    base = set(dv.rational_points(X))
    moved = 0
    for x, y in dv.rational_points(XK):
        D = dv.point_divisor(XK, (x, y), 2)
        conj = (K.pow_s(x, 2), K.pow_s(y, 2))
        assert sampler.frobenius_divisor(ctx, D) == dv.point_divisor(XK, conj, 2)
        moved += (x, y) not in base
    assert moved == 6


def test_frobenius_squared_is_identity():
    X, K, XK, ctx = f4_setup()
    pts = [dv.point_divisor(XK, pt, 2) for pt in dv.rational_points(XK)] + [dv.infinity_divisor(XK, 1, 2)]
    assert len(pts) == 9
    divisors = pts + [dv.add_divisors(a, b, 2) for a, b in itertools.combinations_with_replacement(pts, 2)]
    for D in divisors:
        twice = sampler.frobenius_divisor(ctx, sampler.frobenius_divisor(ctx, D))
        assert twice.space == D.space


def test_frobenius_commutes_with_addition():
    X, K, XK, ctx = f4_setup()
    pts = dv.rational_points(XK)
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = (pts[int(i)] for i in rng.integers(0, len(pts), size=2))
        x, y = pc.point_class(XK, a), pc.point_class(XK, b)
        lhs = sampler.frobenius_point(ctx, pc.add(x, y))
        rhs = pc.add(sampler.frobenius_point(ctx, x), sampler.frobenius_point(ctx, y))
        assert pc.equal(lhs, rhs)


def _gf4_chord_tangent(G, a, P, Q):
    """Group law on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a galois field."""
    a1, a2, a3, a4, _ = (G(v) for v in a)
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = G(P[0]), G(P[1])
    x2, y2 = G(Q[0]), G(Q[1])
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 != x2:
        lam = (y2 - y1) / (x2 - x1)
    else:
        lam = (G(3) * x1 * x1 + G(2) * a2 * x1 + a4 - a1 * y1) / (G(2) * y1 + a1 * x1 + a3)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (int(x3), int(y3))


def test_trace_matches_point_oracle():
    X, K, XK, ctx = f4_setup()
    irr = galois.Poly(list(reversed(K.modulus)), field=galois.GF(2))
    G = galois.GF(4, irreducible_poly=irr)
    a = ELLIPTIC["F2"][1]
    O = dv.infinity_divisor(X, 1, 2)
    for x, y in dv.rational_points(XK):
        conj = (K.pow_s(x, 2), K.pow_s(y, 2))
        S = _gf4_chord_tangent(G, a, (x, y), conj)
        assert S is None or all(c < 2 for c in S)
        got = sampler.trace(ctx, pc.point_class(XK, (x, y)), O)
        assert pc.equal(got, pc.point_class(X, S))


def test_trace_of_base_element_is_multiplication():
    X, K, XK, ctx = f4_setup()
    O = dv.infinity_divisor(X, 1, 2)
    x = pc.point_class(X, dv.rational_points(X)[0])
    xK = pc.base_extend(x, XK)
    assert pc.equal(sampler.frobenius_point(ctx, xK), xK)
    assert pc.equal(sampler.trace(ctx, xK, O), pc.scalar_mul(2, x))


def test_trace_is_additive():
    X, K, XK, ctx = f4_setup()
    O = dv.infinity_divisor(X, 1, 2)
    pts = dv.rational_points(XK)
    rng = np.random.default_rng(1)
    for _ in range(4):
        a, b = (pts[int(i)] for i in rng.integers(0, len(pts), size=2))
        x, y = pc.point_class(XK, a), pc.point_class(XK, b)
        lhs = sampler.trace(ctx, pc.add(x, y), O)
        rhs = pc.add(sampler.trace(ctx, x, O), sampler.trace(ctx, y, O))
        assert pc.equal(lhs, rhs)


# -- counting ----------------------------------------------------------------


@pytest.mark.parametrize("X", [p1_f2(), elliptic_curve("F2"), elliptic_curve("F5"), genus2_curve()], ids=repr)
def test_smooth_counts_match_zeta(X):
    Z = cv.zeta_from_point_counts(X)
    table = sampler.SmoothCountTable(Z)
    for n in range(7):
        assert table.eff_le(n, max(n, 1)) == cv.count_effective(Z, n)


@pytest.mark.parametrize("N,l", [(N, l) for N in range(1, 5) for l in range(4)])
def test_multiset_count_matches_enumeration(N, l):
    assert sampler._multichoose(N, l) == len(list(itertools.combinations_with_replacement(range(N), l)))


def test_table_dump():
    table = table_of(p1_f2())
    d = table.dump(3, 2)
    assert d["primes"] == [3, 1]
    assert d["eff_le"][2] == [6, 7]


# -- random prime divisors --------------------------------------------------


def test_random_rational_points_on_p1_are_uniform():
    X = p1_f2()
    rng = np.random.default_rng(2)
    N = 3000
    c = Counter(sampler.random_prime_divisor(X, 1, 1, rng).key() for _ in range(N))
    assert len(c) == 3
    assert four_sigma(list(c.values()), [1 / 3] * 3, N)


def test_unique_quadratic_prime():
    X = p1_f2()
    rng = np.random.default_rng(3)
    target = dv.divisor_of_section(X, [1, 1, 1], 2, 3)
    for _ in range(20):
        assert sampler.random_prime_divisor(X, 2, 2, rng) == target


def test_random_rational_points_on_elliptic_f2():
    X = elliptic_curve("F2", 6)
    rng = np.random.default_rng(4)
    N = 900
    c = Counter(sampler.random_prime_divisor(X, 1, 1, rng).key() for _ in range(N))
    assert len(c) == 3
    assert four_sigma(list(c.values()), [1 / 3] * 3, N)


def test_prime_degree_out_of_range():
    X = elliptic_curve("F2", 6)
    with pytest.raises(DomainError):
        sampler.random_prime_divisor(X, 2, 1, np.random.default_rng(0))


# -- decomposition types and multisets --------------------------------------


def test_decomposition_type_edge_cases():
    table = table_of(p1_f2())
    rng = np.random.default_rng(5)
    assert sampler.random_decomposition_type(table, 5, 1, rng) == (5,)
    assert sampler.random_decomposition_type(table, 0, 3, rng) == (0, 0, 0)
    with pytest.raises(DomainError):
        sampler.random_decomposition_type(table, -1, 2, rng)
    for _ in range(50):
        t = sampler.random_decomposition_type(table, 6, 4, rng)
        assert sum(d * l for d, l in enumerate(t, start=1)) == 6


def test_decomposition_type_marginal():
    table = table_of(p1_f2())
    rng = np.random.default_rng(6)
    N = 7000
    hits = sum(sampler.random_decomposition_type(table, 2, 2, rng)[1] for _ in range(N))
    assert four_sigma([N - hits, hits], [6 / 7, 1 / 7], N)


def test_random_multiset_edge_cases():
    rng = np.random.default_rng(7)
    assert sampler.random_multiset(3, 0, lambda: 0, int.__eq__, rng) == []
    assert sampler.random_multiset(1, 4, lambda: "a", str.__eq__, rng) == [("a", 4)]


def test_random_multiset_is_uniform():
    rng = np.random.default_rng(8)
    N = 6000
    c = Counter()
    for _ in range(N):
        ms = sampler.random_multiset(3, 2, lambda: int(rng.integers(0, 3)), int.__eq__, rng)
        c[tuple(sorted(v for v, m in ms for _ in range(m)))] += 1
    assert len(c) == 6
    assert four_sigma(list(c.values()), [1 / 6] * 6, N)


# -- random divisors and Picard elements ------------------------------------


def test_random_divisor_is_uniform_on_p1():
    X = p1_f2()
    table = table_of(X)
    rng = np.random.default_rng(9)
    N = 3500
    c = Counter(sampler.random_divisor(X, table, 2, 2, 2, rng).key() for _ in range(N))
    assert len(c) == 7
    chi2 = sum((v - N / 7) ** 2 / (N / 7) for v in c.values())
    assert chi2 < 16.81  # 6 degrees of freedom, 99th percentile


def test_random_divisor_degrees():
    X = genus2_curve(6)
    table = table_of(X)
    rng = np.random.default_rng(10)
    assert sampler.random_divisor(X, table, 0, 1, 2, rng).degree == 0
    for n in range(1, 7):
        D = sampler.random_divisor(X, table, n, n, 2, rng)
        assert D.degree == n
        assert dv.is_valid_divisor_space(X, D.space, n)


@pytest.mark.parametrize("name,N", [("F2", 300), ("F5", 300)])
def test_random_picard_elements_are_uniform(name, N):
    X = elliptic_curve(name, 6)
    Z = cv.zeta_from_point_counts(X)
    h = cv.class_number(Z)
    table = sampler.SmoothCountTable(Z)
    O = dv.infinity_divisor(X, 1, 2)
    rng = np.random.default_rng(11)
    c = Counter()
    for _ in range(N):
        x = sampler.random_picard_element(X, table, rng)
        assert dv.is_valid_divisor_space(X, x.space, X.degL)
        c[pc.normalised(x, O).key()] += 1
    assert len(c) == h
    assert four_sigma(list(c.values()), [1 / h] * h, N)


def test_biased_sampler_degrees():
    X = elliptic_curve("F7", 8)
    rng = np.random.default_rng(12)
    for n in range(0, 5):
        assert sampler.random_divisor_biased(X, n, rng).degree == n
