import itertools

import numpy as np
import pytest

from curvepic import curve as cv
from curvepic import divisor as dv
from curvepic import finalg as fa
from curvepic import gfcore as gf
from curvepic import sampler
from curvepic.acceptance import _p1_section_space, elliptic_curve
from curvepic.gfcore import DomainError, Subspace


F2, F5 = gf.prime_field(2), gf.prime_field(5)


def p1(q=2, d=1, h=6):
    return cv.build_p1(gf.field_of_order(q), d, h)


def mono(X, i, a, b=0):
    v = np.zeros(X.dim(i), dtype=np.int64)
    v[X.monomials[i].index((a, b))] = 1
    return v


def points_space(X, pts, level):
    """Sections of L^level vanishing at each of the given distinct points."""
    W = X.full_space(level)
    for pt in pts:
        W = gf.intersect(W, dv.point_divisor(X, pt, level).space)
    return W


def test_divisor_of_uv():
    X = p1()
    D = dv.divisor_of_section(X, mono(X, 2, 1), 2, 3)  # u v
    assert D.degree == 2
    parts = dv.decompose(D, np.random.default_rng(0))
    assert [(p.degree, p.multiplicity) for p in parts] == [(1, 1), (1, 1)]
    got = {p.prime for p in parts}
    assert got == {dv.point_divisor(X, (0, 0), 3), dv.infinity_divisor(X, 1, 3)}


def test_irreducible_quadratic_is_prime():
    X = p1()
    s = np.array([1, 1, 1])  # u^2 + u v + v^2
    D = dv.divisor_of_section(X, s, 2, 3)
    (part,) = dv.decompose(D, np.random.default_rng(0))
    assert (part.degree, part.multiplicity) == (2, 1)
    assert part.prime == D


def test_quadratic_times_v_at_level_one():
    X = p1(d=3, h=4)
    D = dv.DivisorRep(X, 1, _p1_section_space(X, [1, 1, 1, 0], 1))
    parts = dv.decompose(D, np.random.default_rng(1))
    assert sorted((p.degree, p.multiplicity) for p in parts) == [(1, 1), (2, 1)]
    inf = [p for p in parts if p.degree == 1][0]
    assert inf.prime == dv.infinity_divisor(X, 1, 1)


def test_triple_point_at_infinity():
    X = p1(d=3, h=4)
    D = dv.DivisorRep(X, 1, _p1_section_space(X, [1, 0, 0, 0], 1))  # v^3
    (part,) = dv.decompose(D, np.random.default_rng(2))
    assert (part.degree, part.multiplicity) == (1, 3)
    A, _, _ = dv.divisor_algebra(D, np.random.default_rng(2))
    (fac,) = fa.primary_decomposition(A, np.random.default_rng(2))
    assert (fac.dim, fac.residue_degree) == (3, 1)


def test_section_of_x_on_elliptic():
    X = elliptic_curve("F5", 4)
    D = dv.divisor_of_section(X, mono(X, 1, 1), 1, 2)
    assert D.degree == 3 and D.space.codim == 3


def test_section_errors():
    X = p1()
    with pytest.raises(DomainError):
        dv.divisor_of_section(X, np.zeros(3, dtype=np.int64), 2, 3)
    with pytest.raises(DomainError):
        dv.divisor_of_section(X, mono(X, 2, 1), 2, 2)
    with pytest.raises(dv.TruncationError):
        dv.divisor_of_section(X, mono(X, 2, 1), 2, 7)


def test_full_space_products_and_quotients():
    X = elliptic_curve("F5", 4)
    full1, full2 = X.full_space(1), X.full_space(2)
    assert dv.mult_spaces(X, full1, 1, full1, 1) == full2
    assert dv.divide(X, full2, full1, 1) == full1
    s = np.array([1, 2, 0])
    sW = dv.multiply_by_section(X, s, 1, full2, 2)
    assert dv.divide(X, sW, full2, 1) == Subspace.span(X.k, s[None], 3)


def test_codimensions_add():
    X = elliptic_curve("F5", 4)
    rng = np.random.default_rng(3)
    for _ in range(5):
        D = dv.divisor_of_section(X, F5.random(rng, size=3), 1, 2)
        E = dv.divisor_of_section(X, F5.random(rng, size=3), 1, 2)
        if D.degree != 3 or E.degree != 3:
            continue
        assert dv.mult_spaces(X, D.space, 2, E.space, 2).codim == 6
        assert dv.mult_spaces(X, D.space, 2, X.full_space(2), 2).codim == 3


def test_divide_back_to_level_three():
    X = elliptic_curve("F5", 6)
    rng = np.random.default_rng(4)
    D = sampler.random_divisor_biased(X, 2, rng)
    E = sampler.random_divisor_biased(X, 3, rng)
    S = dv.add_divisors(D, E, 4)
    W3 = dv.divide(X, S.space, X.full_space(1), 3)
    assert W3.codim == 5
    assert W3 == dv.at_level(S, 3).space


def test_deflate_small_space_is_unchanged():
    X = p1()
    W = dv.point_divisor(X, (0, 0), 1).space
    assert W.dim == 1 or dv.deflate(X, W, 1, np.random.default_rng(0)) == W


def test_deflate_full_space_over_f4():
    X = cv.build_p1(gf.field_of_order(4), 3, 4)
    W = X.full_space(1)
    V = dv.deflate(X, W, 1, np.random.default_rng(5))
    assert V.dim == 2
    assert dv.inflate(X, V, 1) == W


def test_deflate_point_on_elliptic():
    X = elliptic_curve("F5", 5)
    W = dv.point_divisor(X, (0, 0), 2).space
    V = dv.deflate(X, W, 2, np.random.default_rng(6))
    assert V.dim <= 3
    assert dv.inflate(X, V, 2, 1) == W


def _common_rational_zeros(X, V, level):
    zeros = [pt for pt in dv.rational_points(X) if dv.point_divisor(X, pt, level).space.contains_space(V)]
    if dv.infinity_divisor(X, 1, level).space.contains_space(V):
        zeros.append(None)
    return zeros


def test_inflate_recovers_common_zeros():
    X = elliptic_curve("F7", 5)
    pts = dv.rational_points(X)[:2]
    W = points_space(X, pts, 2)
    assert W.codim == 2
    rng = np.random.default_rng(7)
    exact = 0
    for _ in range(20):
        V = Subspace.span(X.k, np.array([gf.random_vector(W, rng) for _ in range(2)]), W.ambient)
        if V.dim < 2:
            continue
        got = dv.inflate(X, V, 2)
        assert W.contains_space(got)
        zeros = _common_rational_zeros(X, V, 2)
        for pt in zeros:
            R = dv.infinity_divisor(X, 1, 2) if pt is None else dv.point_divisor(X, pt, 2)
            assert R.space.contains_space(got)
        if got.codim == 2:
            exact += 1
            assert sorted(zeros, key=str) == sorted(pts, key=str)
    assert exact > 0


def test_inflate_principal():
    X = elliptic_curve("F5", 5)
    t = np.array([3, 1, 0, 2, 0, 1])
    V = Subspace.span(X.k, t[None], X.dim(2))
    assert dv.inflate(X, V, 2) == V


def test_add_zero_and_infinity():
    X = p1()
    D = dv.add_divisors(dv.point_divisor(X, (0, 0), 1), dv.infinity_divisor(X, 1, 1))
    assert D.level == 2
    assert D == dv.divisor_of_section(X, mono(X, 2, 1), 2, 3)


@pytest.mark.parametrize("name", ["F5", "F7"])
def test_degree_additivity(name):
    X = elliptic_curve(name, 6)
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b = (int(rng.integers(0, 4)) for _ in range(2))
        D = dv.at_level(sampler.random_divisor_biased(X, a, rng), 2) if a else dv.zero_divisor(X, 2)
        E = dv.at_level(sampler.random_divisor_biased(X, b, rng), 2) if b else dv.zero_divisor(X, 2)
        assert dv.add_divisors(D, E).degree == a + b


def test_subtract_round_trip():
    X = elliptic_curve("F5", 6)
    rng = np.random.default_rng(9)
    for _ in range(10):
        D = sampler.random_divisor_biased(X, 2, rng)
        E = sampler.random_divisor_biased(X, 2, rng)
        S = dv.add_divisors(D, E, 2)
        assert dv.subtract_divisors(S, E, 2) == dv.at_level(D, 2)


def test_subtract_non_subdivisor():
    X = p1(h=6)
    D = dv.point_divisor(X, (0, 0), 2)
    E = dv.point_divisor(X, (1, 0), 2)
    with pytest.raises(dv.NotSubdivisorError):
        dv.subtract_divisors(D, E, 2)


def test_gcd():
    X = elliptic_curve("F7", 5)
    P, Q, R = dv.rational_points(X)[:3]
    D = dv.DivisorRep(X, 2, points_space(X, [P, Q], 2))
    E = dv.DivisorRep(X, 2, points_space(X, [Q, R], 2))
    assert dv.gcd_divisors(D, D) == D
    assert dv.gcd_divisors(D, E) == dv.point_divisor(X, Q, 2)
    with pytest.raises(DomainError):
        dv.gcd_divisors(D, dv.at_level(E, 3))


def test_validity_of_principal_spaces():
    X = elliptic_curve("F5", 4)
    s = np.array([1, 1, 1])
    W = dv.multiply_by_section(X, s, 1, X.full_space(1), 1)
    assert dv.is_valid_divisor_space(X, W, 3)
    assert not dv.is_valid_divisor_space(X, W, 2)


def _codim3_subspaces_f2(n):
    """All subspaces of F_2^n of codimension 3, as kernels of 3 x n RREF matrices."""
    for piv in itertools.combinations(range(n), 3):
        free = [(r, c) for r in range(3) for c in range(piv[r] + 1, n) if c not in piv]
        for bits in itertools.product(range(2), repeat=len(free)):
            M = np.zeros((3, n), dtype=np.int64)
            for r, c in enumerate(piv):
                M[r, c] = 1
            for (r, c), b in zip(free, bits):
                M[r, c] = b
            yield gf.kernel(F2, M)


def test_validity_matches_divisor_count():
    X = elliptic_curve("F2", 4)
    Z = cv.zeta_from_point_counts(X)
    valid = sum(dv.is_valid_divisor_space(X, W, 3) for W in _codim3_subspaces_f2(X.dim(2)))
    assert valid == cv.count_effective(Z, 3) == 21


def test_p1_decompositions_recombine():
    X = cv.build_p1(F2, 4, 4)
    rng = np.random.default_rng(10)
    for n in range(0, 5):
        for coeffs in itertools.product(range(2), repeat=n + 1):
            if not any(coeffs):
                continue
            W = _p1_section_space(X, list(coeffs), 1)
            D = dv.DivisorRep(X, 1, W)
            parts = dv.decompose(D, rng)
            assert sum(p.degree * p.multiplicity for p in parts) == D.degree == n
            assert dv.recombine(X, parts, 1).space == W


def test_elliptic_decompositions_recombine():
    X = elliptic_curve("F5", 8)
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        D = dv.at_level(sampler.random_divisor_biased(X, n, rng), 2)
        parts = dv.decompose(D, rng)
        assert dv.recombine(X, parts, 2) == D
        for p in parts:
            (again,) = dv.decompose(p.prime, rng)
            assert again.multiplicity == 1 and again.prime == p.prime
            A, _, _ = dv.divisor_algebra(p.prime, rng)
            (fac,) = fa.primary_decomposition(A, rng)
            assert fac.max_ideal.dim == 0


def test_constructor_outputs_are_saturated():
    X = elliptic_curve("F7", 6)
    rng = np.random.default_rng(12)
    for n in range(1, 4):
        D = dv.at_level(sampler.random_divisor_biased(X, n, rng), 2)
        assert dv.inflate(X, D.space, 2, n) == D.space
        assert dv.is_valid_divisor_space(X, D.space, n)


def test_decompose_degree_bound():
    X = p1(d=1, h=6)
    D = dv.DivisorRep(X, 1, Subspace.zero(F2, 2))
    with pytest.raises(DomainError):
        dv.decompose(D, np.random.default_rng(0))
