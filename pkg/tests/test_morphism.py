import numpy as np
import pytest

from curvepic import curve as cv
from curvepic import divisor as dv
from curvepic import gfcore as gf
from curvepic import morphism as mo
from curvepic.gfcore import DomainError


F2, F3, F5, F7 = (gf.prime_field(p) for p in (2, 3, 5, 7))
E_F5 = (0, 0, 0, 1, 0)  # y^2 = x^3 + x
E_F7 = (0, 0, 0, 2, 1)  # y^2 = x^3 + 2x + 1


def squaring(k=F3, h=6):
    return mo.power_map(k, 1, 2, h)


def xmap(k, a, h=6):
    return mo.x_map(k, a, h)


def ypt(Y, a, level):
    return dv.point_divisor(Y, (a, 0), level)


def mono(X, i, a, b=0):
    v = np.zeros(X.dim(i), dtype=np.int64)
    v[X.monomials[i].index((a, b))] = 1
    return v


def test_degree_and_validation():
    f = squaring()
    assert f.degree == 2
    g = xmap(F5, E_F5)
    assert g.degree == 2
    bad = dict(f.maps)
    bad[2] = np.zeros_like(bad[2])
    with pytest.raises(DomainError):
        mo.FiniteMorphism(f.source, f.target, bad)


def test_serialisation_round_trip():
    f = xmap(F5, E_F5, 4)
    g = mo.FiniteMorphism.from_dict(f.to_dict())
    assert g.source.same_curve(f.source) and g.target.same_curve(f.target)
    for i in f.maps:
        np.testing.assert_array_equal(g.maps[i], f.maps[i])


def test_composition_of_power_maps():
    f = mo.power_map(F3, 2, 2, 4)  # O(4) -> O(2)
    g = mo.power_map(F3, 1, 2, 4)  # O(2) -> O(1)
    g = mo.FiniteMorphism(f.target, g.target, g.maps)
    h = mo.compose(f, g)
    assert h.degree == 4
    ref = mo.power_map(F3, 1, 4, 4)
    for i in h.maps:
        np.testing.assert_array_equal(h.maps[i], ref.maps[i])


@pytest.mark.parametrize("a", [0, 1, 2])
def test_image_under_squaring(a):
    f = squaring()
    D = dv.point_divisor(f.source, (a, 0), 2)
    assert mo.image_divisor(f, D) == ypt(f.target, a * a % 3, 2)


def test_image_under_x_map():
    f = xmap(F5, E_F5)
    for a, b in dv.rational_points(f.source):
        D = dv.point_divisor(f.source, (a, b), 1)
        assert mo.image_divisor(f, D) == ypt(f.target, a, 1)
    full = dv.zero_divisor(f.source, 2)
    assert mo.image_divisor(f, full).space == f.target.full_space(2)


def test_pull_back_at_two_torsion_is_ramified():
    f = xmap(F5, E_F5)
    rng = np.random.default_rng(0)
    for a in (0, 2, 3):
        E = mo.pull_back(f, ypt(f.target, a, 2))
        (part,) = dv.decompose(E, rng)
        assert (part.degree, part.multiplicity) == (1, 2)
        assert part.prime == dv.point_divisor(f.source, (a, 0), 2)


def test_pull_back_of_generic_points():
    rng = np.random.default_rng(1)
    f = xmap(F5, E_F5)
    for a in (1, 4):  # a^3 + a is not a square mod 5
        parts = dv.decompose(mo.pull_back(f, ypt(f.target, a, 2)), rng)
        assert [(p.degree, p.multiplicity) for p in parts] == [(2, 1)]
    g = xmap(F7, E_F7)
    parts = dv.decompose(mo.pull_back(g, ypt(g.target, 0, 2)), rng)  # y^2 = 1
    assert {p.prime for p in parts} == {dv.point_divisor(g.source, (0, 1), 2), dv.point_divisor(g.source, (0, 6), 2)}


def test_pull_back_of_zero():
    f = xmap(F5, E_F5)
    assert mo.pull_back(f, dv.zero_divisor(f.target, 2)).degree == 0


def test_push_forward_of_a_fibre():
    f = xmap(F7, E_F7)
    D = dv.add_divisors(dv.point_divisor(f.source, (0, 1), 1), dv.point_divisor(f.source, (0, 6), 1), 2)
    twice = dv.add_divisors(ypt(f.target, 0, 1), ypt(f.target, 0, 1), 2)
    assert mo.push_forward(f, D, np.random.default_rng(2)) == twice


def test_push_forward_of_inert_prime():
    # over x = 3 on y^2 = x^3 + 2x + 1 / F_7 the fibre is one degree-2 prime
    f = xmap(F7, E_F7)
    rng = np.random.default_rng(3)
    (P,) = dv.decompose(mo.pull_back(f, ypt(f.target, 3, 2)), rng)
    assert P.degree == 2
    twice = dv.add_divisors(ypt(f.target, 3, 1), ypt(f.target, 3, 1), 2)
    assert mo.push_forward(f, P.prime, rng) == twice


def test_push_pull_exhaustive_on_p1_over_f2():
    f = mo.power_map(F2, 1, 2, 6)
    Y = f.target
    rng = np.random.default_rng(4)
    for E in [ypt(Y, 0, 2), ypt(Y, 1, 2), dv.infinity_divisor(Y, 1, 2)]:
        pushed = mo.push_forward(f, mo.pull_back(f, E), rng)
        assert pushed == dv.add_divisors(E, E, 2)


def test_push_pull_on_x_map():
    f = xmap(F5, E_F5)
    rng = np.random.default_rng(5)
    for a in range(5):
        E = ypt(f.target, a, 2)
        assert mo.push_forward(f, mo.pull_back(f, E), rng) == dv.add_divisors(E, E, 2)


def test_ramification_indices():
    rng = np.random.default_rng(6)
    f = squaring()
    X = f.source
    assert mo.ramification_index(f, dv.point_divisor(X, (0, 0), 1), rng) == 2
    assert mo.ramification_index(f, dv.infinity_divisor(X, 1, 1), rng) == 2
    assert mo.ramification_index(f, dv.point_divisor(X, (1, 0), 1), rng) == 1
    g = xmap(F5, E_F5)
    assert mo.ramification_index(g, dv.point_divisor(g.source, (0, 0), 1), rng) == 2
    (P,) = dv.decompose(mo.pull_back(g, ypt(g.target, 1, 2)), rng)
    assert mo.ramification_index(g, P.prime, rng) == 1


@pytest.mark.parametrize("which", ["squaring", "x-map"])
def test_fundamental_identity(which):
    rng = np.random.default_rng(7)
    f = squaring() if which == "squaring" else xmap(F7, E_F7)
    Y = f.target
    qs = [ypt(Y, a, 2) for a in range(Y.k.q)] + [dv.infinity_divisor(Y, 1, 2)]
    for Q in qs:
        total = 0
        for P in dv.decompose(mo.pull_back(f, Q), rng):
            assert mo.image_divisor(f, P.prime) == Q
            total += mo.ramification_index(f, P.prime, rng) * P.degree // Q.degree
        assert total == f.degree


def test_push_forward_by_x():
    X = cv.build_elliptic(F5, *E_F5, 4)
    x, one = mono(X, 1, 1), mono(X, 1, 0)
    rng = np.random.default_rng(8)
    for a, form in ((0, [0, 1]), (2, [3, 1]), (3, [2, 1])):
        D = dv.point_divisor(X, (a, 0), 2)
        assert mo.push_forward_by_function(X, x, one, 1, D, rng) == form
    D = dv.point_divisor(X, (2, 0), 2)
    assert mo.push_forward_by_function(X, x, one, 1, dv.add_divisors(D, D, 2), rng) == [4, 1, 1]


def test_push_forward_by_x_of_a_degree_two_prime():
    X = cv.build_elliptic(F2, 0, 0, 1, 0, 0, 6)
    rng = np.random.default_rng(9)
    s = mono(X, 2, 2) + mono(X, 2, 1) + mono(X, 2, 0)  # x^2 + x + 1
    primes = [p for p in dv.decompose(dv.divisor_of_section(X, s, 2, 3), rng) if p.degree == 2]
    assert len(primes) == 2
    x, one = mono(X, 1, 1), mono(X, 1, 0)
    for p in primes:
        assert mo.push_forward_by_function(X, x, one, 1, dv.at_level(p.prime, 2), rng) == [1, 1, 1]


def test_push_forward_by_function_common_zero():
    X = cv.build_elliptic(F5, *E_F5, 4)
    D = dv.point_divisor(X, (0, 0), 2)
    with pytest.raises(DomainError):
        mo.push_forward_by_function(X, mono(X, 1, 1), mono(X, 1, 0, 1), 1, D, np.random.default_rng(0))
    with pytest.raises(DomainError):
        mo.push_forward_by_function(X, mono(X, 1, 1), mono(X, 1, 1), 1, D, np.random.default_rng(0))
