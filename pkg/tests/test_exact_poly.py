from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuttelimit.exact_poly import (
    BiPoly,
    Poly,
    as_rational,
    binomial_power,
    format_rational,
    isolate_real_roots,
    root_bound,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(rationals, max_size=6).map(Poly)
bipolys = st.lists(st.lists(st.integers(-9, 9), max_size=4), max_size=4).map(BiPoly)


def test_as_rational():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(Fraction(6, 3)) == 2 and isinstance(as_rational(Fraction(6, 3)), int)
    assert as_rational(True) == 1
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert format_rational(Fraction(9, 7)) == "9/7"
    assert format_rational(4) == "4"


def test_poly_basics():
    z = Poly.z()
    p = z**3 + 3 * z**2 + 3 * z
    assert p.render() == "z^3 + 3*z^2 + 3*z"
    assert (z * z - 1).render() == "z^2 - 1"
    assert Poly([0, Fraction(1, 2)]).render() == "1/2*z"
    assert Poly().degree == -1 and Poly().is_zero()
    assert p[7] == 0 and p.leading == 1
    assert p.shift(1) == (z + 1) ** 3 + 3 * (z + 1) ** 2 + 3 * (z + 1)
    assert p(2) == 26 and p.eval_float(0.5) == pytest.approx(0.125 + 0.75 + 1.5)
    assert binomial_power(3, 4) == (z + 3) ** 4


def test_mul_zpow():
    z = Poly.z()
    assert (z**3).mul_zpow(-2) == z
    with pytest.raises(ValueError):
        (z + 1).mul_zpow(-1)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()


@settings(max_examples=60, deadline=None)
@given(polys, polys, rationals)
def test_evaluation_is_a_homomorphism(a, b, t):
    assert (a * b)(t) == a(t) * b(t)
    assert (a + b)(t) == a(t) + b(t)
    assert a.compose(b)(t) == a(b(t))
    assert a.shift(t)(0) == a(t)


@settings(max_examples=60, deadline=None)
@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_division(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=40, deadline=None)
@given(polys.filter(lambda p: p.degree >= 1), st.integers(1, 3), st.integers(1, 3))
def test_squarefree_reassembles(p, k1, k2):
    q = p**k1 * (p + 1) ** k2
    out = Poly.const(1)
    for f, k in q.squarefree_factors():
        out = out * f**k
    assert out.monic() == q.monic()


@settings(max_examples=40, deadline=None)
@given(bipolys, bipolys, st.integers(-5, 5), st.integers(-5, 5))
def test_bipoly_ring(a, b, x, y):
    assert (a * b)(x, y) == a(x, y) * b(x, y)
    assert (a + b)(x, y) == a(x, y) + b(x, y)
    assert a.at_y(y)(x) == a(x, y)
    assert a.at_x(x)(y) == a(x, y)


def test_bipoly_misc():
    x, y = BiPoly.x(), BiPoly.y()
    T = x**2 + x + y
    assert T.to_dict() == {(2, 0): 1, (1, 0): 1, (0, 1): 1}
    assert T.coefficient(2, 0) == 1 and T.coefficient(5, 5) == 0
    assert T.degree_x == 2 and T.degree_y == 1
    assert BiPoly.from_dict(T.to_dict()) == T
    assert T.eval_float(1.5, 2.0) == pytest.approx(5.75)


def test_root_isolation():
    z = Poly.z()
    p = (z * z - 2) * (z - Fraction(1, 3))
    roots = isolate_real_roots(p)
    assert roots == pytest.approx([-(2**0.5), 1 / 3, 2**0.5], abs=1e-11)
    assert all(abs(r) <= root_bound(p) for r in roots)
    assert isolate_real_roots(z * z + 1) == []
    # exact midpoint root
    assert isolate_real_roots(z) == pytest.approx([0.0])


def test_arithmetic_examples():
    z = Poly.z()
    assert (z + 1) * (z - 1) == z**2 - 1
    assert z + Poly() == z
    x, y = BiPoly.x(), BiPoly.y()
    assert (x + y) * (x - y) == x**2 - y**2
    assert (z**2 - 1)(2) == 3
    K3 = x**2 + x + y
    assert K3(1, 1) == 3 and K3(2, 1) == 7
    assert (z**2).eval_float(1.5) == 2.25
    assert (z**3 - 3 * z).eval_float(2.5) == pytest.approx(8.125, rel=1e-15)
    assert Poly().eval_float(7.25) == 0


@settings(max_examples=60, deadline=None)
@given(polys, rationals)
def test_float_evaluation_tracks_exact(p, t):
    exact = float(p(t))
    approx = p.eval_float(float(t))
    scale = sum(abs(float(c)) * abs(float(t)) ** i for i, c in enumerate(p.coeffs)) or 1.0
    assert abs(approx - exact) <= 1e-12 * scale
