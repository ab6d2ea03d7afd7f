from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from uniformq.poly import Poly, poly_gcd
from uniformq.scalars import quad

small_polys = st.lists(
    st.integers(min_value=-9, max_value=9), min_size=0, max_size=6
).map(Poly)


def test_degree_and_zero():
    assert Poly().degree == -1
    assert Poly([0, 0]).degree == -1
    assert Poly([5]).degree == 0
    assert Poly([0, 0, 3]).degree == 2


def test_arithmetic():
    p = Poly([1, 2])  # 1 + 2t
    q = Poly([-1, 1])  # t - 1
    assert p * q == Poly([-1, -1, 2])
    assert p + q == Poly([0, 3])
    assert (p - p).is_zero()


def test_divmod_exact():
    p = Poly([-1, 0, 1])  # t^2 - 1
    q, r = divmod(p, Poly([-1, 1]))
    assert q == Poly([1, 1]) and r.is_zero()
    q, r = divmod(Poly([1, 1, 1]), Poly([0, 1]))
    assert q == Poly([1, 1]) and r == Poly([1])


def test_gcd_examples():
    assert poly_gcd(Poly([-1, 0, 1]), Poly([-1, 1])) == Poly([-1, 1])
    # t^3 - 18t and its derivative 3t^2 - 18 share no roots
    assert poly_gcd(Poly([0, -18, 0, 1]), Poly([-18, 0, 3])) == Poly([1])
    p = Poly([2, 4])
    assert poly_gcd(p, Poly()) == p.monic()
    assert poly_gcd(Poly(), p) == p.monic()


def test_evaluation_horner():
    p = Poly([0, -18, 0, 1])  # t^3 - 18t
    assert p(0) == 0
    r18 = quad(0, 3, 2)  # 3 sqrt 2
    assert p(r18) == 0
    assert p(1) == -17


def test_derivative():
    assert Poly([5, 3, 0, 2]).derivative() == Poly([3, 0, 6])
    assert Poly([7]).derivative().is_zero()


def test_monic():
    assert Poly([2, 4]).monic() == Poly([Fraction(1, 2), 1])
    assert Poly().monic().is_zero()


def test_scale_arg():
    p = Poly([1, 1, 1])  # 1 + t + t^2
    assert p.scale_arg(2) == Poly([1, 2, 4])
    r2 = quad(0, 1, 2)
    assert p.scale_arg(r2) == Poly([1, r2, 2])


def test_quadext_coefficients():
    r2 = quad(0, 1, 2)
    p = Poly([-r2, 1]) * Poly([r2, 1])  # (t - r2)(t + r2) = t^2 - 2
    assert p == Poly([-2, 0, 1])


@given(p=small_polys, q=small_polys)
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    if g.is_zero():
        assert p.is_zero() and q.is_zero()
        return
    assert (p % g).is_zero()
    assert (q % g).is_zero()


@given(p=small_polys, q=small_polys)
def test_divmod_reconstructs(p, q):
    if q.is_zero():
        with pytest.raises(ZeroDivisionError):
            divmod(p, q)
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.degree < q.degree or rem.is_zero()
