from __future__ import annotations

import pickle

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from ncgeom.cyclotomic import Cyclotomic, common_field, cyclotomic_polynomial, euler_phi, field

ORDERS = [1, 2, 3, 4, 5, 6, 8, 12]


rationals = st.builds(mpq, st.integers(-20, 20), st.integers(1, 7))


@st.composite
def elements(draw, orders=ORDERS, count=1):
    """A field and ``count`` random elements of it."""
    F = field(draw(st.sampled_from(orders)))
    xs = [F.from_coeffs(draw(st.lists(rationals, min_size=F.degree, max_size=F.degree))) for _ in range(count)]
    return (F, *xs)


def test_euler_phi_and_polynomials():
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert len(cyclotomic_polynomial(12)) == euler_phi(12) + 1


def test_roots_of_unity():
    F = field(4)
    i = F.zeta()
    assert i * i == F(-1)
    assert F.zeta(4) == F.one
    w = field(3).zeta()
    assert w * w * w == 1
    assert 1 + w + w * w == 0
    assert field(2).zeta() == -1


def test_embedding_into_larger_field():
    i = field(4).zeta()
    big = field(12)
    j = big(i)
    assert j * j == big(-1)
    assert big.zeta(3) == j
    w = field(3).zeta()
    assert i * w == big.zeta(3) * big.zeta(4)
    assert common_field(4, 6).order == 12


def test_parse_and_format_round_trip():
    F = field(4)
    x = F.parse("1/2 - 3*z")
    assert F.coeffs(x) == (mpq(1, 2), mpq(-3))
    assert F.parse(F.format(x)) == x
    assert F.format(F.zero) == "0"


def test_division_by_zero_raises():
    F = field(5)
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero


def test_pickle_keeps_field_identity():
    x = field(5).zeta(2)
    y = pickle.loads(pickle.dumps(x))
    assert y == x and y.field is x.field


@given(elements(count=2))
def test_field_axioms(data):
    F, x, y = data
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    if y:
        assert (x / y) * y == x
        assert y * (1 / y) == F.one


@given(elements(count=3))
def test_distributive(data):
    F, x, y, z = data
    assert x * (y + z) == x * y + x * z


@given(elements(orders=[3, 4, 5]))
def test_embed_is_a_ring_map(a):
    F, x = a
    big = field(F.order * 4)
    y = big(x)
    assert big(x * x) == y * y
    assert big(x + F.one) == y + big.one
    if isinstance(x, Cyclotomic):
        assert x.embed(big.order) == y
