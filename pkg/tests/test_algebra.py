from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from conftest import base_algebra, unital_algebras
from ncgeom.algebra import (
    FDAlgebra,
    annihilator_ideal,
    centralizer,
    change_field,
    cyclic_group_algebra,
    direct_sum,
    dual_numbers,
    function_algebra,
    ideal_closure,
    is_central,
    is_simple,
    matrix_algebra,
    quotient_algebra,
    quotient_bimodule,
    regular_bimodule,
    sub_bimodule,
    subalgebra,
    tensor_product,
    validate_algebra,
)
from ncgeom.cyclotomic import field
from ncgeom.errors import AssociativityViolation, NotSubBimodule, PreconditionError, UnitInIdeal, UnitViolation

Q = field(1)


def test_matrix_units_multiply(m2):
    e = m2.element
    assert list(m2.mul(e("e12"), e("e21"))) == list(e("e11"))
    assert not any(m2.mul(e("e12"), e("e12")))
    assert list(m2.one()) == list(e("e11 + e22"))


def test_center_dimensions(m2, f3m2, dual_m2, m2m2):
    assert m2.center().dim == 1
    assert f3m2.center().dim == 3
    assert dual_m2.center().dim == 3
    assert m2m2.center().dim == 2
    assert dual_numbers().center().dim == 3


def test_tensor_and_sum_dimensions():
    A = tensor_product(function_algebra(2), matrix_algebra(2))
    assert A.dim == 8 and A.labels[0] == "p1⊗e11"
    S = direct_sum(matrix_algebra(2), function_algebra(1))
    assert S.dim == 5
    assert not S.is_commutative()


def test_associativity_violation_reports_triple():
    products = {(0, 0): {0: Q(1)}, (0, 1): {1: Q(1)}, (1, 0): {1: Q(1)}, (1, 1): {0: Q(1)}}
    A = FDAlgebra(Q, ["a", "b"], [1, 0], products)  # C[Z2]
    assert A.dim == 2
    # b b = a + b but a b = 2b breaks associativity
    bad = dict(products)
    bad[(1, 1)] = {0: Q(1), 1: Q(1)}
    bad[(0, 1)] = {1: Q(2)}
    with pytest.raises(AssociativityViolation) as info:
        FDAlgebra(Q, ["a", "b"], [1, 0], bad)
    assert len(info.value.triple) == 3


def test_unit_violation():
    with pytest.raises(UnitViolation):
        validate_algebra([[[2]]], [1], ["u"], Q)


def test_ideal_closure_and_quotient(f3m2, point_ideal):
    assert point_ideal.dim == 8
    Q_ = quotient_algebra(f3m2, point_ideal)
    assert Q_.q.dim == 4
    assert is_simple(Q_.q)
    a, b = f3m2.element("p1⊗e12 + p2⊗e21"), f3m2.element("p1⊗e21 + 3*p3⊗e11")
    assert list(Q_.project(f3m2.mul(a, b))) == list(Q_.q.mul(Q_.project(a), Q_.project(b)))


def test_unit_in_ideal_rejected(m2):
    with pytest.raises(UnitInIdeal):
        quotient_algebra(m2, ideal_closure(m2, [m2.element("e12")]))


def test_simplicity():
    assert is_simple(matrix_algebra(2))
    assert is_simple(matrix_algebra(3))
    assert is_simple(function_algebra(1))
    assert not is_simple(function_algebra(2))
    assert not is_simple(dual_numbers())
    assert not is_simple(direct_sum(matrix_algebra(2), matrix_algebra(2)))


def test_subalgebra_checks(m2):
    with pytest.raises(PreconditionError):
        subalgebra(m2, [m2.element("e12")])
    with pytest.raises(PreconditionError):
        subalgebra(m2, [m2.one(), m2.element("e12"), m2.element("e21")])
    B = subalgebra(m2, [m2.one(), m2.element("e11")])
    assert B.algebra.dim == 2 and B.algebra.is_commutative()


def test_bimodule_operations(m2, f3m2, point_ideal):
    M = regular_bimodule(m2)
    assert is_central(M)
    assert centralizer(M).dim == 1
    R = regular_bimodule(f3m2)
    N = point_ideal.space
    assert annihilator_ideal(R, N).space == N
    S = sub_bimodule(R, N)
    assert S.dim == 8
    Qm, proj, sec = quotient_bimodule(R, N)
    assert Qm.dim == 4
    with pytest.raises(NotSubBimodule):
        sub_bimodule(R, f3m2.span([f3m2.element("p1⊗e12")]))


def test_change_field_preserves_structure():
    A = cyclic_group_algebra(3, field(3))
    B = change_field(A, field(6))
    assert B.dim == 3 and B.field.order == 6
    with pytest.raises(PreconditionError):
        change_field(A, field(4))


@given(unital_algebras())
def test_random_algebras_are_associative_and_unital(A):
    for a in A.basis():
        assert list(A.mul(A.one(), a)) == list(a)
        assert list(A.mul(a, A.one())) == list(a)
    L = A.left_matrices()
    for i, x in enumerate(A.basis()):
        for j, y in enumerate(A.basis()):
            assert list(L[i].dot(y)) == list(A.mul(x, y))


@given(unital_algebras())
def test_center_elements_commute(A):
    for z in A.center().dense_basis():
        for a in A.basis():
            assert not any(A.commutator(z, a))
    assert A.center().contains(A.one())


@given(unital_algebras())
def test_ideal_closure_is_two_sided(A):
    g = A.basis()[-1]
    C = ideal_closure(A, [g])
    for c in C.space.dense_basis():
        for a in A.basis():
            assert C.contains(A.mul(a, c)) and C.contains(A.mul(c, a))


def test_base_algebra_dims():
    assert base_algebra("trunc3").is_commutative()
    assert not base_algebra("upper").is_commutative()
    assert base_algebra("upper").center().dim == 1
    assert np.all(base_algebra("Z3").unit == base_algebra("Z3").one())
