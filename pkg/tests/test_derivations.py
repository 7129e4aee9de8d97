from __future__ import annotations

import pytest
from hypothesis import given

from conftest import center_subalgebra, unital_algebras
from ncgeom.algebra import dual_numbers, function_algebra, matrix_algebra, quotient_algebra
from ncgeom.errors import PreconditionError
from ncgeom.exactlin import identity
from ncgeom.derivations import (
    Derivation,
    DerivationSpace,
    ad,
    bracket,
    derivations,
    induced_map_pi,
    inner_derivations,
    is_ideal_in,
    killing_space,
    lie_closure_check,
    mapping_into,
    out,
    preserving_space,
    restriction_rho,
    satisfies_leibniz,
    stabilizer_space,
    zmodule_span,
)


def test_matrix_algebra_derivations_are_inner(m2, m3):
    assert derivations(m2).dim == 3
    assert inner_derivations(m2) == derivations(m2)
    assert derivations(m3).dim == 8
    assert out(m3)[0] == 0


def test_commutative_semisimple_has_no_derivations():
    assert derivations(function_algebra(3)).dim == 0


def test_dual_numbers_are_all_outer():
    A = dual_numbers()
    assert derivations(A).dim == 4
    assert inner_derivations(A).dim == 0
    assert out(A)[0] == 4


def test_ad_of_unit_is_zero(m2):
    assert ad(m2, m2.one()).is_zero()


def test_non_derivation_rejected(m2):
    assert not satisfies_leibniz(m2, identity(4, m2.field))
    with pytest.raises(PreconditionError):
        Derivation(m2, identity(4, m2.field))


def test_point_ideal_spaces(f3m2, point_ideal):
    D = derivations(f3m2)
    G_C = preserving_space(D, point_ideal.space)
    G_A = mapping_into(G_C, point_ideal.space)
    assert (D.dim, G_C.dim, G_A.dim) == (9, 9, 6)
    assert is_ideal_in(G_A, G_C)
    pi = induced_map_pi(G_C, quotient_algebra(f3m2, point_ideal))
    assert pi.rank == 3 and pi.is_surjective()
    assert pi.kernel == G_A


def test_dual_tensor_m2_spaces(dual_m2):
    B = center_subalgebra(dual_m2)
    D = derivations(dual_m2)
    ghat = killing_space(D, B.space)
    h = stabilizer_space(D, B.space)
    assert (D.dim, ghat.dim, h.dim) == (13, 9, 13)
    rho = restriction_rho(h, B)
    assert rho.rank == 4 and rho.kernel == ghat
    assert zmodule_span(h.basis(), dual_m2) == D


@given(unital_algebras())
def test_derivation_space_is_lie_algebra(A):
    D = derivations(A)
    assert lie_closure_check(D)
    for X in D.basis():
        assert satisfies_leibniz(A, X.matrix)
    assert inner_derivations(A) <= D
    assert is_ideal_in(inner_derivations(A), D)


@given(unital_algebras())
def test_derivations_kill_unit_and_preserve_center(A):
    D = derivations(A)
    Z = A.center()
    for X in D.basis():
        assert not any(X(A.one()))
        for z in Z.dense_basis():
            assert Z.contains(X(z))


@given(unital_algebras())
def test_out_rank_nullity(A):
    k, reps = out(A)
    assert k == derivations(A).dim - inner_derivations(A).dim
    assert len(reps) == k


@given(unital_algebras())
def test_bracket_is_antisymmetric(A):
    D = derivations(A).basis()
    for X in D[:3]:
        for Y in D[:3]:
            assert (bracket(X, Y) + bracket(Y, X)).is_zero()


@given(unital_algebras())
def test_zmodule_span_is_zmodule(A):
    S = zmodule_span(inner_derivations(A).basis(), A)
    assert S.is_zmodule()


def test_derivation_space_lattice(m2):
    D = derivations(m2)
    X = ad(m2, m2.element("e12"))
    L = DerivationSpace.span(m2, [X])
    assert L <= D and L.dim == 1
    assert (L & D) == L
    assert X in D
