from __future__ import annotations

import pytest
from hypothesis import given

from conftest import base_algebra, center_subalgebra, unital_algebras
from ncgeom.algebra import function_algebra, ideal_closure, tensor_product
from ncgeom.derivations import ad, derivations, inner_derivations
from ncgeom.errors import NotLieClosed, NotMaximal, PredicateNotVerified
from ncgeom.forms import FormAlgebra, koszul_d
from ncgeom.freealg import clock_shift_presentation
from ncgeom.geometry import (
    action_operation,
    presented_submanifold_check,
    quotient_manifold_check,
    seccohom_check,
    submanifold_check,
    tangent_space,
)


def dims_tuple(rep):
    d = rep.dims
    return d["der_A"], d["G_C"], d["G_A"], d["der_Q"]


def test_point_algebra_is_submanifold(f3m2, point_ideal):
    rep = submanifold_check(f3m2, point_ideal, with_seccohom=True)
    assert rep.verdict and rep.lemma_path
    assert dims_tuple(rep) == (9, 9, 6, 3)
    assert all(rep.exactness.values())
    sc = rep.seccohom
    assert sc.hypothesis and sc.additive
    d = sc.dims
    assert d["H1_C_A_A"] == d["H1_A_C"] + d["H1_Q_Q"]


def test_zero_ideal_is_trivially_submanifold(m2):
    rep = submanifold_check(m2, ideal_closure(m2, []))
    assert rep.verdict
    assert rep.dims["G_A"] == 0 and rep.dims["image_pi"] == rep.dims["der_A"] == 3
    sc = seccohom_check(m2, ideal_closure(m2, []), rep)
    assert sc.hypothesis and sc.dims["H1_A_C"] == 0


def test_commutative_point():
    A = function_algebra(3)
    C = ideal_closure(A, [A.element("p2"), A.element("p3")])
    rep = submanifold_check(A, C, with_seccohom=True)
    assert rep.verdict
    assert dims_tuple(rep) == (0, 0, 0, 0)
    assert rep.seccohom.hypothesis and rep.seccohom.additive


def test_non_surjective_case():
    # C[x]/x^3 ⊗ C[s]/s^2 modulo (x^2 s): some derivations of Q do not lift
    A = tensor_product(base_algebra("trunc3"), base_algebra("dual1"))
    C = ideal_closure(A, [A.element("e13⊗s")])
    rep = submanifold_check(A, C, with_seccohom=True)
    assert not rep.verdict and not rep.lemma_path
    assert dims_tuple(rep) == (7, 7, 2, 7) and rep.dims["image_pi"] == 5
    assert rep.seccohom is None
    with pytest.raises(PredicateNotVerified):
        seccohom_check(A, C, rep)


def test_tangent_space_at_point(f3m2, point_ideal):
    T = tangent_space(f3m2, point_ideal)
    assert T.dim == 3
    X = ad(f3m2, f3m2.element("p1⊗e12"))
    assert len(T.value(X)) == 3
    # derivations supported away from the point vanish there
    Y = ad(f3m2, f3m2.element("p2⊗e12"))
    assert not any(T.value(Y))
    fa = FormAlgebra(f3m2, cap=1)
    a = f3m2.element("p1⊗e21 + p3⊗e11")
    alpha = koszul_d(fa.element(a))
    assert list(T.form_value(alpha, X)) == list(T.quotient.project(X(a)))


def test_tangent_space_requires_maximal(f3m2):
    C = ideal_closure(f3m2, [f3m2.element("p3⊗e11")])
    with pytest.raises(NotMaximal):
        tangent_space(f3m2, C)


def test_tangent_space_of_zero_ideal(m2):
    T = tangent_space(m2, ideal_closure(m2, []))
    assert T.dim == derivations(m2).dim


def test_quotient_manifold_matrix_algebra(m2):
    rep = quotient_manifold_check(m2, center_subalgebra(m2))
    assert rep.verdict
    assert rep.dims["g_hat"] == rep.dims["h"] == 3 and rep.dims["der_B"] == 0


def test_quotient_manifold_dual_numbers(dual_m2):
    rep = quotient_manifold_check(dual_m2, center_subalgebra(dual_m2))
    assert rep.verdict
    assert (rep.dims["g_hat"], rep.dims["h"], rep.dims["der_B"]) == (9, 13, 4)
    again = quotient_manifold_check(dual_m2, center_subalgebra(dual_m2))
    assert again.to_dict() == rep.to_dict()


def test_quotient_manifold_negative_control(m2m2, diagonal):
    rep = quotient_manifold_check(m2m2, diagonal)
    assert not rep.verdict
    assert rep.failing == ["iii"]
    assert rep.dims["g_hat"] == 0


def test_relaxed_mode_is_explicit(m2m2, diagonal):
    strict = quotient_manifold_check(m2m2, diagonal)
    relaxed = quotient_manifold_check(m2m2, diagonal, mode="relaxed")
    assert "induced_der_B_dim" not in strict.to_dict()
    assert relaxed.to_dict()["induced_der_B_dim"] == relaxed.dims["h"] - relaxed.dims["g_hat"]
    with pytest.raises(ValueError):
        quotient_manifold_check(m2m2, diagonal, mode="loose")


def test_action_of_inner_derivations(m2, f3m2):
    rep = action_operation(inner_derivations(m2).basis(), m2)
    assert rep.basic.dim == 1 and rep.contained
    rep = action_operation(inner_derivations(f3m2).basis(), f3m2)
    assert rep.basic == f3m2.center()
    assert action_operation([], m2).basic.dim == 4


def test_action_requires_lie_closure(m2):
    g = [ad(m2, m2.element("e12")), ad(m2, m2.element("e21"))]
    with pytest.raises(NotLieClosed):
        action_operation(g, m2)


@pytest.mark.parametrize("n", [2, 3])
def test_clock_shift_submanifold(n):
    rep = presented_submanifold_check(clock_shift_presentation(n))
    assert rep.verdict and rep.lemma_path
    assert rep.lifts_preserve_ideal and rep.lifts_project_correctly
    assert rep.dims["dim_Q"] == n * n and rep.dims["center_Q"] == 1


@given(unital_algebras())
def test_rank_nullity_of_pi(A):
    g = A.basis()[-1]
    C = ideal_closure(A, [g])
    if not C.is_proper():
        return
    rep = submanifold_check(A, C)
    assert rep.dims["G_C"] == rep.dims["G_A"] + rep.dims["image_pi"]
    assert rep.exactness["kernel_equals_G_A"]
    if rep.lemma_path:
        assert rep.verdict


@given(unital_algebras())
def test_center_is_basic_for_inner_action(A):
    rep = action_operation(inner_derivations(A).basis(), A)
    assert rep.basic == A.center()
