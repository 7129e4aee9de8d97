from __future__ import annotations

import numpy as np
import pytest

from conftest import center_subalgebra
from ncgeom.algebra import dual_numbers, regular_bimodule
from ncgeom.derivations import Derivation, ad, bracket, derivations
from ncgeom.errors import CurvatureObstruction, InvalidSplitting, NotEquivariant, PreconditionError
from ncgeom.exactlin import ExactMatrix, identity
from ncgeom.geometry import (
    Connection,
    associated_connection,
    associated_module,
    canonical_connection,
    connection_from_splitting,
    covariant_projection,
    make_splitting,
    projection_to_splitting,
    reduced_module,
    splitting_curvature,
    splitting_from_complement,
    synthesize_splitting,
    triplet_connection,
)


def meq(a, b):
    return all(x == y for x, y in zip(np.asarray(a).ravel(), np.asarray(b).ravel()))


def tensor_lifts(A):
    """X⊗1 on (dual numbers)⊗M(2) for a basis X of Der(dual numbers)."""
    D = derivations(dual_numbers(("s", "t")))
    I4 = identity(4, A.field)
    return [Derivation(A, np.kron(X.matrix, I4)) for X in D.basis()]


def sl2(A):
    return [ad(A, A.element(x)) for x in ("1⊗e12", "1⊗e21", "1⊗e11 - 1⊗e22")]


def perturbed(psi, coeffs, x="s⊗e12"):
    """ψ'(Y_k) = ψ(Y_k) + c_k ad(x), returned together with φ."""
    A = psi.A
    xa = A.element(x)
    images = [X + ad(A, xa).scale(A.field(c)) for X, c in zip(psi.images, coeffs)]
    psi2 = make_splitting(A, psi.B, images, psi.h, psi.ghat)

    def phi(Y):
        co = psi.der_B.coordinates(Y)
        return sum((c * A.field(k) for c, k in zip(co, coeffs)), A.field.zero) * xa

    return psi2, phi


@pytest.fixture(scope="module")
def dual_setup(dual_m2):
    B = center_subalgebra(dual_m2)
    lifted = splitting_from_complement(dual_m2, B, tensor_lifts(dual_m2))
    synthesized = synthesize_splitting(dual_m2, B)
    return dual_m2, B, lifted, synthesized


def assert_double_curvature(psi):
    conn = connection_from_splitting(psi)
    basis = psi.der_B.basis()
    for X in basis:
        for Y in basis:
            assert meq(conn.curvature(X, Y), splitting_curvature(psi, X, Y))


def test_two_curvatures_agree(dual_setup):
    A, B, lifted, synthesized = dual_setup
    for psi in (lifted, synthesized, perturbed(lifted, [1, 0, 2, -1])[0], perturbed(synthesized, [0, 3, 1, 1])[0]):
        assert_double_curvature(psi)


def test_lifted_splitting_is_flat(dual_setup):
    _, _, lifted, _ = dual_setup
    assert connection_from_splitting(lifted).is_flat()


def test_perturbed_splitting_obstruction(dual_setup):
    A, B, lifted, _ = dual_setup
    psi2, phi = perturbed(lifted, [1, 0, 0, 1])
    basis = lifted.der_B.basis()
    nonzero = False
    for X in basis:
        for Y in basis:
            expected = ad(
                A,
                lifted(X)(phi(Y)) - lifted(Y)(phi(X)) + A.commutator(phi(X), phi(Y)) - phi(bracket(X, Y)),
            ).matrix
            R = splitting_curvature(psi2, X, Y)
            assert meq(R, expected)
            nonzero = nonzero or any(R.ravel())
    assert nonzero
    assert not connection_from_splitting(psi2).is_flat()


def test_matrix_algebra_empty_connection(m2):
    psi = synthesize_splitting(m2, center_subalgebra(m2))
    assert psi.images == []
    assert connection_from_splitting(psi).is_flat()
    P = covariant_projection(psi)
    assert meq(P, identity(3, m2.field))


def test_covariant_projection(dual_setup):
    A, B, lifted, synthesized = dual_setup
    for psi in (lifted, synthesized):
        P = covariant_projection(psi)
        assert meq(P.dot(P), P)
        assert ExactMatrix(P, A.field).rank() == psi.ghat.dim
        back = projection_to_splitting(A, B, P, psi.h, psi.ghat)
        assert all(X == Y for X, Y in zip(back.images, psi.images))
    # P kills the lifts and fixes ĝ
    P = covariant_projection(lifted)
    h = lifted.h
    for X in lifted.images:
        assert not any(P.dot(np.array(h.coordinates(X), dtype=object)))
    for G in lifted.ghat.basis():
        g = np.array(h.coordinates(G), dtype=object)
        assert meq(P.dot(g), g)


def test_invalid_splittings(dual_setup):
    A, B, lifted, _ = dual_setup
    with pytest.raises(InvalidSplitting):
        make_splitting(A, B, lifted.images[:-1])
    with pytest.raises(InvalidSplitting):
        make_splitting(A, B, lifted.images[1:] + lifted.images[:1])
    # ad(1⊗e12) is not killed by the nilpotent part of Z(B)
    with pytest.raises(InvalidSplitting):
        perturbed(lifted, [1, 0, 0, 0], x="1⊗e12")


def test_triplet_equivariance(dual_setup):
    A, B, lifted, _ = dual_setup
    rep = triplet_connection(A, B, sl2(A), lifted)
    assert rep == {"g_dim": 3, "der_B_dim": 4, "equivariant": True, "flat": True}
    with pytest.raises(NotEquivariant):
        triplet_connection(A, B, sl2(A), perturbed(lifted, [1, 0, 0, 0])[0])


def _rep(F, rows_list):
    return [np.array([[F(x) for x in r] for r in rows], dtype=object) for rows in rows_list]


def test_associated_modules(dual_setup):
    A, B, lifted, _ = dual_setup
    F = A.field
    g = sl2(A)
    fundamental = _rep(F, [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]])
    # adjoint in the basis (E, F, H)
    adjoint = _rep(
        F,
        [
            [[0, 0, -2], [0, 0, 0], [0, 1, 0]],
            [[0, 0, 0], [0, 0, 2], [-1, 0, 0]],
            [[2, 0, 0], [0, -2, 0], [0, 0, 0]],
        ],
    )
    assert associated_module(A, B, g, fundamental).space.dim == 0
    MV = associated_module(A, B, g, adjoint)
    assert MV.space.dim == 3
    conn = associated_connection(lifted, MV, g)
    assert conn.is_flat()
    with pytest.raises(NotEquivariant):
        associated_connection(perturbed(lifted, [1, 0, 0, 0])[0], MV, g)
    with pytest.raises(PreconditionError):
        associated_module(A, B, g, list(reversed(adjoint)))


def test_canonical_connection_is_flat(m2):
    conn = canonical_connection(regular_bimodule(m2))
    assert conn.is_flat()
    red = reduced_module(conn, center_subalgebra(m2))
    assert red.space.dim == 1


def test_canonical_connection_needs_inner(dual_m2):
    with pytest.raises(PreconditionError):
        canonical_connection(regular_bimodule(dual_m2))


def test_curvature_obstruction(m2):
    # ∇_X m = X m + λ(X) m has curvature −λ([X, Y])
    M = regular_bimodule(m2)
    D = derivations(m2)
    F = m2.field
    I = identity(4, F)
    lam = [F(1), F(0), F(0)]
    conn = Connection(M, D, [X.matrix + c * I for X, c in zip(D.basis(), lam)])
    basis = D.basis()
    for X in basis:
        for Y in basis:
            co = D.coordinates(bracket(X, Y))
            assert meq(conn.curvature(X, Y), -sum((c * l for c, l in zip(co, lam)), F.zero) * I)
    assert not conn.is_flat()
    with pytest.raises(CurvatureObstruction):
        reduced_module(conn, center_subalgebra(m2))


def test_reduction_of_tautological_connection(dual_setup):
    A, B, _, _ = dual_setup
    D = derivations(A)
    conn = Connection(regular_bimodule(A), D, [X.matrix for X in D.basis()])
    red = reduced_module(conn, B)
    assert red.space == B.space
    assert red.connection.space.dim == 4
    assert red.connection.is_flat()


def test_reduction_with_trivial_ghat(m2m2, diagonal):
    D = derivations(m2m2)
    conn = Connection(regular_bimodule(m2m2), D, [X.matrix for X in D.basis()])
    red = reduced_module(conn, diagonal)
    assert red.space.dim == m2m2.dim
