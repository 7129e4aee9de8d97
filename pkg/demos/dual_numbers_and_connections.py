r"""
Quotient manifolds and connections over dual numbers
====================================================

A = C[s,t]/(s,t)^2 ⊗ M(2) has a large center B = C[s,t]/(s,t)^2, and B has
outer derivations.  We check that B is a quotient manifold of A, compare
basic forms on A with forms on B, then build connections from splittings
of Der(B) into derivations of A.

Run it with ``python3 demos/dual_numbers_and_connections.py``.
"""

from __future__ import annotations

import numpy as np

from ncgeom.algebra import direct_sum, dual_number_extension, matrix_algebra, subalgebra
from ncgeom.derivations import ad, bracket, derivations, killing_space, stabilizer_space
from ncgeom.forms import isom_check
from ncgeom.geometry import (
    associated_module,
    connection_from_splitting,
    covariant_projection,
    make_splitting,
    quotient_manifold_check,
    splitting_curvature,
    synthesize_splitting,
)

A = dual_number_extension(matrix_algebra(2))
B = subalgebra(A, A.center().dense_basis(), name="Z")

#####################################################################
# Quotient manifold
# -----------------

rep = quotient_manifold_check(A, B)
print("conditions:", rep.conditions, "verdict:", rep.verdict)
print("dims:", rep.dims)

D = derivations(A)
iso = isom_check(A, B, stabilizer_space(D, B.space), killing_space(D, B.space), cap=2)
for row in iso.degrees:
    print(f"degree {row['degree']}: basic forms on A {row['dim_basic_A']}, forms on B {row['dim_B']}")

#####################################################################
# A negative control: the diagonal in M(2) ⊕ M(2) is not a quotient.
# Only the basic-algebra condition fails.

S = direct_sum(matrix_algebra(2), matrix_algebra(2))
diag = subalgebra(S, [S.basis_vector(i) + S.basis_vector(i + 4) for i in range(4)])
print("diagonal fails:", quotient_manifold_check(S, diag).failing)

#####################################################################
# Splittings and curvature
# ------------------------
#
# A splitting lifts derivations of B to derivations of A.  Its curvature
# [ψX, ψY] − ψ[X, Y] agrees with the curvature of the induced connection.

psi = synthesize_splitting(A, B)
conn = connection_from_splitting(psi)
print("synthesized splitting flat:", conn.is_flat())
P = covariant_projection(psi)
print("projection is idempotent:", all(a == b for a, b in zip(P.dot(P).ravel(), P.ravel())))

# perturb by an inner derivation built from s⊗e12; s^2 = 0 keeps it Z(B)-linear
F = A.field
bump = ad(A, A.element("s⊗e12"))
psi2 = make_splitting(A, B, [psi.images[0] + bump] + psi.images[1:], psi.h, psi.ghat)
basis = psi.der_B.basis()
nonzero = sum(1 for X in basis for Y in basis if any(splitting_curvature(psi2, X, Y).ravel()))
print("perturbed splitting: nonzero curvature pairs =", nonzero)

#####################################################################
# Associated modules for sl(2) acting on the matrix factor
# ---------------------------------------------------------

g = [ad(A, A.element(x)) for x in ("1⊗e12", "1⊗e21", "1⊗e11 - 1⊗e22")]
print("ψ commutes with g:", all(bracket(G, X).is_zero() for G in g for X in psi.images))
fundamental = [np.array([[F(v) for v in r] for r in m], dtype=object) for m in (
    [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]])]
adjoint = [np.array([[F(v) for v in r] for r in m], dtype=object) for m in (
    [[0, 0, -2], [0, 0, 0], [0, 1, 0]], [[0, 0, 0], [0, 0, 2], [-1, 0, 0]], [[2, 0, 0], [0, -2, 0], [0, 0, 0]])]
print("dim M_V, fundamental:", associated_module(A, B, g, fundamental).space.dim)
print("dim M_V, adjoint:", associated_module(A, B, g, adjoint).space.dim)
