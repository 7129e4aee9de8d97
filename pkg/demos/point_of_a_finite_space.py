r"""
A point of a three-point space, seen through derivations
========================================================

Functions on three points with values in 2x2 matrices form the algebra
A = C^3 ⊗ M(2).  Picking a point means quotienting by the ideal of functions
that vanish there.  This script asks whether that quotient sits inside A
like a submanifold, computes the tangent space at the point and checks
that forms on A restrict to forms on the quotient.

Run it with ``python3 demos/point_of_a_finite_space.py``.
"""

from __future__ import annotations

from ncgeom.algebra import function_algebra, ideal_closure, matrix_algebra, quotient_algebra, tensor_product
from ncgeom.derivations import derivations, inner_derivations
from ncgeom.forms import FormAlgebra, QuotientFormMap, generate_omega, omega_C_subcomplex
from ncgeom.geometry import submanifold_check, tangent_space

#####################################################################
# The algebra and the point
# -------------------------
#
# Labels like ``p2⊗e11`` name the basis element "indicator of p2 times the
# matrix unit e11".  The ideal of the point p1 is generated by the
# indicators of the other two points.

A = tensor_product(function_algebra(3), matrix_algebra(2))
C = ideal_closure(A, [A.element("p2⊗e11"), A.element("p3⊗e11")])
print(f"dim A = {A.dim}, dim C = {C.dim}, dim A/C = {A.dim - C.dim}")

D = derivations(A)
print(f"Der(A) has dim {D.dim}; inner part {inner_derivations(A).dim}")

#####################################################################
# Submanifold test
# ----------------
#
# Derivations preserving C induce derivations of Q = A/C.  When every
# derivation of Q arises this way, the point is a submanifold.  Here
# Q = M(2) has only inner derivations, so the shortcut applies too.

rep = submanifold_check(A, C, with_seccohom=True)
print("verdict:", "YES" if rep.verdict else "NO")
for key, value in rep.dims.items():
    print(f"  {key:>9}: {value}")
print("inner-derivation shortcut:", rep.lemma_path)
print("H^1 dims:", rep.seccohom.dims, "additive:", rep.seccohom.additive)

#####################################################################
# Tangent space
# -------------
#
# The tangent space at the point is Der(A) modulo the derivations mapping
# everything into C.  A finite set has no "horizontal" directions, so only
# the three inner directions of M(2) survive.

T = tangent_space(A, C)
print("dim T_C =", T.dim)

#####################################################################
# Forms restrict to the point
# ---------------------------
#
# The map p from forms on A to forms on Q is onto, and its kernel is the
# space of forms that vanish at C.

fa = FormAlgebra(A, cap=2)
pm = QuotientFormMap(fa, quotient_algebra(A, C))
omega = generate_omega(fa)
kernel = omega_C_subcomplex(fa, C.space)
for n in range(3):
    image = pm.linear_image(n, omega[n])
    print(f"degree {n}: dim Ω = {omega[n].dim}, rank p = {image.rank}, dim kernel = {kernel[n].dim}")
