r"""
Clock and shift: a finite shadow of the quantum torus
=====================================================

Two generators x, y with xy = q yx and x^n = y^n = 1, where q is a
primitive n-th root of unity.  Rewriting with the rules xy -> q yx,
x^n -> 1 and y^n -> 1 produces normal forms y^a x^b, and the quotient is a
full matrix algebra.  For contrast, the Heisenberg relation xy - yx = i has
no finite quotient at all.

Run it with ``python3 demos/clock_and_shift.py``.
"""

from __future__ import annotations

from ncgeom.derivations import derivations, out
from ncgeom.errors import QuotientNotFinite
from ncgeom.exactlin import Subspace
from ncgeom.freealg import (
    FreeDerivation,
    NCPoly,
    clock_shift_matrices,
    clock_shift_presentation,
    commutator,
    confluence_check,
    derivation_preserves_ideal,
    finite_quotient,
    heisenberg_presentation,
    ideal_member,
    nf,
    word_representation,
)
from ncgeom.geometry import presented_submanifold_check

#####################################################################
# Rewriting and confluence
# ------------------------

for n in (2, 3):
    P = clock_shift_presentation(n)
    R = P.rewrite_system()
    report = confluence_check(R)
    print(f"n = {n}: {report.checked} ambiguities checked, all resolved: {report.established}")
    print("   nf(x*y*x*y) =", nf(P.poly("x*y*x*y"), R).format())

    #################################################################
    # The finite quotient is M(n)
    # ---------------------------
    #
    # It is central simple of dimension n^2, so every derivation is inner.

    fq = finite_quotient(R)
    Q = fq.algebra
    print(f"   dim {Q.dim}, center {Q.center().dim}, Der {derivations(Q).dim}, Out {out(Q)[0]}")

    # the clock and shift matrices satisfy the relations, and the n^2 word
    # matrices are independent, so the representation is faithful
    U, V = clock_shift_matrices(n, P.field)
    q = P.field.zeta()
    mats = word_representation(fq.words, {"x": U, "y": V}, P.field)
    rank = Subspace.span([list(m.ravel()) for m in mats], n * n, P.field).dim
    print(f"   UV = qVU: {bool((U.dot(V) == V.dot(U) * q).all())}, rank of word matrices: {rank}")

    rep = presented_submanifold_check(P)
    print("   submanifold:", "YES" if rep.verdict else "NO", "via inner derivations:", rep.lemma_path)

#####################################################################
# Heisenberg: lifted derivations without a finite quotient
# --------------------------------------------------------
#
# For any word w the commutator [[x, y], w] is in the ideal, and the
# derivation x -> [w, x], y -> [w, y] preserves it.

H = heisenberg_presentation()
R = H.rewrite_system()
x, y = H.gen("x"), H.gen("y")
for w in (("x",), ("y",), ("x", "y"), ("y", "x", "x"), ("y", "y", "x")):
    W = NCPoly.word(H.field, w)
    member = ideal_member(commutator(commutator(x, y), W), R)
    D = FreeDerivation({"x": commutator(W, x), "y": commutator(W, y)})
    print(f"w = {'*'.join(w):7} [[x,y],w] in ideal: {member}, lift preserves ideal: {derivation_preserves_ideal(D, H.relations, R)}")

try:
    finite_quotient(R, word_cap=200)
except QuotientNotFinite as exc:
    print("Heisenberg quotient:", exc)
