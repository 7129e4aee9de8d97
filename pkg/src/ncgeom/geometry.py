"""Submanifold and quotient-manifold predicates with diagnostic reports."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import (
    FDAlgebra,
    Ideal,
    QuotientAlgebra,
    Subalgebra,
    is_simple,
    quotient_algebra,
    quotient_coordinates,
    regular_bimodule,
    sub_bimodule,
)
from .derivations import (
    Derivation,
    DerivationSpace,
    ad,
    derivations,
    induced_map_pi,
    inner_derivations,
    is_ideal_in,
    killing_space,
    mapping_into,
    preserving_space,
    restriction_rho,
    stabilizer_space,
    zmodule_span,
)
from .connections import *  # noqa: F401,F403 - the connection layer is part of this module's surface
from .connections import __all__ as _conn_all
from .errors import NotLieClosed, NotMaximal, PredicateNotVerified, ensure
from .exactlin import Subspace, nullspace_rows, sparse
from .hochschild import cohomology, constrained
from .freealg import (
    FreeDerivation,
    NCPoly,
    Presentation,
    commutator,
    confluence_check,
    derivation_preserves_ideal,
    finite_quotient,
)

__all__ = [
    "SubmanifoldReport",
    "SeccohomReport",
    "QuotientManifoldReport",
    "TangentSpace",
    "ActionReport",
    "PresentedSubmanifoldReport",
    "submanifold_check",
    "seccohom_check",
    "tangent_space",
    "quotient_manifold_check",
    "action_operation",
    "basic_algebra",
    "presented_submanifold_check",
] + list(_conn_all)


def _basis_strings(A: FDAlgebra, space: Subspace) -> list[str]:
    return [A.format(v) for v in space.dense_basis()]


@dataclass
class SubmanifoldReport:
    verdict: bool
    dims: dict
    exactness: dict
    lemma_path: bool
    quotient: QuotientAlgebra | None = dc_field(default=None, repr=False)
    pi: object = dc_field(default=None, repr=False)
    G_C: DerivationSpace | None = dc_field(default=None, repr=False)
    G_A: DerivationSpace | None = dc_field(default=None, repr=False)
    seccohom: SeccohomReport | None = None

    def to_dict(self) -> dict:
        out = {
            "predicate": "submanifold",
            "verdict": self.verdict,
            "dims": dict(self.dims),
            "exactness": dict(self.exactness),
            "lemma_path": self.lemma_path,
            "quotient_labels": list(self.quotient.q.labels) if self.quotient else [],
            "ideal_basis": _basis_strings(self.quotient.parent, self.quotient.ideal.space) if self.quotient else [],
        }
        if self.seccohom is not None:
            out["seccohom"] = self.seccohom.to_dict()
        return out


def submanifold_check(A: FDAlgebra, C: Ideal, with_seccohom: bool = False) -> SubmanifoldReport:
    """Is A/C a submanifold algebra of A (π: G_C -> Der(Q) surjective)?

    With ``with_seccohom`` a YES verdict also runs :func:`seccohom_check`.
    """
    Q = quotient_algebra(A, C)
    D = derivations(A)
    G_C = preserving_space(D, C.space)
    G_A = mapping_into(G_C, C.space)
    ensure(is_ideal_in(G_A, G_C), "G_A is not an ideal of G_C")
    pi = induced_map_pi(G_C, Q)
    DQ, IQ = derivations(Q.q), inner_derivations(Q.q)
    verdict = pi.is_surjective()
    lemma = DQ == IQ
    if lemma:
        ensure(verdict, "Der(Q) = Int(Q) but π is not surjective")
        ensure(IQ <= pi.image, "inner derivations of Q are not reached")
    dims = {
        "der_A": D.dim,
        "G_C": G_C.dim,
        "G_A": G_A.dim,
        "der_Q": DQ.dim,
        "int_Q": IQ.dim,
        "image_pi": pi.rank,
    }
    exactness = {
        "kernel_equals_G_A": pi.kernel == G_A,
        "rank_nullity": G_C.dim == G_A.dim + pi.rank,
        "surjective": verdict,
    }
    ensure(exactness["rank_nullity"], "dim G_C != dim G_A + rank π")
    report = SubmanifoldReport(verdict, dims, exactness, lemma, Q, pi, G_C, G_A)
    if with_seccohom and verdict:
        report.seccohom = seccohom_check(A, C, report)
    return report


@dataclass
class SeccohomReport:
    hypothesis: bool
    dims: dict
    additive: bool | None

    def to_dict(self) -> dict:
        return {"hypothesis": self.hypothesis, "dims": dict(self.dims), "additive": self.additive}


def seccohom_check(A: FDAlgebra, C: Ideal, report: SubmanifoldReport | None = None) -> SeccohomReport:
    """Test ker π ∩ Int(A) = ad(C) and, if so, additivity of the H¹ dimensions."""
    report = report or submanifold_check(A, C)
    if not report.verdict:
        raise PredicateNotVerified("the submanifold predicate fails; the sequence is not available")
    F = A.field
    # ad(C) = {ad(a) : [a, A] ⊆ C}
    rows = []
    proj, _, _ = quotient_coordinates(C.space, A.dim, F)
    for e in A.basis():
        # a -> [a, e] mod C, linear in a
        rows.extend(sparse(r) for r in proj.dot(A.right_matrix(e) - A.left_matrix(e)))
    elems = nullspace_rows(rows, A.dim, F)
    adC = DerivationSpace.span(A, (ad(A, a) for a in elems.dense_basis()), "ad(C)")
    ker_int = report.G_A & inner_derivations(A)
    hyp = ker_int == adC
    dims = {"ker_pi_cap_int": ker_int.dim, "ad_C": adC.dim}
    additive = None
    if hyp:
        MC = sub_bimodule(regular_bimodule(A), C.space)
        h_AC = cohomology(A, MC, 1).dim
        h_C = cohomology(A, n=1, variant=constrained(A, C)).dim
        h_Q = cohomology(report.quotient.q, n=1).dim
        dims.update({"H1_A_C": h_AC, "H1_C_A_A": h_C, "H1_Q_Q": h_Q})
        additive = h_C == h_AC + h_Q
    return SeccohomReport(hyp, dims, additive)


@dataclass
class TangentSpace:
    """T_C = Der(A)/G_A with canonical coset representatives."""

    A: FDAlgebra
    C: Ideal
    quotient: QuotientAlgebra
    G_A: DerivationSpace
    representatives: Subspace

    @property
    def dim(self) -> int:
        return self.representatives.dim

    def value(self, X: Derivation) -> list:
        """Coordinates of X_C in the representative basis."""
        if not derivations(self.A).contains(X):
            raise PredicateNotVerified("X is not a derivation of A")
        return self.representatives.coordinates(self.G_A.space.reduce(X.coords()))

    def form_value(self, alpha, X: Derivation) -> np.ndarray:
        """α_C(X_C) = p(α(X)); independent of the representative of X_C."""
        for Y in self.G_A.basis():
            ensure(not any(self.quotient.project(alpha(Y))), "α is not well defined at C")
        return self.quotient.project(alpha(X))


def tangent_space(A: FDAlgebra, C: Ideal) -> TangentSpace:
    """Tangent space at a maximal ideal (A/C must be simple)."""
    Q = quotient_algebra(A, C)
    if not is_simple(Q.q):
        raise NotMaximal("the quotient is not simple, so C is not maximal")
    D = derivations(A)
    G_A = mapping_into(D, C.space)
    reps = D.space.complement_reps(G_A.space)
    return TangentSpace(A, C, Q, G_A, reps)


@dataclass
class QuotientManifoldReport:
    conditions: dict
    dims: dict
    mode: str
    relaxed_der_B_dim: int | None = None
    ghat: DerivationSpace | None = dc_field(default=None, repr=False)
    h: DerivationSpace | None = dc_field(default=None, repr=False)

    @property
    def verdict(self) -> bool:
        if self.mode == "relaxed":
            return self.conditions["i"] and self.conditions["iii"]
        return all(self.conditions.values())

    @property
    def failing(self) -> list[str]:
        return [k for k, v in self.conditions.items() if not v]

    def to_dict(self) -> dict:
        out = {
            "predicate": "quotient-manifold",
            "mode": self.mode,
            "verdict": self.verdict,
            "conditions": dict(self.conditions),
            "dims": dict(self.dims),
        }
        if self.mode == "relaxed":
            out["induced_der_B_dim"] = self.relaxed_der_B_dim
        return out


def basic_algebra(A: FDAlgebra, g: Sequence[Derivation]) -> Subspace:
    """{a : X a = 0 for all X in g}."""
    rows = []
    for X in g:
        rows.extend(sparse(r) for r in X.matrix)
    return nullspace_rows(rows, A.dim, A.field)


def quotient_manifold_check(A: FDAlgebra, B: Subalgebra, mode: str = "strict") -> QuotientManifoldReport:
    """Decide conditions (i)-(iii); relaxed mode reads Der(B) as h/ĝ."""
    if mode not in ("strict", "relaxed"):
        raise ValueError("mode must be 'strict' or 'relaxed'")
    F = A.field
    D = derivations(A)
    ghat = killing_space(D, B.space)
    h = stabilizer_space(D, B.space)
    ensure(is_ideal_in(ghat, h), "ĝ is not an ideal in h")
    ZB = Subspace.span((B.include(z) for z in B.algebra.center().dense_basis()), A.dim, F)
    cond_i = ZB == (B.space & A.center())
    rho = restriction_rho(h, B)
    der_B = derivations(B.algebra)
    cond_ii = rho.is_surjective()
    ensure(h.dim == ghat.dim + rho.rank, "dim h != dim ĝ + rank ρ")
    cond_iii = basic_algebra(A, ghat.basis()) == B.space
    dims = {"der_A": D.dim, "g_hat": ghat.dim, "h": h.dim, "der_B": der_B.dim, "rank_rho": rho.rank}
    conditions = {"i": cond_i, "ii": cond_ii, "iii": cond_iii}
    relaxed = h.dim - ghat.dim if mode == "relaxed" else None
    return QuotientManifoldReport(conditions, dims, mode, relaxed, ghat, h)


@dataclass
class ActionReport:
    basic: Subspace
    g_dim: int
    gz_dim: int
    ghat_dim: int
    contained: bool

    def to_dict(self) -> dict:
        return {
            "basic_dim": self.basic.dim,
            "g_dim": self.g_dim,
            "g_Z_dim": self.gz_dim,
            "g_hat_dim": self.ghat_dim,
            "g_in_g_hat": self.contained,
        }


def action_operation(g: Sequence[Derivation], A: FDAlgebra) -> ActionReport:
    """Basic algebra of a Lie algebra of derivations and the inclusion g ⊆ ĝ."""
    space = DerivationSpace.span(A, g, "g")
    if not space.is_lie_subalgebra():
        raise NotLieClosed("the given derivations do not span a Lie subalgebra")
    Bspace = basic_algebra(A, space.basis())
    gz = zmodule_span(space.basis(), A)
    ghat = killing_space(derivations(A), Bspace)
    contained = space <= ghat
    ensure(contained, "g is not contained in ĝ of its basic algebra")
    return ActionReport(Bspace, space.dim, gz.dim, ghat.dim, contained)


# presented algebras ---------------------------------------------------------------


@dataclass
class PresentedSubmanifoldReport:
    verdict: bool
    lemma_path: bool
    dims: dict
    confluence: dict
    lifts_preserve_ideal: bool
    lifts_project_correctly: bool

    def to_dict(self) -> dict:
        return {
            "predicate": "submanifold (presented)",
            "verdict": self.verdict,
            "lemma_path": self.lemma_path,
            "dims": dict(self.dims),
            "confluence": dict(self.confluence),
            "lifts_preserve_ideal": self.lifts_preserve_ideal,
            "lifts_project_correctly": self.lifts_project_correctly,
        }


def presented_submanifold_check(pres: Presentation, bound: int = 12) -> PresentedSubmanifoldReport:
    """Free algebra modulo a finite-codimension ideal C: the inner-derivation route.

    The free algebra is infinite dimensional, so π is not computed directly.
    When Der(Q) = Int(Q), every derivation of Q is ad(p(w)) for a word w, and
    ad(w) on the free algebra preserves C and projects to it.  Both facts are
    checked here by rewriting.
    """
    R = pres.rewrite_system()
    conf = confluence_check(R, bound)
    fq = finite_quotient(R, bound=bound, report=conf, name=pres.name)
    Q = fq.algebra
    DQ, IQ = derivations(Q), inner_derivations(Q)
    lemma = DQ == IQ
    F = pres.field
    preserve = True
    project = True
    if lemma:
        rels = R.relations()
        for w in fq.words:
            W = NCPoly.word(F, w)
            D = FreeDerivation({g: commutator(W, NCPoly.word(F, (g,))) for g in pres.generators})
            preserve = preserve and derivation_preserves_ideal(D, rels, R, bound, conf)
            # D on every basis word, reduced, agrees with ad(p(w)) on Q
            adw = ad(Q, Q.basis_vector(fq.index[w]))
            for u in fq.words:
                lhs = fq.vector(D(NCPoly.word(F, u)), R)
                rhs = adw(Q.basis_vector(fq.index[u]))
                project = project and all(a == b for a, b in zip(lhs, rhs))
    dims = {
        "dim_Q": Q.dim,
        "center_Q": Q.center().dim,
        "der_Q": DQ.dim,
        "int_Q": IQ.dim,
        "out_Q": DQ.dim - IQ.dim,
    }
    verdict = lemma and preserve and project
    return PresentedSubmanifoldReport(verdict, lemma, dims, conf.to_dict(), preserve, project)
