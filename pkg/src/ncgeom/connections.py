"""Connections on central bimodules and the constructions built from splittings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    Bimodule,
    FDAlgebra,
    Subalgebra,
    _restrict,
    restrict_bimodule,
    regular_bimodule,
    sub_bimodule,
)
from .derivations import (
    Derivation,
    DerivationSpace,
    InducedMap,
    ad,
    bracket,
    derivations,
    inner_derivations,
    killing_space,
    restriction_rho,
    stabilizer_space,
)
from .errors import (
    CurvatureObstruction,
    InvalidSplitting,
    NotEquivariant,
    NotLieClosed,
    PreconditionError,
    ensure,
)
from .exactlin import LinearMap, Subspace, identity, nullspace_rows, sparse, zeros

__all__ = [
    "Connection",
    "Splitting",
    "make_splitting",
    "synthesize_splitting",
    "splitting_from_complement",
    "connection_from_splitting",
    "splitting_curvature",
    "covariant_projection",
    "projection_to_splitting",
    "check_triplet",
    "triplet_connection",
    "associated_module",
    "associated_connection",
    "reduced_module",
    "canonical_connection",
    "ReducedModule",
    "AssociatedModule",
]


def _meq(a, b) -> bool:
    a, b = np.asarray(a, dtype=object), np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.ravel(), b.ravel()))


class Connection:
    """∇ on a central bimodule, given on a basis of a derivation space.

    ``nabla[k]`` is the matrix of ∇ along ``space.basis()[k]``; other
    derivations are handled by linearity.
    """

    def __init__(self, module: Bimodule, space: DerivationSpace, nabla: Sequence[np.ndarray], check: bool = True):
        self.module = module
        self.space = space
        self.nabla = [np.asarray(m, dtype=object) for m in nabla]
        if len(self.nabla) != space.dim:
            raise ValueError("one endomorphism per derivation basis element is required")
        if check:
            self.verify()

    @property
    def algebra(self) -> FDAlgebra:
        return self.space.parent

    def at(self, X: Derivation) -> np.ndarray:
        co = self.space.coordinates(X)
        n = self.module.dim
        out = zeros((n, n), self.algebra.field)
        for c, m in zip(co, self.nabla):
            if c:
                out = out + c * m
        return out

    def verify(self) -> None:
        """Leibniz on both sides and Z-linearity, on bases."""
        M = self.module
        K = self.algebra
        for X, N in zip(self.space.basis(), self.nabla):
            for i, e in enumerate(K.basis()):
                Xe = X(e)
                ensure(_meq(N.dot(M.left[i]) - M.left[i].dot(N), M.left_of(Xe)), "left Leibniz rule fails")
                ensure(_meq(N.dot(M.right[i]) - M.right[i].dot(N), M.right_of(Xe)), "right Leibniz rule fails")
        for z in K.center().dense_basis():
            Lz = M.left_of(z)
            for X, N in zip(self.space.basis(), self.nabla):
                zX = X.zmul(z)
                if self.space.contains(zX):
                    ensure(_meq(self.at(zX), Lz.dot(N)), "∇ is not Z-linear")

    def curvature(self, X: Derivation, Y: Derivation) -> np.ndarray:
        """R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]."""
        NX, NY = self.at(X), self.at(Y)
        return NX.dot(NY) - NY.dot(NX) - self.at(bracket(X, Y))

    def is_flat(self) -> bool:
        B = self.space.basis()
        return all(not any(self.curvature(X, Y).ravel()) for a, X in enumerate(B) for Y in B[a + 1:])


# splittings -----------------------------------------------------------------------


@dataclass(eq=False)
class Splitting:
    """ψ: Der(B) -> h, stored as the images of the Der(B) basis."""

    A: FDAlgebra
    B: Subalgebra
    h: DerivationSpace
    ghat: DerivationSpace
    der_B: DerivationSpace
    rho: InducedMap
    images: list

    def __call__(self, Y: Derivation) -> Derivation:
        co = self.der_B.coordinates(Y)
        out = zeros((self.A.dim, self.A.dim), self.A.field)
        for c, X in zip(co, self.images):
            if c:
                out = out + c * X.matrix
        return Derivation(self.A, out, check=False)


def _setup(A: FDAlgebra, B: Subalgebra, h=None, ghat=None):
    D = derivations(A)
    h = h or stabilizer_space(D, B.space)
    ghat = ghat or killing_space(D, B.space)
    rho = restriction_rho(h, B)
    return h, ghat, derivations(B.algebra), rho


def _rho_of(B: Subalgebra, X: Derivation) -> Derivation:
    inc = B.inclusion.array
    cols = [B.space.coordinates(X(inc[:, j])) for j in range(inc.shape[1])]
    return Derivation(B.algebra, np.array(cols, dtype=object).T, check=False)


def make_splitting(A: FDAlgebra, B: Subalgebra, images: Sequence[Derivation], h=None, ghat=None) -> Splitting:
    """Validate ψ given by images of the Der(B) basis."""
    h, ghat, der_B, rho = _setup(A, B, h, ghat)
    images = list(images)
    if len(images) != der_B.dim:
        raise InvalidSplitting("need one image per basis element of Der(B)")
    for Y, X in zip(der_B.basis(), images):
        if not h.contains(X):
            raise InvalidSplitting("an image does not lie in h")
        if not _rho_of(B, X) == Y:
            raise InvalidSplitting("ρ∘ψ is not the identity on Der(B)")
    psi = Splitting(A, B, h, ghat, der_B, rho, images)
    _check_zlinear(psi)
    return psi


def _check_zlinear(psi: Splitting) -> None:
    B = psi.B
    ZB = B.algebra.center()
    for zb in ZB.dense_basis():
        za = B.include(zb)
        for Y, X in zip(psi.der_B.basis(), psi.images):
            lhs = psi(Y.zmul(zb))
            rhs = X.zmul(za)
            if not lhs == rhs:
                raise InvalidSplitting(f"ψ is not Z(B)-linear (z = {B.algebra.format(zb)})")


def synthesize_splitting(A: FDAlgebra, B: Subalgebra, h=None, ghat=None) -> Splitting:
    """Solve the Z(B)-linear section equations for some ψ.

    Unknowns are ψ(Y_k) = L_k + Σ_j t_kj G_j with L_k any lift and G_j a basis
    of ĝ; Z(B)-linearity is linear in t.
    """
    h, ghat, der_B, rho = _setup(A, B, h, ghat)
    F = A.field
    d2 = A.dim ** 2
    lm = LinearMap([sparse(Y.coords()) for Y in rho.images], B.algebra.dim ** 2, F)
    lifts = []
    for Y in der_B.basis():
        t = lm.preimage(sparse(Y.coords()))
        if t is None:
            raise InvalidSplitting("ρ is not surjective; no section exists")
        lifts.append(h.combine(t))
    G = ghat.basis()
    r, g = len(lifts), len(G)
    ZB = B.algebra.center().dense_basis()
    # equations: ψ(z Y_k) − z ψ(Y_k) = 0
    columns: list[dict] = [dict() for _ in range(r * g)]
    const: dict = {}
    block = 0
    for zb in ZB:
        za = B.include(zb)
        for k, Y in enumerate(der_B.basis()):
            co = der_B.coordinates(Y.zmul(zb))
            c0 = zeros((A.dim, A.dim), F)
            for l, c in enumerate(co):
                if c:
                    c0 = c0 + c * lifts[l].matrix
            c0 = c0 - lifts[k].zmul(za).matrix
            base = block * d2
            for pos, v in sparse(c0.T.ravel()).items():
                const[base + pos] = v
            for l, c in enumerate(co):
                if c:
                    for j, Gj in enumerate(G):
                        for pos, v in sparse(Gj.coords()).items():
                            col = columns[l * g + j]
                            col[base + pos] = col.get(base + pos, 0) + c * v
            for j, Gj in enumerate(G):
                for pos, v in sparse(Gj.zmul(za).coords()).items():
                    col = columns[k * g + j]
                    col[base + pos] = col.get(base + pos, 0) - v
            block += 1
    if r and g and block:
        sol = LinearMap([{k: v for k, v in c.items() if v} for c in columns], block * d2, F).preimage(
            {k: -v for k, v in const.items()}
        )
        if sol is None:
            raise InvalidSplitting("no Z(B)-linear section exists for this pair")
    else:
        sol = [F.zero] * (r * g)
        if const:
            raise InvalidSplitting("no Z(B)-linear section exists for this pair")
    images = []
    for k in range(r):
        m = lifts[k].matrix
        for j in range(g):
            c = sol[k * g + j]
            if c:
                m = m + c * G[j].matrix
        images.append(Derivation(A, m, check=False))
    return make_splitting(A, B, images, h, ghat)


def splitting_from_complement(A: FDAlgebra, B: Subalgebra, lifts: Sequence[Derivation], h=None, ghat=None) -> Splitting:
    """ψ(Y) = the unique element of span(lifts) restricting to Y."""
    h, ghat, der_B, rho = _setup(A, B, h, ghat)
    F = A.field
    lm = LinearMap([sparse(_rho_of(B, X).coords()) for X in lifts], B.algebra.dim ** 2, F)
    if lm.rank != len(lifts) or lm.rank != der_B.dim:
        raise InvalidSplitting("the lifts do not restrict bijectively onto Der(B)")
    images = []
    for Y in der_B.basis():
        t = lm.preimage(sparse(Y.coords()))
        m = zeros((A.dim, A.dim), F)
        for c, X in zip(t, lifts):
            if c:
                m = m + c * X.matrix
        images.append(Derivation(A, m, check=False))
    return make_splitting(A, B, images, h, ghat)


def connection_from_splitting(psi: Splitting) -> Connection:
    """∇_Y a = ψ(Y) a on A viewed as a central bimodule over B."""
    M = restrict_bimodule(regular_bimodule(psi.A), psi.B)
    return Connection(M, psi.der_B, [X.matrix for X in psi.images])


def splitting_curvature(psi: Splitting, Y1: Derivation, Y2: Derivation) -> np.ndarray:
    """[ψ(X), ψ(Y)] − ψ([X,Y]) as an endomorphism of A."""
    return (bracket(psi(Y1), psi(Y2)) - psi(bracket(Y1, Y2))).matrix


def covariant_projection(psi: Splitting) -> np.ndarray:
    """Matrix of P = id − ψ∘ρ on h, in the canonical basis of h."""
    h = psi.h
    F = psi.A.field
    P = zeros((h.dim, h.dim), F)
    for k, X in enumerate(h.basis()):
        PX = X - psi(_rho_of(psi.B, X))
        P[:, k] = h.coordinates(PX)
    ensure(_meq(P.dot(P), P), "P is not idempotent")
    image = Subspace.span((h.space.combine(list(P[:, k])) for k in range(h.dim)), psi.A.dim ** 2, F)
    ensure(image == psi.ghat.space, "the image of P is not ĝ")
    return P


def projection_to_splitting(A: FDAlgebra, B: Subalgebra, P: np.ndarray, h=None, ghat=None) -> Splitting:
    """ψ(Y) = L − P(L) for any lift L ∈ h of Y."""
    h, ghat, der_B, rho = _setup(A, B, h, ghat)
    lm = LinearMap([sparse(Y.coords()) for Y in rho.images], B.algebra.dim ** 2, A.field)
    images = []
    for Y in der_B.basis():
        t = lm.preimage(sparse(Y.coords()))
        if t is None:
            raise InvalidSplitting("ρ is not surjective")
        tP = np.asarray(P, dtype=object).dot(np.array(t, dtype=object))
        diff = [a - b for a, b in zip(t, tP)]
        images.append(Derivation.from_coords(A, h.space.combine(diff)))
    return make_splitting(A, B, images, h, ghat)


# triplets and associated modules -------------------------------------------------


def check_triplet(psi: Splitting, g: Sequence[Derivation]) -> None:
    """[g, ψ(X)] = 0 for every X; raises NotEquivariant otherwise."""
    for Y in g:
        for k, X in enumerate(psi.images):
            if not bracket(Y, X).is_zero():
                raise NotEquivariant(f"[g, ψ(Y_{k})] ≠ 0")


def triplet_connection(A: FDAlgebra, B: Subalgebra, g: Sequence[Derivation], psi: Splitting) -> dict:
    """Validity report for (g, ψ) acting on A over B."""
    space = DerivationSpace.span(A, g, "g")
    if not space.is_lie_subalgebra():
        raise NotLieClosed("g is not closed under the bracket")
    check_triplet(psi, g)
    conn = connection_from_splitting(psi)
    flat = conn.is_flat()
    return {"g_dim": space.dim, "der_B_dim": len(psi.images), "equivariant": True, "flat": flat}


@dataclass(eq=False)
class AssociatedModule:
    space: Subspace  # inside A ⊗ V, index i*dim V + v
    module: Bimodule  # over B.algebra
    dim_V: int


def _span_coords(g: Sequence[Derivation], X: Derivation, F):
    lm = LinearMap([sparse(Y.coords()) for Y in g], len(X.coords()), F)
    return lm.preimage(sparse(X.coords()))


def associated_module(A: FDAlgebra, B: Subalgebra, g: Sequence[Derivation], eta: Sequence[np.ndarray]) -> AssociatedModule:
    """M_V = {Σ a_i⊗v^i : (Y a_i)⊗v^i + a_i⊗η(Y)v^i = 0 for Y ∈ g}."""
    F = A.field
    eta = [np.asarray(m, dtype=object) for m in eta]
    if len(eta) != len(g):
        raise PreconditionError("η needs one matrix per element of g")
    nV = eta[0].shape[0] if eta else 1
    # g must be Lie-closed and η a representation of it
    for a, Ya in enumerate(g):
        for b, Yb in enumerate(g):
            co = _span_coords(g, bracket(Ya, Yb), F)
            if co is None:
                raise NotLieClosed("g is not closed under the bracket")
            rhs = zeros((nV, nV), F)
            for c, m in zip(co, eta):
                if c:
                    rhs = rhs + c * m
            if not _meq(eta[a].dot(eta[b]) - eta[b].dot(eta[a]), rhs):
                raise PreconditionError("η is not a representation of g")
    IV = identity(nV, F)
    IA = identity(A.dim, F)
    rows = []
    for Y, m in zip(g, eta):
        op = np.kron(Y.matrix, IV) + np.kron(IA, m)
        rows.extend(sparse(r) for r in op)
    space = nullspace_rows(rows, A.dim * nV, F)
    inc = B.inclusion.array
    left, right = [], []
    for j in range(inc.shape[1]):
        b = inc[:, j]
        for mats, out in ((A.left_matrix(b), left), (A.right_matrix(b), right)):
            big = np.kron(mats, IV)
            for v in space.dense_basis():
                if not space.contains(big.dot(v)):
                    raise PreconditionError("M_V is not stable under B")
            out.append(_restrict(big, space))
    mod = Bimodule(B.algebra, space.dim, left, right, name="M_V")
    return AssociatedModule(space, mod, nV)


def associated_connection(psi: Splitting, MV: AssociatedModule, g: Sequence[Derivation] | None = None) -> Connection:
    """∇^V_X (a_i⊗v^i) = (ψ(X)a_i)⊗v^i, restricted to M_V."""
    if g is not None:
        check_triplet(psi, g)
    IV = identity(MV.dim_V, psi.A.field)
    mats = []
    for X in psi.images:
        big = np.kron(X.matrix, IV)
        for v in MV.space.dense_basis():
            if not MV.space.contains(big.dot(v)):
                raise NotEquivariant("∇^V does not preserve M_V")
        mats.append(_restrict(big, MV.space))
    return Connection(MV.module, psi.der_B, mats)


# reduction and the canonical connection ------------------------------------------


def canonical_connection(M: Bimodule) -> Connection:
    """∇_{ad a} m = am − ma, available when every derivation is inner."""
    A = M.algebra
    D, I = derivations(A), inner_derivations(A)
    if D != I:
        raise PreconditionError("the canonical connection needs Der(A) = Int(A)")
    if not _central(M):
        raise PreconditionError("module is not central")
    lm = LinearMap([sparse(ad(A, e).coords()) for e in A.basis()], A.dim ** 2, A.field)
    mats = []
    for X in D.basis():
        a = lm.preimage(sparse(X.coords()))
        mats.append(M.left_of(a) - M.right_of(a))
    return Connection(M, D, mats)


def _central(M: Bimodule) -> bool:
    from .algebra import is_central

    return is_central(M)


@dataclass(eq=False)
class ReducedModule:
    space: Subspace  # M^ĝ inside M
    module: Bimodule  # over B.algebra
    connection: Connection  # ∇̃ over Der(B)
    lifts: list


def reduced_module(nabla: Connection, B: Subalgebra, h=None, ghat=None) -> ReducedModule:
    """M^ĝ with the transported connection ∇̃_{X̃} m = ∇_X m."""
    A = nabla.algebra
    F = A.field
    h, ghat, der_B, rho = _setup(A, B, h, ghat)
    G = ghat.basis()
    for X in G:
        for Y in nabla.space.basis():
            if any(nabla.curvature(X, Y).ravel()):
                raise CurvatureObstruction("curvature does not vanish with an argument in ĝ")
    n = nabla.module.dim
    rows = []
    for X in G:
        rows.extend(sparse(r) for r in nabla.at(X))
    space = nullspace_rows(rows, n, F)
    lm = LinearMap([sparse(Y.coords()) for Y in rho.images], B.algebra.dim ** 2, F)
    lifts, mats = [], []
    for Y in der_B.basis():
        t = lm.preimage(sparse(Y.coords()))
        ensure(t is not None, "ρ is not surjective onto Der(B)")
        L = Derivation.from_coords(A, h.space.combine(t))
        N = nabla.at(L)
        # a second representative must act identically on M^ĝ
        L2 = L
        for X in G:
            L2 = L2 + X
        N2 = nabla.at(L2)
        for v in space.dense_basis():
            ensure(space.contains(N.dot(v)), "∇ does not preserve M^ĝ")
            ensure(_meq(N.dot(v), N2.dot(v)), "∇̃ depends on the representative")
        lifts.append(L)
        mats.append(_restrict(N, space))
    MB = restrict_bimodule(nabla.module, B)
    sub = sub_bimodule(MB, space)
    conn = Connection(sub, der_B, mats)
    # R̃(X̃,Ỹ) = R(X,Y) on M^ĝ
    basis = der_B.basis()
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            Rt = conn.curvature(basis[a], basis[b])
            R = _restrict(nabla.curvature(lifts[a], lifts[b]), space)
            ensure(_meq(Rt, R), "curvature of the reduced connection differs")
    return ReducedModule(space, sub, conn, lifts)
