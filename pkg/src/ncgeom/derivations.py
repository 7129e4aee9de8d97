"""Derivations of structure-constant algebras.

A linear endomorphism X of A is stored as a d x d matrix acting on column
coordinates.  Flattened, its coordinate vector has entry ``X[o, i]`` at
position ``i*d + o``; the same layout is used for degree-1 Hochschild
cochains, so Z^1 and Der(A) live in one ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .algebra import FDAlgebra, QuotientAlgebra, Subalgebra, quotient_coordinates
from .errors import InvariantBreach, NotLieClosed, PreconditionError, ensure
from .exactlin import ExactMatrix, LinearMap, Subspace, nullspace_rows, sparse, zeros

__all__ = [
    "Derivation",
    "DerivationSpace",
    "derivations",
    "inner_derivations",
    "ad",
    "out",
    "bracket",
    "lie_closure_check",
    "derivations_mapping",
    "preserving_space",
    "mapping_into",
    "killing_space",
    "stabilizer_space",
    "zmodule_span",
    "induced_map_pi",
    "restriction_rho",
    "InducedMap",
]


class Derivation:
    """A derivation of ``parent`` (Leibniz is checked unless ``check=False``)."""

    __slots__ = ("parent", "matrix")

    def __init__(self, parent: FDAlgebra, matrix, check: bool = True):
        self.parent = parent
        self.matrix = np.asarray(matrix, dtype=object)
        if check and not satisfies_leibniz(parent, self.matrix):
            raise PreconditionError("matrix does not satisfy the Leibniz rule")

    @classmethod
    def from_coords(cls, parent: FDAlgebra, coords, check: bool = False) -> Derivation:
        d = parent.dim
        flat = np.array(list(coords), dtype=object) if not isinstance(coords, dict) else _dense(coords, d * d, parent)
        return cls(parent, flat.reshape(d, d).T.copy(), check=check)

    def coords(self) -> np.ndarray:
        return self.matrix.T.ravel()

    def __call__(self, a) -> np.ndarray:
        return self.matrix.dot(np.asarray(a, dtype=object))

    def __add__(self, other: Derivation) -> Derivation:
        return Derivation(self.parent, self.matrix + other.matrix, check=False)

    def __sub__(self, other: Derivation) -> Derivation:
        return Derivation(self.parent, self.matrix - other.matrix, check=False)

    def __neg__(self) -> Derivation:
        return Derivation(self.parent, -self.matrix, check=False)

    def scale(self, c) -> Derivation:
        return Derivation(self.parent, c * self.matrix, check=False)

    def zmul(self, z) -> Derivation:
        """(zX)(a) = z X(a) for central z."""
        return Derivation(self.parent, self.parent.left_matrix(z).dot(self.matrix), check=False)

    def is_zero(self) -> bool:
        return not any(self.matrix.ravel())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return all(x == y for x, y in zip(self.matrix.ravel(), other.matrix.ravel()))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Derivation({self.parent.name}, nnz={sum(1 for x in self.matrix.ravel() if x)})"


def _dense(vec, n, A) -> np.ndarray:
    out = zeros(n, A.field)
    for k, v in vec.items():
        out[k] = v
    return out


def satisfies_leibniz(A: FDAlgebra, M: np.ndarray) -> bool:
    d = A.dim
    cols = [M[:, i] for i in range(d)]
    for i, j in product(range(d), repeat=2):
        prod = A.product(i, j)
        lhs = zeros(d, A.field)
        for k, c in prod.items():
            lhs = lhs + c * cols[k]
        rhs = A.mul(cols[i], A.basis_vector(j)) + A.mul(A.basis_vector(i), cols[j])
        if any(x != y for x, y in zip(lhs, rhs)):
            return False
    return True


def bracket(X: Derivation, Y: Derivation) -> Derivation:
    if X.parent is not Y.parent:
        raise ValueError("derivations of different algebras")
    return Derivation(X.parent, X.matrix.dot(Y.matrix) - Y.matrix.dot(X.matrix), check=False)


class DerivationSpace:
    """A subspace of Der(A), canonical in the flattened endomorphism coordinates."""

    def __init__(self, parent: FDAlgebra, space: Subspace, name: str = ""):
        if space.ambient_dim != parent.dim ** 2:
            raise ValueError("derivation space has the wrong ambient dimension")
        self.parent = parent
        self.space = space
        self.name = name
        self._basis = None

    @classmethod
    def span(cls, parent: FDAlgebra, ders: Iterable[Derivation], name: str = "") -> DerivationSpace:
        vecs = [X.coords() for X in ders]
        return cls(parent, Subspace.span(vecs, parent.dim ** 2, parent.field), name)

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> list[Derivation]:
        if self._basis is None:
            self._basis = [Derivation.from_coords(self.parent, v) for v in self.space.dense_basis()]
        return self._basis

    def contains(self, X: Derivation) -> bool:
        return self.space.contains(X.coords())

    __contains__ = contains

    def coordinates(self, X: Derivation) -> list:
        return self.space.coordinates(X.coords())

    def combine(self, coeffs: Sequence) -> Derivation:
        return Derivation.from_coords(self.parent, self.space.combine(coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DerivationSpace):
            return NotImplemented
        return self.parent is other.parent and self.space == other.space

    __hash__ = None

    def __le__(self, other: DerivationSpace) -> bool:
        return self.space.is_subspace_of(other.space)

    def __add__(self, other: DerivationSpace) -> DerivationSpace:
        return DerivationSpace(self.parent, self.space + other.space)

    def __and__(self, other: DerivationSpace) -> DerivationSpace:
        return DerivationSpace(self.parent, self.space & other.space)

    def __repr__(self) -> str:
        return f"DerivationSpace({self.name or '?'}, dim={self.dim})"

    def is_lie_subalgebra(self) -> bool:
        B = self.basis()
        return all(self.contains(bracket(X, Y)) for a, X in enumerate(B) for Y in B[a + 1:])

    def is_zmodule(self) -> bool:
        Z = self.parent.center().dense_basis()
        return all(self.contains(X.zmul(z)) for X in self.basis() for z in Z)

    def bracket_constants(self) -> np.ndarray:
        """c[a, b, e] with [D_a, D_b] = sum_e c[a,b,e] D_e."""
        B = self.basis()
        r = len(B)
        out = zeros((r, r, r), self.parent.field)
        for a in range(r):
            for b in range(a + 1, r):
                co = self.coordinates(bracket(B[a], B[b]))
                for e, c in enumerate(co):
                    out[a, b, e] = c
                    out[b, a, e] = -c
        return out


def lie_closure_check(space: DerivationSpace) -> bool:
    return space.is_lie_subalgebra()


def _leibniz_rows(A: FDAlgebra) -> list[dict]:
    d = A.dim
    rows: dict = {}

    def add(key, col, c):
        r = rows.setdefault(key, {})
        v = r.get(col, 0) + c
        if v:
            r[col] = v
        else:
            r.pop(col, None)

    for i, j, l, c in A.sc_entries:
        for k in range(d):
            add((i, j, k), l * d + k, c)
    for o, j, k, c in A.sc_entries:
        for i in range(d):
            add((i, j, k), i * d + o, -c)
    for i, o, k, c in A.sc_entries:
        for j in range(d):
            add((i, j, k), j * d + o, -c)
    return [rows[key] for key in sorted(rows)]


def derivations(A: FDAlgebra) -> DerivationSpace:
    """Der(A): the nullspace of the Leibniz system."""
    if "der" not in A._cache:
        space = nullspace_rows(_leibniz_rows(A), A.dim ** 2, A.field)
        D = DerivationSpace(A, space, "Der")
        ensure(D.is_lie_subalgebra(), "Der(A) is not closed under the bracket")
        A._cache["der"] = D
    return A._cache["der"]


def ad(A: FDAlgebra, a) -> Derivation:
    return Derivation(A, A.left_matrix(a) - A.right_matrix(a), check=False)


def inner_derivations(A: FDAlgebra) -> DerivationSpace:
    if "int" not in A._cache:
        A._cache["int"] = DerivationSpace.span(A, (ad(A, e) for e in A.basis()), "Int")
    return A._cache["int"]


def out(A: FDAlgebra) -> tuple[int, list[Derivation]]:
    """dim Out(A) = dim Der/Int and canonical coset representatives."""
    D, I = derivations(A), inner_derivations(A)
    reps = D.space.complement_reps(I.space)
    return reps.dim, [Derivation.from_coords(A, v) for v in reps.dense_basis()]


def derivations_mapping(D: DerivationSpace, sources: Sequence, target: Subspace, name: str = "") -> DerivationSpace:
    """{X in D : X(s) in target for every s in sources}."""
    A = D.parent
    F = A.field
    proj, _, _ = quotient_coordinates(target, A.dim, F)
    images = []
    for X in D.basis():
        vec: dict = {}
        for si, s in enumerate(sources):
            img = proj.dot(X(s))
            base = si * proj.shape[0]
            for q, v in enumerate(img):
                if v:
                    vec[base + q] = v
        images.append(vec)
    lm = LinearMap(images, len(sources) * proj.shape[0], F)
    vecs = [D.space.combine(t) for t in lm.kernel_vectors()]
    return DerivationSpace(A, Subspace.span(vecs, A.dim ** 2, F), name)


def preserving_space(D: DerivationSpace, C: Subspace) -> DerivationSpace:
    """G_C = {X : X C ⊆ C}."""
    return derivations_mapping(D, C.dense_basis(), C, "G_C")


def mapping_into(D: DerivationSpace, C: Subspace) -> DerivationSpace:
    """G_A = {X : X A ⊆ C}."""
    return derivations_mapping(D, D.parent.basis(), C, "G_A")


def killing_space(D: DerivationSpace, B: Subspace) -> DerivationSpace:
    """ĝ = {X : X B = 0}."""
    zero = Subspace.zero(B.ambient_dim, B.field)
    return derivations_mapping(D, B.dense_basis(), zero, "g_hat")


def stabilizer_space(D: DerivationSpace, B: Subspace) -> DerivationSpace:
    """h = {X : X B ⊆ B}."""
    return derivations_mapping(D, B.dense_basis(), B, "h")


def is_ideal_in(small: DerivationSpace, big: DerivationSpace) -> bool:
    if not small <= big:
        return False
    return all(small.contains(bracket(X, Y)) for X in big.basis() for Y in small.basis())


def zmodule_span(ders: Iterable[Derivation], A: FDAlgebra) -> DerivationSpace:
    """Span of z X over a basis of Z(A) and the given X."""
    Z = A.center().dense_basis()
    vecs = [X.zmul(z) for X in ders for z in Z]
    return DerivationSpace.span(A, vecs, "Z(A)-span")


@dataclass(frozen=True, eq=False)
class InducedMap:
    """A linear map between derivation spaces, in their canonical bases.

    ``matrix[:, r]`` holds the target-basis coordinates of the image of the
    r-th source basis element.
    """

    source: DerivationSpace
    target: DerivationSpace
    matrix: ExactMatrix
    image: DerivationSpace
    kernel: DerivationSpace
    images: tuple  # Derivation per source basis element

    @property
    def rank(self) -> int:
        return self.image.dim

    def is_surjective(self) -> bool:
        return self.image.dim == self.target.dim


def _induced(source: DerivationSpace, target: DerivationSpace, push) -> InducedMap:
    A = source.parent
    F = A.field
    images = [push(X) for X in source.basis()]
    mat = zeros((target.dim, source.dim), F)
    for r, Y in enumerate(images):
        if not target.contains(Y):
            raise InvariantBreach("induced map leaves the target derivation space")
        mat[:, r] = target.coordinates(Y)
    lm = LinearMap([sparse(Y.coords()) for Y in images], target.parent.dim ** 2, F)
    image = DerivationSpace(target.parent, lm.image(), "image")
    kern = DerivationSpace(A, Subspace.span((source.space.combine(t) for t in lm.kernel_vectors()), A.dim ** 2, F), "kernel")
    return InducedMap(source, target, ExactMatrix(mat, F), image, kern, tuple(images))


def induced_map_pi(G_C: DerivationSpace, Q: QuotientAlgebra) -> InducedMap:
    """π: G_C -> Der(Q), π(X)p(a) = p(Xa), computed as proj ∘ X ∘ section."""
    A = G_C.parent
    C = Q.ideal.space
    proj, sec = Q.proj.array, Q.section.array
    for X in G_C.basis():
        for c in C.dense_basis():
            if any(proj.dot(X(c))):
                raise PreconditionError("a derivation in the source does not preserve C")

    def push(X: Derivation) -> Derivation:
        return Derivation(Q.q, proj.dot(X.matrix).dot(sec), check=False)

    pi = _induced(G_C, derivations(Q.q), push)
    ensure(pi.kernel == mapping_into(G_C, C), "ker π differs from G_A")
    for e in A.basis():
        X = ad(A, e)
        if G_C.contains(X):
            ensure(push(X) == ad(Q.q, Q.project(e)), "π(ad a) != ad(p a)")
    return pi


def restriction_rho(h: DerivationSpace, B: Subalgebra) -> InducedMap:
    """ρ: h -> Der(B), restriction of X to B."""
    inc = B.inclusion.array
    space = B.space

    def push(X: Derivation) -> Derivation:
        cols = []
        for j in range(inc.shape[1]):
            img = X(inc[:, j])
            if not space.contains(img):
                raise PreconditionError("a derivation in h does not map B into B")
            cols.append(space.coordinates(img))
        mat = np.array(cols, dtype=object).T if cols else zeros((0, 0), B.parent.field)
        return Derivation(B.algebra, mat, check=False)

    rho = _induced(h, derivations(B.algebra), push)
    ensure(rho.kernel == killing_space(h, space), "ker ρ differs from ĝ")
    return rho
