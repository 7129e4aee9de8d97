"""Hochschild cochains, the differential, and the variant subcomplexes.

A degree-n cochain with values in a bimodule M of dimension m is a numpy
object tensor of shape ``(d,)*n + (m,)``; its flat coordinate vector is the
row-major ravel.  Variant complexes (relative, normalized relative,
constrained) are cut out of the full cochain space by linear constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product

import numpy as np

from .algebra import (
    Bimodule,
    FDAlgebra,
    Ideal,
    QuotientAlgebra,
    Subalgebra,
    annihilator_ideal,
    quotient_coordinates,
    quotient_pair_bimodule,
    regular_bimodule,
)
from .errors import CapExceeded, ConstraintViolation, InvariantBreach, PreconditionError, ensure
from .exactlin import LinearMap, Subspace, nullspace_rows, sparse, zeros

__all__ = [
    "Cochain",
    "ComplexVariant",
    "CohomologyResult",
    "delta",
    "delta_sparse",
    "ordinary",
    "relative",
    "normalized_relative",
    "constrained",
    "cohomology",
    "chi_map",
    "chi_setup",
    "chi_square_holds",
    "cocycles",
    "coboundaries",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 3


@dataclass(eq=False)
class Cochain:
    algebra: FDAlgebra
    module: Bimodule
    tensor: np.ndarray

    @property
    def degree(self) -> int:
        return self.tensor.ndim - 1

    @classmethod
    def from_coords(cls, A: FDAlgebra, M: Bimodule, n: int, coords) -> Cochain:
        shape = (A.dim,) * n + (M.dim,)
        if isinstance(coords, dict):
            flat = zeros(int(np.prod(shape)), A.field)
            for k, v in coords.items():
                flat[k] = v
        else:
            flat = np.array(list(coords), dtype=object)
        return cls(A, M, flat.reshape(shape))

    def coords(self) -> np.ndarray:
        return self.tensor.ravel()

    def __call__(self, *args) -> np.ndarray:
        """Evaluate on algebra elements given as coordinate vectors."""
        t = self.tensor
        for a in args:
            t = np.tensordot(np.asarray(a, dtype=object), t, axes=([0], [0]))
        return t

    def is_zero(self) -> bool:
        return not any(self.tensor.ravel())


def _stack(mats) -> np.ndarray:
    return np.array([np.asarray(m, dtype=object) for m in mats], dtype=object)


def delta(f: Cochain) -> Cochain:
    """The Hochschild differential on a dense cochain."""
    A, M = f.algebra, f.module
    n = f.degree
    t = f.tensor
    L = _stack(M.left)  # (d, m, m): L[i, o, p]
    R = _stack(M.right)
    out = np.moveaxis(np.tensordot(L, t, axes=([2], [n])), 1, -1)
    if n:
        sc = A.structure_constants()
        for k in range(1, n + 1):
            term = np.tensordot(sc, t, axes=([2], [k - 1]))
            term = np.moveaxis(term, [0, 1], [k - 1, k])
            out = out + term if k % 2 == 0 else out - term
    last = np.tensordot(t, R, axes=([n], [2]))
    out = out - last if n % 2 == 0 else out + last
    return Cochain(A, M, out)


class _SparseDelta:
    """δ on elementary cochains, cached per (algebra, module, degree)."""

    def __init__(self, A: FDAlgebra, M: Bimodule, n: int):
        self.A, self.M, self.n = A, M, n
        d, m = A.dim, M.dim
        self.lcols = [[sparse(M.left[i][:, o]) for o in range(m)] for i in range(d)]
        self.rcols = [[sparse(M.right[i][:, o]) for o in range(m)] for i in range(d)]
        by_l: dict = {}
        for a, b, l, c in A.sc_entries:
            by_l.setdefault(l, []).append((a, b, c))
        self.by_l = by_l
        self._cache: dict = {}

    def _flat(self, idx, p) -> int:
        d = self.A.dim
        k = 0
        for i in idx:
            k = k * d + i
        return k * self.M.dim + p

    def elementary(self, col: int) -> dict:
        img = self._cache.get(col)
        if img is not None:
            return img
        d, m, n = self.A.dim, self.M.dim, self.n
        o = col % m
        J = []
        rest = col // m
        for _ in range(n):
            J.append(rest % d)
            rest //= d
        J = tuple(reversed(J))
        out: dict = {}

        def add(key, v):
            nv = out.get(key, 0) + v
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)

        for i in range(d):
            for p, v in self.lcols[i][o].items():
                add(self._flat((i,) + J, p), v)
        for k in range(1, n + 1):
            sign = 1 if k % 2 == 0 else -1
            for a, b, c in self.by_l.get(J[k - 1], ()):
                add(self._flat(J[: k - 1] + (a, b) + J[k:], o), sign * c)
        sign = -1 if n % 2 == 0 else 1
        for j in range(d):
            for p, v in self.rcols[j][o].items():
                add(self._flat(J + (j,), p), sign * v)
        self._cache[col] = out
        return out

    def apply(self, vec) -> dict:
        out: dict = {}
        for col, c in sparse(vec).items():
            for k, v in self.elementary(col).items():
                nv = out.get(k, 0) + c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out


def delta_sparse(A: FDAlgebra, M: Bimodule, n: int, vec) -> dict:
    """δ of a degree-n cochain given by sparse or dense flat coordinates."""
    return _sparse_delta(A, M, n).apply(vec)


def _sparse_delta(A, M, n) -> _SparseDelta:
    key = ("delta", id(M), n)
    cache = A._cache
    if key not in cache:
        cache[key] = _SparseDelta(A, M, n)
    return cache[key]


# variants ---------------------------------------------------------------------


def _flat_index(idx, p, d, m) -> int:
    k = 0
    for i in idx:
        k = k * d + i
    return k * m + p


@dataclass(eq=False)
class ComplexVariant:
    """A subcomplex of C(A;M) described by linear constraints."""

    kind: str
    algebra: FDAlgebra
    module: Bimodule
    S: Subalgebra | None = None
    C: Ideal | None = None
    N: Subspace | None = None
    _spaces: dict = dc_field(default_factory=dict, repr=False)

    def ambient_dim(self, n: int) -> int:
        return self.algebra.dim ** n * self.module.dim

    def space(self, n: int) -> Subspace:
        """C^n of this variant as a subspace of the full cochain space."""
        if n not in self._spaces:
            rows = list(self._constraints(n))
            self._spaces[n] = nullspace_rows(rows, self.ambient_dim(n), self.algebra.field)
        return self._spaces[n]

    def contains(self, f: Cochain) -> bool:
        return self.space(f.degree).contains(f.coords())

    def random_element(self, n: int, rng) -> Cochain:
        V = self.space(n)
        F = self.algebra.field
        coeffs = [F(int(rng.integers(-3, 4))) for _ in range(V.dim)]
        return Cochain.from_coords(self.algebra, self.module, n, V.combine(coeffs) if V.dim else {})

    # constraint systems ---------------------------------------------------

    def _constraints(self, n: int):
        if self.kind == "ordinary":
            return
        if self.kind in ("relative", "normalized_relative"):
            yield from self._relative_rows(n)
            if self.kind == "normalized_relative":
                yield from self._vanishing_rows(n, self.S.space.dense_basis(), None)
            return
        if self.kind == "constrained":
            if n and self.C.dim:
                yield from self._vanishing_rows(n, self.C.space.dense_basis(), self.N)
            return
        raise ValueError(f"unknown variant {self.kind!r}")

    def _relative_rows(self, n: int):
        A, M = self.algebra, self.module
        d, m = A.dim, M.dim
        for s in self.S.space.dense_basis():
            Ls, Rs = A.left_matrix(s), A.right_matrix(s)
            LMs, RMs = M.left_of(s), M.right_of(s)
            if n == 0:
                diff = LMs - RMs
                for p in range(m):
                    yield sparse(diff[p])
                continue
            for idx in product(range(d), repeat=n):
                # f(s a_1, ...) = s f(a_1, ...)
                for p in range(m):
                    row: dict = {}
                    for l in range(d):
                        _acc(row, _flat_index((l,) + idx[1:], p, d, m), Ls[l, idx[0]])
                    for q in range(m):
                        _acc(row, _flat_index(idx, q, d, m), -LMs[p, q])
                    if row:
                        yield row
                # f(..., a_n s) = f(..., a_n) s
                for p in range(m):
                    row = {}
                    for l in range(d):
                        _acc(row, _flat_index(idx[:-1] + (l,), p, d, m), Rs[l, idx[-1]])
                    for q in range(m):
                        _acc(row, _flat_index(idx, q, d, m), -RMs[p, q])
                    if row:
                        yield row
                # f(..., a_k s, a_{k+1}, ...) = f(..., a_k, s a_{k+1}, ...)
                for k in range(n - 1):
                    for p in range(m):
                        row = {}
                        for l in range(d):
                            _acc(row, _flat_index(idx[:k] + (l,) + idx[k + 1:], p, d, m), Rs[l, idx[k]])
                            _acc(row, _flat_index(idx[: k + 1] + (l,) + idx[k + 2:], p, d, m), -Ls[l, idx[k + 1]])
                        if row:
                            yield row

    def _vanishing_rows(self, n: int, vectors, target: Subspace | None):
        """f(..., v, ...) lands in ``target`` (or vanishes) for v in ``vectors``."""
        A, M = self.algebra, self.module
        d, m = A.dim, M.dim
        if target is None:
            proj = np.identity(m, dtype=object)
        else:
            proj = quotient_coordinates(target, m, A.field)[0]
        nq = proj.shape[0]
        for v in vectors:
            nz = [(l, c) for l, c in enumerate(v) if c]
            for k in range(n):
                for others in product(range(d), repeat=n - 1):
                    for q in range(nq):
                        row: dict = {}
                        for l, c in nz:
                            idx = others[:k] + (l,) + others[k:]
                            for p in range(m):
                                if proj[q, p]:
                                    _acc(row, _flat_index(idx, p, d, m), c * proj[q, p])
                        if row:
                            yield row


def _acc(row: dict, key: int, v) -> None:
    if not v:
        return
    nv = row.get(key, 0) + v
    if nv:
        row[key] = nv
    else:
        row.pop(key, None)


def ordinary(A: FDAlgebra, M: Bimodule | None = None) -> ComplexVariant:
    return ComplexVariant("ordinary", A, M or regular_bimodule(A))


def relative(A: FDAlgebra, S: Subalgebra, M: Bimodule | None = None) -> ComplexVariant:
    if S.parent is not A:
        raise PreconditionError("S must be a subalgebra of A")
    return ComplexVariant("relative", A, M or regular_bimodule(A), S=S)


def normalized_relative(A: FDAlgebra, S: Subalgebra, M: Bimodule | None = None) -> ComplexVariant:
    if S.parent is not A:
        raise PreconditionError("S must be a subalgebra of A")
    return ComplexVariant("normalized_relative", A, M or regular_bimodule(A), S=S)


def constrained(A: FDAlgebra, C: Ideal, M: Bimodule | None = None, N: Subspace | None = None) -> ComplexVariant:
    """C(A,C;M,N); N defaults to C inside the regular bimodule."""
    M = M or regular_bimodule(A)
    if N is None:
        if M.dim != A.dim:
            raise PreconditionError("N must be given for a non-regular module")
        N = C.space
    I_N = annihilator_ideal(M, N)
    if not C.space.is_subspace_of(I_N.space):
        raise ConstraintViolation("C is not contained in the ideal I_N")
    return ComplexVariant("constrained", A, M, C=C, N=N)


# cohomology ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CohomologyResult:
    degree: int
    dim: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: Subspace


def _delta_image(variant: ComplexVariant, n: int) -> LinearMap:
    A, M = variant.algebra, variant.module
    V = variant.space(n)
    sd = _sparse_delta(A, M, n)
    images = [sd.apply(v) for v in V.sparse_basis()]
    return LinearMap(images, variant.ambient_dim(n + 1), A.field)


def cocycles(variant: ComplexVariant, n: int) -> Subspace:
    V = variant.space(n)
    lm = _delta_image(variant, n)
    return Subspace.span((V.combine(t) for t in lm.kernel_vectors()), variant.ambient_dim(n), variant.algebra.field)


def coboundaries(variant: ComplexVariant, n: int) -> Subspace:
    if n == 0:
        return Subspace.zero(variant.ambient_dim(0), variant.algebra.field)
    return _delta_image(variant, n - 1).image()


def cohomology(
    A: FDAlgebra,
    M: Bimodule | None = None,
    n: int = 1,
    variant: ComplexVariant | None = None,
    cap: int = DEFAULT_CAP,
    check_stable: bool | None = None,
) -> CohomologyResult:
    """H^n of the variant complex (ordinary if none is given)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > cap:
        raise CapExceeded(f"degree {n} exceeds the configured cap {cap}")
    variant = variant or ordinary(A, M)
    Z = cocycles(variant, n)
    B = coboundaries(variant, n)
    if not B.is_subspace_of(Z):
        raise InvariantBreach("coboundaries are not cocycles")
    if check_stable is None:
        check_stable = variant.kind != "ordinary" and variant.ambient_dim(n + 1) <= 4096
    if check_stable:
        nxt = variant.space(n + 1)
        for v in variant.space(n).sparse_basis():
            ensure(nxt.contains(delta_sparse(A, variant.module, n, v)), "δ leaves the variant subcomplex")
    reps = Z.complement_reps(B)
    return CohomologyResult(n, Z.dim - B.dim, Z, B, reps)


# the χ comparison map ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChiData:
    quotient: QuotientAlgebra
    module: Bimodule  # M/N over A/C
    proj_N: np.ndarray
    section_N: np.ndarray


def chi_setup(variant: ComplexVariant, Q: QuotientAlgebra) -> ChiData:
    if variant.kind != "constrained":
        raise PreconditionError("χ is defined on the constrained complex")
    if Q.ideal.space != variant.C.space:
        raise PreconditionError("quotient does not match the constraining ideal")
    MN, proj, sec = quotient_pair_bimodule(variant.module, variant.N, Q)
    return ChiData(Q, MN, proj.array, sec.array)


def chi_map(f: Cochain, variant: ComplexVariant, Q: QuotientAlgebra, data: ChiData | None = None) -> Cochain:
    """χ(f)([a_1],...,[a_n]) = pr f(a_1,...,a_n), checked for well-definedness."""
    data = data or chi_setup(variant, Q)
    if not variant.contains(f):
        raise PreconditionError("cochain is not in the constrained complex")
    n = f.degree
    t = np.tensordot(f.tensor, data.proj_N, axes=([n], [1]))
    sec = Q.section.array
    for _ in range(n):
        t = np.tensordot(t, sec, axes=([0], [0]))
        # contracted axis moves to the end; rotate output axis back to last
    if n:
        t = np.moveaxis(t, 0, -1)
    out = Cochain(Q.q, data.module, t)
    # independence from representatives: shifting any argument by C changes nothing
    C_basis = variant.C.space.dense_basis()
    if n and C_basis:
        proj = data.proj_N
        for k in range(n):
            for c in C_basis:
                moved = np.moveaxis(f.tensor, k, 0)
                val = np.tensordot(c, moved, axes=([0], [0]))
                val = np.tensordot(val, proj, axes=([n - 1], [1]))
                ensure(not any(np.ravel(val)), "χ(f) depends on representatives")
    return out


def chi_square_holds(f: Cochain, variant: ComplexVariant, Q: QuotientAlgebra, data: ChiData | None = None) -> bool:
    """pr∘δ = δ̄∘pr on ``f``."""
    data = data or chi_setup(variant, Q)
    lhs = chi_map(delta(f), variant, Q, data)
    rhs = delta(chi_map(f, variant, Q, data))
    return all(x == y for x, y in zip(lhs.coords(), rhs.coords()))
