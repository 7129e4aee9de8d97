"""Finite-dimensional unital associative algebras given by structure constants.

An algebra of dimension d has basis e_0..e_{d-1} and products
``e_i e_j = sum_k c[i][j][k] e_k``.  Elements are dense numpy object vectors
of length d.  Everything is validated exactly at construction time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cyclotomic import CyclotomicField, field as _field
from .errors import (
    AssociativityViolation,
    NotSubBimodule,
    PreconditionError,
    UnitInIdeal,
    UnitViolation,
    ensure,
)
from .exactlin import ExactMatrix, LinearMap, Subspace, identity, inverse, nullspace_rows, sparse, zeros

__all__ = [
    "FDAlgebra",
    "Ideal",
    "QuotientAlgebra",
    "Subalgebra",
    "Bimodule",
    "change_basis",
    "change_field",
    "matrix_algebra",
    "function_algebra",
    "direct_sum",
    "tensor_product",
    "dual_numbers",
    "dual_number_extension",
    "cyclic_group_algebra",
    "validate_algebra",
    "center",
    "ideal_closure",
    "quotient_algebra",
    "subalgebra",
    "regular_bimodule",
    "is_central",
    "centralizer",
    "annihilator_ideal",
    "sub_bimodule",
    "quotient_bimodule",
    "restrict_bimodule",
    "is_simple",
]


class FDAlgebra:
    """Unital associative algebra over Q(zeta_m) in a fixed basis.

    ``products`` maps ``(i, j)`` to the sparse coordinates of ``e_i e_j``.
    Prefer :func:`validate_algebra` or the named constructors.
    """

    def __init__(
        self,
        F: CyclotomicField,
        labels: Sequence[str],
        unit,
        products: Mapping[tuple[int, int], Mapping[int, object]],
        name: str = "",
        check: bool = True,
    ):
        self.field = F
        self.labels = tuple(labels)
        self.dim = d = len(self.labels)
        self.name = name
        self.unit = np.array([F(x) for x in unit], dtype=object)
        if len(self.unit) != d:
            raise ValueError("unit has wrong length")
        table = [[{} for _ in range(d)] for _ in range(d)]
        entries = []
        for (i, j), prod in products.items():
            for k, c in prod.items():
                c = F(c)
                if c:
                    table[i][j][k] = c
                    entries.append((i, j, k, c))
        entries.sort(key=lambda e: e[:3])
        self._table = table
        self.sc_entries = tuple(entries)
        by_i = [[] for _ in range(d)]
        for i, j, k, c in entries:
            by_i[i].append((j, k, c))
        self._by_i = by_i
        self._cache: dict = {}
        if check:
            self._validate()

    def __repr__(self) -> str:
        return f"FDAlgebra({self.name or '?'}, dim={self.dim}, field=Q(zeta_{self.field.order}))"

    # elements -------------------------------------------------------------

    def zero(self) -> np.ndarray:
        return zeros(self.dim, self.field)

    def one(self) -> np.ndarray:
        return self.unit.copy()

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = self.field.one
        return v

    def basis(self) -> list[np.ndarray]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def element(self, expr: str) -> np.ndarray:
        """Parse ``"2*e11 - 1/2*e22 + e12"`` over the basis labels."""
        v = self.zero()
        text = expr.replace(" ", "")
        for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
            coef, _, label = term.rpartition("*")
            c = self.field.parse(coef) if coef else self.field.one
            if sign == "-":
                c = -c
            v[self.index(label)] += c
        return v

    def format(self, a) -> str:
        parts = []
        for c, lab in zip(a, self.labels):
            if not c:
                continue
            s = self.field.format(c)
            if s == "1":
                parts.append(lab)
            elif s == "-1":
                parts.append(f"-{lab}")
            elif " " in s:
                parts.append(f"({s})*{lab}")
            else:
                parts.append(f"{s}*{lab}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    # products -------------------------------------------------------------

    def product(self, i: int, j: int) -> dict:
        """Sparse coordinates of e_i e_j."""
        return self._table[i][j]

    def mul(self, a, b) -> np.ndarray:
        out = self.zero()
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, k, c in self._by_i[i]:
                bj = b[j]
                if bj:
                    out[k] += ai * bj * c
        return out

    def commutator(self, a, b) -> np.ndarray:
        return self.mul(a, b) - self.mul(b, a)

    def structure_constants(self) -> np.ndarray:
        sc = zeros((self.dim,) * 3, self.field)
        for i, j, k, c in self.sc_entries:
            sc[i, j, k] = c
        return sc

    def left_matrices(self) -> list[np.ndarray]:
        """L_i with L_i[k, j] = coefficient of e_k in e_i e_j."""
        if "L" not in self._cache:
            d = self.dim
            mats = [zeros((d, d), self.field) for _ in range(d)]
            for i, j, k, c in self.sc_entries:
                mats[i][k, j] += c
            self._cache["L"] = mats
        return self._cache["L"]

    def right_matrices(self) -> list[np.ndarray]:
        """R_j with R_j[k, i] = coefficient of e_k in e_i e_j."""
        if "R" not in self._cache:
            d = self.dim
            mats = [zeros((d, d), self.field) for _ in range(d)]
            for i, j, k, c in self.sc_entries:
                mats[j][k, i] += c
            self._cache["R"] = mats
        return self._cache["R"]

    def left_matrix(self, a) -> np.ndarray:
        return _combine(a, self.left_matrices(), self.dim, self.field)

    def right_matrix(self, a) -> np.ndarray:
        return _combine(a, self.right_matrices(), self.dim, self.field)

    def is_commutative(self) -> bool:
        return all(self._table[i][j] == self._table[j][i] for i in range(self.dim) for j in range(i))

    # validation -----------------------------------------------------------

    def _sparse_mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self._table[i][j].items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def _validate(self) -> None:
        d = self.dim
        basis = [{i: self.field.one} for i in range(d)]
        for i, j, k in product(range(d), repeat=3):
            lhs = self._sparse_mul(self._table[i][j], basis[k])
            rhs = self._sparse_mul(basis[i], self._table[j][k])
            if lhs != rhs:
                raise AssociativityViolation(
                    i, j, k, self.format(_dense(lhs, self)), self.format(_dense(rhs, self))
                )
        u = sparse(self.unit)
        for i in range(d):
            if self._sparse_mul(u, basis[i]) != basis[i] or self._sparse_mul(basis[i], u) != basis[i]:
                raise UnitViolation(f"unit {self.format(self.unit)} fails on basis element {self.labels[i]}")

    # structure ------------------------------------------------------------

    def center(self) -> Subspace:
        if "center" not in self._cache:
            rows = []
            d = self.dim
            for j in range(d):
                eqs: dict = {}
                for i in range(d):
                    for k, c in self._table[i][j].items():
                        eqs.setdefault(k, {})[i] = eqs.get(k, {}).get(i, 0) + c
                    for k, c in self._table[j][i].items():
                        eqs.setdefault(k, {})[i] = eqs.get(k, {}).get(i, 0) - c
                rows.extend(eqs.values())
            self._cache["center"] = nullspace_rows(rows, d, self.field)
        return self._cache["center"]

    def full_space(self) -> Subspace:
        return Subspace.full(self.dim, self.field)

    def span(self, vectors: Iterable) -> Subspace:
        return Subspace.span(vectors, self.dim, self.field)


def _dense(vec: Mapping, A: FDAlgebra) -> np.ndarray:
    out = A.zero()
    for k, v in vec.items():
        out[k] = v
    return out


def _combine(coeffs, mats, d, F) -> np.ndarray:
    out = zeros((d, d), F)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + c * m
    return out


def validate_algebra(sc, unit, labels=None, F: CyclotomicField | None = None, name: str = "") -> FDAlgebra:
    """Build an algebra from a dense ``sc[i][j][k]`` table, checking the axioms."""
    sc = np.asarray(sc, dtype=object)
    d = sc.shape[0]
    if sc.shape != (d, d, d):
        raise ValueError(f"structure constants must be d x d x d, got {sc.shape}")
    F = F or _field(1)
    products = {}
    for i, j in product(range(d), repeat=2):
        products[(i, j)] = {k: sc[i, j, k] for k in range(d) if sc[i, j, k]}
    labels = labels or [f"e{i}" for i in range(d)]
    return FDAlgebra(F, labels, unit, products, name=name)


def center(A: FDAlgebra) -> Subspace:
    return A.center()


# constructors ---------------------------------------------------------------


def matrix_algebra(n: int, F: CyclotomicField | None = None) -> FDAlgebra:
    """M(n) with matrix units e_ij in row-major order (labels ``e11``, ``e12``, ...)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    F = F or _field(1)
    sep = "" if n < 10 else "_"
    labels = [f"e{i + 1}{sep}{j + 1}" for i in range(n) for j in range(n)]
    products = {}
    for i, j, k in product(range(n), repeat=3):
        products[(i * n + j, j * n + k)] = {i * n + k: 1}
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return FDAlgebra(F, labels, unit, products, name=f"M({n})")


def function_algebra(k: int, F: CyclotomicField | None = None) -> FDAlgebra:
    """C^k: functions on k points, basis of point idempotents p1..pk."""
    if k < 1:
        raise ValueError("k must be >= 1")
    F = F or _field(1)
    products = {(i, i): {i: 1} for i in range(k)}
    return FDAlgebra(F, [f"p{i + 1}" for i in range(k)], [1] * k, products, name=f"C^{k}")


def change_field(A: FDAlgebra, F: CyclotomicField) -> FDAlgebra:
    """The same structure constants read in a larger cyclotomic field."""
    if A.field is F:
        return A
    if not (A.field.rational or F.order % A.field.order == 0):
        raise PreconditionError(f"Q(zeta_{A.field.order}) does not embed in Q(zeta_{F.order})")
    products: dict = {}
    for i, j, k, c in A.sc_entries:
        products.setdefault((i, j), {})[k] = F(c)
    return FDAlgebra(F, A.labels, [F(c) for c in A.unit], products, name=A.name, check=False)


def change_basis(A: FDAlgebra, P, name: str = "") -> FDAlgebra:
    """Isomorphic copy of A in the basis given by the columns of P."""
    F = A.field
    P = ExactMatrix(np.asarray(P, dtype=object), F)
    Pinv = inverse(P).array
    cols = [P.array[:, i] for i in range(A.dim)]
    products = {}
    for i, j in product(range(A.dim), repeat=2):
        c = Pinv.dot(A.mul(cols[i], cols[j]))
        products[(i, j)] = {k: v for k, v in enumerate(c) if v}
    unit = Pinv.dot(A.unit)
    labels = [f"f{i}" for i in range(A.dim)]
    return FDAlgebra(F, labels, unit, products, name=name or f"{A.name}'")


def _same_field(A: FDAlgebra, B: FDAlgebra) -> CyclotomicField:
    if A.field is not B.field:
        raise ValueError("algebras live over different fields; rebuild them over a common one")
    return A.field


def direct_sum(A: FDAlgebra, B: FDAlgebra) -> FDAlgebra:
    F = _same_field(A, B)
    if set(A.labels) & set(B.labels):
        labels = [f"{l}_1" for l in A.labels] + [f"{l}_2" for l in B.labels]
    else:
        labels = list(A.labels) + list(B.labels)
    products = {}
    dA = A.dim
    for i, j, k, c in A.sc_entries:
        products.setdefault((i, j), {})[k] = c
    for i, j, k, c in B.sc_entries:
        products.setdefault((i + dA, j + dA), {})[k + dA] = c
    unit = list(A.unit) + list(B.unit)
    return FDAlgebra(F, labels, unit, products, name=f"{A.name}+{B.name}")


def tensor_product(A: FDAlgebra, B: FDAlgebra) -> FDAlgebra:
    """A ⊗ B with basis a_i⊗b_j at index i*dim(B)+j (lexicographic)."""
    F = _same_field(A, B)
    dB = B.dim
    labels = [f"{a}⊗{b}" for a in A.labels for b in B.labels]
    products: dict = {}
    for i, k, l, c in A.sc_entries:
        for j, m, n, e in B.sc_entries:
            key = (i * dB + j, k * dB + m)
            slot = products.setdefault(key, {})
            idx = l * dB + n
            slot[idx] = slot.get(idx, 0) + c * e
    unit = [a * b for a in A.unit for b in B.unit]
    return FDAlgebra(F, labels, unit, products, name=f"{A.name}⊗{B.name}")


def dual_numbers(nilpotents: Sequence[str] = ("s", "t"), F: CyclotomicField | None = None) -> FDAlgebra:
    """Commutative C ⊕ V with V·V = 0; basis ``1`` then the nilpotent names."""
    F = F or _field(1)
    k = len(nilpotents)
    products = {(0, 0): {0: 1}}
    for i in range(1, k + 1):
        products[(0, i)] = {i: 1}
        products[(i, 0)] = {i: 1}
    name = "C[" + ",".join(nilpotents) + "]/(" + ",".join(nilpotents) + ")^2"
    return FDAlgebra(F, ["1", *nilpotents], [1] + [0] * k, products, name=name)


def dual_number_extension(base: FDAlgebra | None = None, nilpotents: Sequence[str] = ("s", "t")) -> FDAlgebra:
    """dual_numbers(nilpotents) ⊗ base."""
    F = base.field if base is not None else _field(1)
    D = dual_numbers(nilpotents, F)
    return D if base is None else tensor_product(D, base)


def cyclic_group_algebra(n: int, F: CyclotomicField | None = None) -> FDAlgebra:
    """Group algebra of Z/n with basis g^0..g^(n-1) and convolution product."""
    F = F or _field(1)
    products = {(i, j): {(i + j) % n: 1} for i in range(n) for j in range(n)}
    return FDAlgebra(F, [f"g{i}" for i in range(n)], [1] + [0] * (n - 1), products, name=f"C[Z/{n}]")


# ideals and quotients -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ideal:
    parent: FDAlgebra
    space: Subspace

    def __post_init__(self):
        A = self.parent
        for v in self.space.dense_basis():
            for b in A.basis():
                if not (self.space.contains(A.mul(b, v)) and self.space.contains(A.mul(v, b))):
                    raise PreconditionError("subspace is not a two-sided ideal")

    @property
    def dim(self) -> int:
        return self.space.dim

    def contains(self, a) -> bool:
        return self.space.contains(a)

    def is_proper(self) -> bool:
        return not self.space.contains(self.parent.unit)


def ideal_closure(A: FDAlgebra, generators: Iterable) -> Ideal:
    """Smallest two-sided ideal containing ``generators``."""
    space = A.span(generators)
    basis = A.basis()
    while True:
        new = []
        for v in space.dense_basis():
            for b in basis:
                new.append(A.mul(b, v))
                new.append(A.mul(v, b))
        grown = space + A.span(new)
        if grown == space:
            return Ideal(A, space)
        space = grown


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    """Q = A/C with projection p: A -> Q and the linear section e_f -> e_f."""

    parent: FDAlgebra
    ideal: Ideal
    q: FDAlgebra
    proj: ExactMatrix
    section: ExactMatrix
    free_columns: tuple[int, ...]

    def project(self, a) -> np.ndarray:
        return self.proj.array.dot(np.asarray(a, dtype=object))

    def lift(self, x) -> np.ndarray:
        return self.section.array.dot(np.asarray(x, dtype=object))


def quotient_coordinates(space: Subspace, n: int, F) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    """Coordinates modulo ``space`` on the non-pivot columns, plus the section."""
    piv = set(space.pivots)
    free = tuple(c for c in range(n) if c not in piv)
    pos = {c: i for i, c in enumerate(free)}
    proj = zeros((len(free), n), F)
    for c in free:
        proj[pos[c], c] = F.one
    for p, row in zip(space.pivots, space.sparse_basis()):
        for c, v in row.items():
            if c != p:
                proj[pos[c], p] = -v
    section = zeros((n, len(free)), F)
    for c in free:
        section[c, pos[c]] = F.one
    return proj, section, free


def quotient_algebra(A: FDAlgebra, C: Ideal) -> QuotientAlgebra:
    if not C.is_proper():
        raise UnitInIdeal("the ideal contains the unit; the quotient would be zero")
    F = A.field
    proj, section, free = quotient_coordinates(C.space, A.dim, F)
    dq = len(free)
    products = {}
    for a, b in product(range(dq), repeat=2):
        prod = A.product(free[a], free[b])
        img = zeros(dq, F)
        for k, c in prod.items():
            img = img + c * proj[:, k]
        products[(a, b)] = sparse(img)
    Q = FDAlgebra(F, [A.labels[c] for c in free], proj.dot(A.unit), products, name=f"{A.name}/C")
    qa = QuotientAlgebra(A, C, Q, ExactMatrix(proj, F), ExactMatrix(section, F), free)
    for i, j in product(range(A.dim), repeat=2):
        lhs = qa.project(A.mul(A.basis_vector(i), A.basis_vector(j)))
        rhs = Q.mul(qa.project(A.basis_vector(i)), qa.project(A.basis_vector(j)))
        ensure(all(x == y for x, y in zip(lhs, rhs)), "quotient projection is not multiplicative")
    return qa


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """A unital subalgebra B ⊆ A, realised as an algebra in its RREF basis."""

    parent: FDAlgebra
    space: Subspace
    algebra: FDAlgebra
    inclusion: ExactMatrix  # dim A x dim B

    def include(self, b) -> np.ndarray:
        return self.inclusion.array.dot(np.asarray(b, dtype=object))

    def coords(self, a) -> np.ndarray:
        return np.array(self.space.coordinates(a), dtype=object)


def subalgebra(A: FDAlgebra, vectors: Iterable, name: str = "") -> Subalgebra:
    """Check that ``vectors`` span a unital subalgebra and build it."""
    space = A.span(vectors)
    F = A.field
    if not space.contains(A.unit):
        raise PreconditionError("subalgebra does not contain the unit")
    basis = space.dense_basis()
    labels = []
    for v in basis:
        labels.append(A.format(v))
    products = {}
    for a, b in product(range(len(basis)), repeat=2):
        prod = A.mul(basis[a], basis[b])
        if not space.contains(prod):
            raise PreconditionError("subspace is not closed under multiplication")
        products[(a, b)] = dict(enumerate(space.coordinates(prod)))
    B = FDAlgebra(F, labels, space.coordinates(A.unit), products, name=name or f"B⊂{A.name}")
    inc = zeros((A.dim, len(basis)), F)
    for j, v in enumerate(basis):
        inc[:, j] = v
    return Subalgebra(A, space, B, ExactMatrix(inc, F))


def is_simple(A: FDAlgebra) -> bool:
    """Whether A ⊗ C is a simple algebra.

    In characteristic 0 the Jacobson radical is the radical of the trace
    form (a, b) -> tr(L_{ab}); A ⊗ C is simple iff that form is
    nondegenerate and the center is one-dimensional.
    """
    if A.center().dim != 1:
        return False
    d = A.dim
    L = A.left_matrices()
    traces = [sum(L[k][i, i] for i in range(d)) for k in range(d)]
    gram = zeros((d, d), A.field)
    for i, j, k, c in A.sc_entries:
        gram[i, j] += c * traces[k]
    return ExactMatrix(gram, A.field).rank() == d


# bimodules -----------------------------------------------------------------


@dataclass(eq=False)
class Bimodule:
    """An A-bimodule of finite dimension with explicit action matrices.

    ``left[i]`` is the matrix of m -> e_i m and ``right[i]`` that of
    m -> m e_i, acting on column coordinate vectors.
    """

    algebra: FDAlgebra
    dim: int
    left: list
    right: list
    labels: tuple = ()
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        A = self.algebra
        F = A.field
        n = self.dim
        if not self.labels:
            self.labels = tuple(f"m{i}" for i in range(n))
        ident = identity(n, F)
        if not _eq(_combine(A.unit, self.left, n, F), ident) or not _eq(_combine(A.unit, self.right, n, F), ident):
            raise PreconditionError("unit does not act as the identity")
        for i, j in product(range(A.dim), repeat=2):
            prod = A.product(i, j)
            lij = _combine_sparse(prod, self.left, n, F)
            rij = _combine_sparse(prod, self.right, n, F)
            if not _eq(lij, self.left[i].dot(self.left[j]) if n else lij):
                raise PreconditionError("left action is not a representation")
            if not _eq(rij, self.right[j].dot(self.right[i]) if n else rij):
                raise PreconditionError("right action is not an anti-representation")
            if n and not _eq(self.left[i].dot(self.right[j]), self.right[j].dot(self.left[i])):
                raise PreconditionError("left and right actions do not commute")

    def left_of(self, a) -> np.ndarray:
        return _combine(a, self.left, self.dim, self.algebra.field)

    def right_of(self, a) -> np.ndarray:
        return _combine(a, self.right, self.dim, self.algebra.field)

    def space(self) -> Subspace:
        return Subspace.full(self.dim, self.algebra.field)


def _eq(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.ravel(), b.ravel()))


def _combine_sparse(coeffs: Mapping, mats, n, F) -> np.ndarray:
    out = zeros((n, n), F)
    for k, c in coeffs.items():
        out = out + c * mats[k]
    return out


def regular_bimodule(A: FDAlgebra) -> Bimodule:
    return Bimodule(A, A.dim, list(A.left_matrices()), list(A.right_matrices()), A.labels, f"{A.name} (regular)")


def is_central(M: Bimodule) -> bool:
    """zm = mz for every z in the center of the algebra."""
    return all(_eq(M.left_of(z), M.right_of(z)) for z in M.algebra.center().dense_basis())


def centralizer(M: Bimodule, S: Subspace | None = None) -> Subspace:
    """M^S = {m : sm = ms for s in S}; S defaults to the whole algebra."""
    A = M.algebra
    gens = S.dense_basis() if S is not None else A.basis()
    rows = []
    for s in gens:
        diff = M.left_of(s) - M.right_of(s)
        rows.extend(sparse(r) for r in diff)
    return nullspace_rows(rows, M.dim, A.field)


def annihilator_ideal(M: Bimodule, N: Subspace) -> Ideal:
    """I_N = {a : aM ⊆ N and Ma ⊆ N}."""
    A = M.algebra
    F = A.field
    _check_sub(M, N)
    proj, _, _ = quotient_coordinates(N, M.dim, F)
    rows = []
    for b in range(M.dim):
        for acts in (M.left, M.right):
            # column i: proj(e_i . m_b)
            cols = [proj.dot(acts[i][:, b]) for i in range(A.dim)]
            for q in range(proj.shape[0]):
                rows.append({i: cols[i][q] for i in range(A.dim) if cols[i][q]})
    space = nullspace_rows(rows, A.dim, F)
    return Ideal(A, space)


def _check_sub(M: Bimodule, N: Subspace) -> None:
    if N.ambient_dim != M.dim:
        raise NotSubBimodule("ambient dimension mismatch")
    for v in N.dense_basis():
        for i in range(M.algebra.dim):
            if not (N.contains(M.left[i].dot(v)) and N.contains(M.right[i].dot(v))):
                raise NotSubBimodule("subspace is not stable under the actions")


def _restrict(mat: np.ndarray, N: Subspace) -> np.ndarray:
    basis = N.dense_basis()
    out = zeros((N.dim, N.dim), N.field)
    for j, v in enumerate(basis):
        out[:, j] = N.coordinates(mat.dot(v))
    return out


def sub_bimodule(M: Bimodule, N: Subspace) -> Bimodule:
    _check_sub(M, N)
    return Bimodule(
        M.algebra,
        N.dim,
        [_restrict(m, N) for m in M.left],
        [_restrict(m, N) for m in M.right],
        name=f"sub({M.name})",
    )


def quotient_bimodule(M: Bimodule, N: Subspace) -> tuple[Bimodule, ExactMatrix, ExactMatrix]:
    """M/N over the same algebra, with the projection and a linear section."""
    _check_sub(M, N)
    F = M.algebra.field
    proj, section, free = quotient_coordinates(N, M.dim, F)
    left = [proj.dot(m).dot(section) for m in M.left]
    right = [proj.dot(m).dot(section) for m in M.right]
    labels = tuple(M.labels[c] for c in free)
    Q = Bimodule(M.algebra, len(free), left, right, labels, f"{M.name}/N")
    return Q, ExactMatrix(proj, F), ExactMatrix(section, F)


def restrict_bimodule(M: Bimodule, B: Subalgebra) -> Bimodule:
    """M viewed as a bimodule over the subalgebra B."""
    inc = B.inclusion.array
    left = [M.left_of(inc[:, j]) for j in range(B.algebra.dim)]
    right = [M.right_of(inc[:, j]) for j in range(B.algebra.dim)]
    return Bimodule(B.algebra, M.dim, left, right, M.labels, f"{M.name} over {B.algebra.name}")


def quotient_pair_bimodule(M: Bimodule, N: Subspace, Q: QuotientAlgebra) -> tuple[Bimodule, ExactMatrix, ExactMatrix]:
    """M/N as a bimodule over A/C (needs C ⊆ I_N)."""
    from .errors import ConstraintViolation

    I = annihilator_ideal(M, N)
    if not Q.ideal.space.is_subspace_of(I.space):
        raise ConstraintViolation("the ideal C is not contained in I_N")
    F = M.algebra.field
    proj, section, free = quotient_coordinates(N, M.dim, F)
    sec_A = Q.section.array
    left = [proj.dot(M.left_of(sec_A[:, a])).dot(section) for a in range(Q.q.dim)]
    right = [proj.dot(M.right_of(sec_A[:, a])).dot(section) for a in range(Q.q.dim)]
    labels = tuple(M.labels[c] for c in free)
    out = Bimodule(Q.q, len(free), left, right, labels, f"{M.name}/N over {Q.q.name}")
    return out, ExactMatrix(proj, F), ExactMatrix(section, F)
