"""Deterministic exact linear algebra over a cyclotomic field.

Two elimination paths live here:

* :func:`rref` works on a dense :class:`ExactMatrix` with fraction-free
  (Bareiss) forward elimination followed by one normalisation pass.
* :class:`Echelon` keeps an incrementally reduced row-echelon basis of
  *sparse* rows (``dict`` column -> scalar).  Every large constraint system
  in the package (Leibniz systems, cochain constraints, form constraints)
  goes through it, because those systems have thousands of rows but only a
  few nonzeros per row.

Both use leftmost-pivot selection, so the reduced basis of a subspace is
unique and :class:`Subspace` equality is plain representation equality.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .cyclotomic import CyclotomicField, field as _field

__all__ = [
    "Echelon",
    "ExactMatrix",
    "LinearMap",
    "Subspace",
    "inverse",
    "nullspace",
    "nullspace_rows",
    "rref",
    "zeros",
    "identity",
    "dense",
    "sparse",
]

SparseVec = dict  # column index -> nonzero scalar


def zeros(shape, F: CyclotomicField) -> np.ndarray:
    return np.full(shape, F.zero, dtype=object)


def identity(n: int, F: CyclotomicField) -> np.ndarray:
    out = zeros((n, n), F)
    for i in range(n):
        out[i, i] = F.one
    return out


def sparse(vec) -> SparseVec:
    if isinstance(vec, Mapping):
        return {k: v for k, v in vec.items() if v}
    return {i: v for i, v in enumerate(vec) if v}


def dense(vec: Mapping, n: int, F: CyclotomicField) -> np.ndarray:
    out = zeros(n, F)
    for k, v in vec.items():
        out[k] = v
    return out


def _axpy(target: dict, f, row: Mapping, skip=None) -> None:
    """target -= f * row, dropping exact zeros."""
    for k, y in row.items():
        if k == skip:
            continue
        t = target.get(k)
        nv = -(f * y) if t is None else t - f * y
        if nv:
            target[k] = nv
        elif t is not None:
            del target[k]


class Echelon:
    """Reduced row-echelon basis grown one sparse row at a time.

    Invariant: every stored row has a leading 1 at its pivot and zeros in
    all other pivot columns.  Adding rows in any order yields the same
    final set of rows for the same span.
    """

    def __init__(self):
        self.rows: dict[int, SparseVec] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> SparseVec:
        v = {k: x for k, x in vec.items() if x}
        rows = self.rows
        for c in [c for c in v if c in rows]:
            f = v.pop(c)
            _axpy(v, f, rows[c], skip=c)
        return v

    def add(self, vec: Mapping) -> int | None:
        """Insert a row; return its new pivot, or None if it was dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        p = min(v)
        lead = v[p]
        if lead != 1:
            inv = 1 / lead
            v = {k: x * inv for k, x in v.items()}
        for row in self.rows.values():
            f = row.get(p)
            if f:
                _axpy(row, f, v, skip=p)
                del row[p]
        self.rows[p] = v
        return p

    def extend(self, vecs: Iterable[Mapping]) -> Echelon:
        for v in vecs:
            self.add(v)
        return self

    def sorted_rows(self) -> list[tuple[int, SparseVec]]:
        return sorted(self.rows.items())


class Subspace:
    """A subspace of F^n held as its canonical reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "field", "pivots", "_rows")

    def __init__(self, ambient_dim: int, F: CyclotomicField, rows: Sequence[tuple[int, Mapping]] = ()):
        self.ambient_dim = ambient_dim
        self.field = F
        rows = sorted(rows, key=lambda r: r[0])
        self.pivots = tuple(p for p, _ in rows)
        self._rows = tuple(dict(sorted(r.items())) for _, r in rows)

    # construction ---------------------------------------------------------

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int, F: CyclotomicField) -> Subspace:
        ech = Echelon()
        for v in vectors:
            ech.add(sparse(v))
        return cls.from_echelon(ech, ambient_dim, F)

    @classmethod
    def from_echelon(cls, ech: Echelon, ambient_dim: int, F: CyclotomicField) -> Subspace:
        return cls(ambient_dim, F, ech.sorted_rows())

    @classmethod
    def zero(cls, n: int, F: CyclotomicField) -> Subspace:
        return cls(n, F)

    @classmethod
    def full(cls, n: int, F: CyclotomicField) -> Subspace:
        return cls(n, F, [(i, {i: F.one}) for i in range(n)])

    # basic data -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return self.dim

    def sparse_basis(self) -> list[SparseVec]:
        return [dict(r) for r in self._rows]

    def dense_basis(self) -> list[np.ndarray]:
        return [dense(r, self.ambient_dim, self.field) for r in self._rows]

    @property
    def basis(self) -> ExactMatrix:
        arr = zeros((self.dim, self.ambient_dim), self.field)
        for i, r in enumerate(self._rows):
            for k, v in r.items():
                arr[i, k] = v
        return ExactMatrix(arr, self.field)

    def echelon(self) -> Echelon:
        ech = Echelon()
        ech.rows = {p: dict(r) for p, r in zip(self.pivots, self._rows)}
        return ech

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    # membership and coordinates -------------------------------------------

    def reduce(self, vec) -> SparseVec:
        """Normal form of ``vec`` modulo this subspace (zero iff member)."""
        v = sparse(vec)
        for p, row in zip(self.pivots, self._rows):
            f = v.pop(p, None)
            if f:
                _axpy(v, f, row, skip=p)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def __contains__(self, vec) -> bool:
        return self.contains(vec)

    def coordinates(self, vec) -> list:
        """Coefficients of ``vec`` in the canonical basis; raises if not a member."""
        v = sparse(vec)
        if self.reduce(v):
            raise ValueError("vector is not in the subspace")
        zero = self.field.zero
        return [v.get(p, zero) for p in self.pivots]

    def combine(self, coeffs: Sequence) -> SparseVec:
        out: dict = {}
        for c, row in zip(coeffs, self._rows):
            if c:
                _axpy(out, -c, row)
        return out

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(r) for r in self._rows)

    # lattice operations ---------------------------------------------------

    def _check(self, other: Subspace) -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        ech = self.echelon()
        for r in other._rows:
            ech.add(r)
        return Subspace.from_echelon(ech, self.ambient_dim, self.field)

    def intersect(self, other: Subspace) -> Subspace:
        self._check(other)
        images = [other.reduce(r) for r in self._rows]
        kernel = LinearMap(images, self.ambient_dim, self.field).kernel_vectors()
        return Subspace.span((self.combine(k_dense) for k_dense in kernel), self.ambient_dim, self.field)

    __and__ = intersect

    def quotient_dim(self, other: Subspace) -> int:
        """dim self / (self ∩ other)."""
        return self.dim - self.intersect(other).dim

    def complement_reps(self, other: Subspace) -> Subspace:
        """Canonical representatives of self / (self ∩ other).

        The basis of ``self`` is reduced modulo ``other`` and re-echelonised;
        the result meets ``other`` trivially and has dimension
        ``quotient_dim(other)``.  Note the representatives need not lie in
        ``self`` itself unless ``other`` is contained in ``self``.
        """
        self._check(other)
        if other.is_subspace_of(self):
            return Subspace.span((other.reduce(r) for r in self._rows), self.ambient_dim, self.field)
        inter = self.intersect(other)
        return Subspace.span((inter.reduce(r) for r in self._rows), self.ambient_dim, self.field)

    def image(self, matrix) -> Subspace:
        """Image under a dense linear map given as a numpy object array."""
        arr = matrix.array if isinstance(matrix, ExactMatrix) else matrix
        out = []
        for v in self.dense_basis():
            out.append(arr.dot(v))
        return Subspace.span(out, arr.shape[0], self.field)


class LinearMap:
    """A linear map F^k -> F^n given by the images of the k basis vectors.

    Reducing ``[image | e_alpha]`` rows together yields the image and the
    kernel in one sweep, and lets :meth:`preimage` solve ``T x = y``.
    """

    def __init__(self, images: Sequence[Mapping], n: int, F: CyclotomicField):
        self.n = n
        self.k = len(images)
        self.field = F
        ech = Echelon()
        one = F.one
        for alpha, img in enumerate(images):
            row = {c: v for c, v in img.items() if v}
            row[n + alpha] = one
            ech.add(row)
        self._ech = ech

    @property
    def rank(self) -> int:
        return sum(1 for p in self._ech.rows if p < self.n)

    def image(self) -> Subspace:
        rows = [
            (p, {c: v for c, v in row.items() if c < self.n})
            for p, row in self._ech.sorted_rows()
            if p < self.n
        ]
        return Subspace(self.n, self.field, rows)

    def kernel_vectors(self) -> list[list]:
        """Kernel basis as dense coefficient lists (canonical RREF order)."""
        zero = self.field.zero
        out = []
        for p, row in self._ech.sorted_rows():
            if p >= self.n:
                vec = [zero] * self.k
                for c, v in row.items():
                    vec[c - self.n] = v
                out.append(vec)
        return out

    def kernel(self) -> Subspace:
        return Subspace.span(self.kernel_vectors(), self.k, self.field)

    def preimage(self, y: Mapping):
        """Some x with T x = y (dense list), or None if y is not in the image."""
        row = {c: v for c, v in y.items() if v}
        r = self._ech.reduce(row)
        if any(c < self.n for c in r):
            return None
        x = [self.field.zero] * self.k
        for c, v in r.items():
            x[c - self.n] = -v
        return x


class ExactMatrix:
    """Immutable dense matrix of field elements (numpy object storage)."""

    __slots__ = ("array", "field")

    def __init__(self, array, F: CyclotomicField | None = None):
        arr = np.array(array, dtype=object)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ValueError("ExactMatrix needs a 2-d array")
        if F is None:
            F = _infer_field(arr)
        arr = np.vectorize(F, otypes=[object])(arr) if arr.size else arr
        arr.flags.writeable = False
        self.array = arr
        self.field = F

    @classmethod
    def identity(cls, n: int, F: CyclotomicField) -> ExactMatrix:
        return cls(identity(n, F), F)

    @classmethod
    def zeros(cls, rows: int, cols: int, F: CyclotomicField) -> ExactMatrix:
        return cls(zeros((rows, cols), F), F)

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.array.shape

    @property
    def entries(self) -> tuple:
        return tuple(self.array.ravel())

    def __getitem__(self, idx):
        return self.array[idx]

    def to_list(self) -> list[list]:
        return [list(r) for r in self.array]

    def sparse_rows(self) -> list[SparseVec]:
        return [sparse(r) for r in self.array]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        fmt = self.field.format
        body = "; ".join(", ".join(fmt(x) for x in row) for row in self.array)
        return f"ExactMatrix([{body}])"

    def _wrap(self, arr) -> ExactMatrix:
        arr = np.array(arr, dtype=object)
        arr.flags.writeable = False
        out = object.__new__(ExactMatrix)
        out.array = arr
        out.field = self.field
        return out

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if self.cols == 0:
            return ExactMatrix.zeros(self.rows, other.cols, self.field)
        return self._wrap(self.array.dot(other.array))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        return self._wrap(self.array + other.array)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self._wrap(self.array - other.array)

    def __neg__(self) -> ExactMatrix:
        return self._wrap(-self.array)

    def scale(self, c) -> ExactMatrix:
        return self._wrap(self.array * self.field(c))

    @property
    def T(self) -> ExactMatrix:
        return self._wrap(self.array.T)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return rref(self)[1]


def _infer_field(arr: np.ndarray) -> CyclotomicField:
    from .cyclotomic import Cyclotomic, common_field

    orders = {x.order for x in arr.ravel() if isinstance(x, Cyclotomic)}
    return common_field(*orders) if orders else _field(1)


def rref(M: ExactMatrix) -> tuple[ExactMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns of a dense matrix.

    Forward elimination is fraction-free (Bareiss: each update is divided
    by the previous pivot, an exact division), then a single back pass
    normalises pivots to 1 and clears the columns above them.  Pivots are
    chosen in the leftmost available column, first nonzero row.
    """
    F = M.field
    A = [list(r) for r in M.array]
    nrows, ncols = M.shape
    pivots: list[int] = []
    prev = F.one
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((i for i in range(r, nrows) if A[i][c]), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        p = A[r][c]
        for i in range(r + 1, nrows):
            f = A[i][c]
            row = A[i]
            prow = A[r]
            for j in range(c, ncols):
                row[j] = (p * row[j] - f * prow[j]) / prev
            # entries left of c are already zero in rows below r
        # rows above r are left for the back pass
        prev = p
        pivots.append(c)
        r += 1
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / A[k][c]
        A[k] = [x * inv for x in A[k]]
        for i in range(k):
            f = A[i][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    for i in range(len(pivots), nrows):
        A[i] = [F.zero] * ncols
    return ExactMatrix(np.array(A, dtype=object).reshape(nrows, ncols), F), len(pivots), pivots


def inverse(M: ExactMatrix) -> ExactMatrix:
    """Inverse by row reduction of [M | I]; raises ValueError if singular."""
    n = M.rows
    if M.cols != n:
        raise ValueError("only square matrices are invertible")
    F = M.field
    aug = np.concatenate([np.asarray(M.array, dtype=object), identity(n, F)], axis=1)
    R, rank, piv = rref(ExactMatrix(aug, F))
    if list(piv[:n]) != list(range(n)):
        raise ValueError("matrix is singular")
    return ExactMatrix(R.array[:, n:], F)


def nullspace_rows(rows: Iterable[Mapping], ncols: int, F: CyclotomicField) -> Subspace:
    """Kernel of the linear system whose (sparse) equations are ``rows``."""
    ech = Echelon().extend(rows)
    pivots = set(ech.rows)
    vecs = []
    one = F.one
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: one}
        for p, row in ech.rows.items():
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace.span(vecs, ncols, F)


def nullspace(M: ExactMatrix) -> Subspace:
    """Kernel of M acting on column vectors."""
    return nullspace_rows(M.sparse_rows(), M.cols, M.field)
