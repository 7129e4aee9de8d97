"""Derivation-based differential forms.

An n-form is an antisymmetric Z(A)-multilinear map Der(A)^n -> A.  It is
stored by its values on sorted n-tuples of a fixed C-basis D_1..D_r of
Der(A): an array of shape ``(C(r, n), dim A)``.  Z(A)-multilinearity is a
linear condition on these values (imposed on the first slot; antisymmetry
spreads it to the others).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, QuotientAlgebra, Subalgebra
from .derivations import (
    Derivation,
    DerivationSpace,
    InducedMap,
    derivations,
    mapping_into,
    preserving_space,
    induced_map_pi,
    restriction_rho,
    zmodule_span,
)
from .errors import CapExceeded, InvariantBreach, PredicateNotVerified, PreconditionError, ensure
from .exactlin import LinearMap, Subspace, nullspace_rows, sparse, zeros

__all__ = [
    "FormAlgebra",
    "Form",
    "koszul_d",
    "wedge",
    "contract_iX",
    "lie_LX",
    "generate_omega",
    "omega_C_subcomplex",
    "QuotientFormMap",
    "project_p",
    "basic_subspace",
    "basic_complex",
    "isom_check",
    "IsomReport",
    "DEFAULT_FORM_CAP",
]

DEFAULT_FORM_CAP = 3


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple (0 on repeats)."""
    return _sort_sign(tuple(seq))


@lru_cache(maxsize=1 << 16)
def _sort_sign(seq: tuple) -> tuple[int, tuple]:
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


def _perm_sign(p) -> int:
    return sort_sign(p)[0]


def _det(m) -> object:
    n = len(m)
    total = 0
    for p in permutations(range(n)):
        term = _perm_sign(p)
        for i in range(n):
            term = term * m[i][p[i]]
            if not term:
                break
        total = total + term
    return total


class FormAlgebra:
    """Forms over ``A`` with respect to a fixed basis of Der(A)."""

    def __init__(self, A: FDAlgebra, cap: int = DEFAULT_FORM_CAP):
        self.algebra = A
        self.field = A.field
        self.cap = cap
        self.der = derivations(A)
        self.basis = self.der.basis()
        self.r = len(self.basis)
        self.mats = [X.matrix for X in self.basis]
        self.bracket = self.der.bracket_constants()
        self._nz_bracket = {}
        for a in range(self.r):
            for b in range(a + 1, self.r):
                terms = [(e, self.bracket[a, b, e]) for e in range(self.r) if self.bracket[a, b, e]]
                if terms:
                    self._nz_bracket[(a, b)] = terms
        self._combos: dict = {}
        self._full: dict = {}
        self._generated: list = []

    def __repr__(self) -> str:
        return f"FormAlgebra({self.algebra.name}, r={self.r})"

    # bookkeeping ----------------------------------------------------------

    def combos(self, n: int) -> tuple[list[tuple], dict]:
        if n not in self._combos:
            cs = list(combinations(range(self.r), n))
            self._combos[n] = (cs, {c: i for i, c in enumerate(cs)})
        return self._combos[n]

    def ambient_dim(self, n: int) -> int:
        return comb(self.r, n) * self.algebra.dim

    def _check_degree(self, n: int) -> None:
        if n > self.cap:
            raise CapExceeded(f"form degree {n} exceeds the configured cap {self.cap}")

    def zero(self, n: int) -> Form:
        return Form(self, n, zeros((comb(self.r, n), self.algebra.dim), self.field))

    def from_coords(self, n: int, vec) -> Form:
        f = self.zero(n)
        flat = f.values.reshape(-1)
        if isinstance(vec, dict):
            for k, v in vec.items():
                flat[k] = v
        else:
            flat[:] = list(vec)
        return f

    def element(self, a) -> Form:
        return Form(self, 0, np.array([np.asarray(a, dtype=object)], dtype=object))

    def der_coords(self, X: Derivation) -> list:
        return self.der.coordinates(X)

    # the full space -------------------------------------------------------

    def full(self, n: int) -> Subspace:
        """Ω̄ⁿ: all antisymmetric Z(A)-multilinear n-forms."""
        self._check_degree(n)
        if n not in self._full:
            A = self.algebra
            d = A.dim
            rows = []
            if n:
                cs, idx = self.combos(n)
                rest, _ = self.combos(n - 1)
                for z in A.center().dense_basis():
                    Lz = A.left_matrix(z)
                    # z D_j in the derivation basis
                    W = [self.der.coordinates(X.zmul(z)) for X in self.basis]
                    for j in range(self.r):
                        for I in rest:
                            for k in range(d):
                                row: dict = {}
                                for l, w in enumerate(W[j]):
                                    if not w:
                                        continue
                                    s, key = sort_sign((l,) + I)
                                    if s:
                                        _acc(row, idx[key] * d + k, s * w)
                                s, key = sort_sign((j,) + I)
                                if s:
                                    for q in range(d):
                                        if Lz[k, q]:
                                            _acc(row, idx[key] * d + q, -s * Lz[k, q])
                                if row:
                                    rows.append(row)
            self._full[n] = nullspace_rows(rows, self.ambient_dim(n), self.field)
        return self._full[n]

    # operations -----------------------------------------------------------

    def d(self, w: Form) -> Form:
        return koszul_d(w)

    def span(self, n: int, forms) -> Subspace:
        return Subspace.span((f.coords() for f in forms), self.ambient_dim(n), self.field)

    def forms(self, n: int, space: Subspace) -> list[Form]:
        return [self.from_coords(n, v) for v in space.sparse_basis()]

    def image_space(self, op, n_in: int, n_out: int, space: Subspace) -> Subspace:
        return self.span(n_out, (op(f) for f in self.forms(n_in, space)))

    def solve_within(self, n: int, space: Subspace, conditions) -> Subspace:
        """{ω ∈ space : op(ω) ∈ T for each (op, T)}; T=None means op(ω) = 0."""
        forms = self.forms(n, space)
        if not forms:
            return space
        images = []
        width = 0
        for f in forms:
            vec: dict = {}
            offset = 0
            for op, target in conditions:
                g = op(f)
                v = sparse(g.coords()) if target is None else target.reduce(g.coords())
                for k, x in v.items():
                    vec[offset + k] = x
                offset += g.values.size
            width = offset
            images.append(vec)
        lm = LinearMap(images, width, self.field)
        return Subspace.span((space.combine(t) for t in lm.kernel_vectors()), self.ambient_dim(n), self.field)


def _acc(row: dict, key: int, v) -> None:
    if not v:
        return
    nv = row.get(key, 0) + v
    if nv:
        row[key] = nv
    else:
        row.pop(key, None)


class Form:
    """An n-form: values on sorted index tuples of the derivation basis."""

    __slots__ = ("fa", "degree", "values")

    def __init__(self, fa: FormAlgebra, degree: int, values: np.ndarray):
        self.fa = fa
        self.degree = degree
        self.values = values

    def __repr__(self) -> str:
        return f"Form(degree={self.degree}, nnz={sum(1 for x in self.values.ravel() if x)})"

    def coords(self) -> np.ndarray:
        return self.values.ravel()

    def at(self, idx: Sequence[int]) -> np.ndarray:
        """ω(D_{i1}, ..., D_{in}) for any index order."""
        s, key = sort_sign(idx)
        if not s:
            return zeros(self.fa.algebra.dim, self.fa.field)
        row = self.values[self.fa.combos(self.degree)[1][key]]
        return row if s == 1 else -row

    def __call__(self, *ders: Derivation) -> np.ndarray:
        """Value on arbitrary derivations, by multilinear expansion."""
        if len(ders) != self.degree:
            raise ValueError("wrong number of arguments")
        fa = self.fa
        if not ders:
            return self.values[0].copy()
        xs = [fa.der_coords(X) for X in ders]
        out = zeros(fa.algebra.dim, fa.field)
        cs, _ = fa.combos(self.degree)
        for i, L in enumerate(cs):
            c = _det([[x[l] for l in L] for x in xs])
            if c:
                out = out + c * self.values[i]
        return out

    def __add__(self, other: Form) -> Form:
        _same(self, other)
        return Form(self.fa, self.degree, self.values + other.values)

    def __sub__(self, other: Form) -> Form:
        _same(self, other)
        return Form(self.fa, self.degree, self.values - other.values)

    def __neg__(self) -> Form:
        return Form(self.fa, self.degree, -self.values)

    def scale(self, c) -> Form:
        return Form(self.fa, self.degree, c * self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and all(x == y for x, y in zip(self.coords(), other.coords()))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.values.ravel())

    def __mul__(self, other: Form) -> Form:
        return wedge(self, other)


def _same(a: Form, b: Form) -> None:
    if a.fa is not b.fa or a.degree != b.degree:
        raise ValueError("forms of different degree or algebra")


def koszul_d(w: Form) -> Form:
    fa = w.fa
    n = w.degree
    fa._check_degree(n + 1)
    out = fa.zero(n + 1)
    cs, _ = fa.combos(n + 1)
    A = fa.algebra
    for row, J in enumerate(cs):
        val = out.values[row]
        for i, j in enumerate(J):
            rest = J[:i] + J[i + 1:]
            term = fa.mats[j].dot(w.at(rest))
            val = val + term if i % 2 == 0 else val - term
        for i in range(n + 1):
            for k in range(i + 1, n + 1):
                terms = fa._nz_bracket.get((J[i], J[k]))
                if not terms:
                    continue
                rest = J[:i] + J[i + 1:k] + J[k + 1:]
                sign = 1 if (i + k) % 2 == 0 else -1
                for e, c in terms:
                    s, key = sort_sign((e,) + rest)
                    if s:
                        val = val + (sign * s * c) * w.at(key)
        out.values[row] = val
    return out


def wedge(w: Form, e: Form) -> Form:
    """Shuffle product; values multiply in A (not graded commutative)."""
    if w.fa is not e.fa:
        raise ValueError("forms over different algebras")
    fa = w.fa
    p, q = w.degree, e.degree
    fa._check_degree(p + q)
    A = fa.algebra
    out = fa.zero(p + q)
    cs, _ = fa.combos(p + q)
    base = p * (p - 1) // 2
    for row, J in enumerate(cs):
        val = out.values[row]
        for P in combinations(range(p + q), p):
            Pset = set(P)
            left = tuple(J[i] for i in P)
            right = tuple(J[i] for i in range(p + q) if i not in Pset)
            a, b = w.at(left), e.at(right)
            if not any(a) or not any(b):
                continue
            term = A.mul(a, b)
            val = val + term if (sum(P) - base) % 2 == 0 else val - term
        out.values[row] = val
    return out


def _contract_coords(w: Form, x: Sequence) -> Form:
    fa = w.fa
    n = w.degree
    if n == 0:
        return fa.zero(0)
    out = fa.zero(n - 1)
    cs, _ = fa.combos(n - 1)
    for row, I in enumerate(cs):
        val = out.values[row]
        for l, c in enumerate(x):
            if c:
                s, key = sort_sign((l,) + I)
                if s:
                    val = val + (s * c) * w.at(key)
        out.values[row] = val
    return out


def contract_iX(X: Derivation, w: Form) -> Form:
    """(i_X ω)(X_1, ...) = ω(X, X_1, ...); zero on degree 0."""
    return _contract_coords(w, w.fa.der_coords(X))


def lie_LX(X: Derivation, w: Form) -> Form:
    """L_X = i_X d + d i_X."""
    a = contract_iX(X, koszul_d(w))
    if w.degree == 0:
        return a
    return a + koszul_d(contract_iX(X, w))


# generated forms ------------------------------------------------------------------


def _wedge_d(w: Form, b) -> Form:
    """ω ∧ db, specialised: (db)(D_l) = D_l b."""
    fa = w.fa
    n = w.degree
    A = fa.algebra
    db = [m.dot(b) for m in fa.mats]
    out = fa.zero(n + 1)
    cs, _ = fa.combos(n + 1)
    for row, J in enumerate(cs):
        val = out.values[row]
        # last slot holds db at position n of the shuffle: P = all but q
        for qpos in range(n + 1):
            y = db[J[qpos]]
            if not any(y):
                continue
            rest = J[:qpos] + J[qpos + 1:]
            x = w.at(rest)
            if not any(x):
                continue
            term = A.mul(x, y)
            # shuffle sign for P = positions other than qpos
            val = val + term if (n - qpos) % 2 == 0 else val - term
        out.values[row] = val
    return out


def generate_omega(fa: FormAlgebra, cap: int | None = None) -> list[Subspace]:
    """Ωⁿ_Der(A) for n ≤ cap: spans of a_0 da_1 ... da_n."""
    cap = fa.cap if cap is None else cap
    fa._check_degree(cap)
    A = fa.algebra
    spaces = fa._generated
    if not spaces:
        spaces.append(Subspace.full(A.dim, fa.field))
    basis = A.basis()
    while len(spaces) <= cap:
        n = len(spaces)
        prev = fa.forms(n - 1, spaces[-1])
        spaces.append(fa.span(n, (_wedge_d(w, b) for w in prev for b in basis)))
    return spaces[: cap + 1]


def omega_C_subcomplex(fa: FormAlgebra, C: Subspace, cap: int | None = None, G_C: DerivationSpace | None = None) -> list[Subspace]:
    """Ω_{Der,C}: degree 0 is C, then i_X ω ∈ Ω^{n-1}_{Der,C} for X ∈ G_C."""
    cap = fa.cap if cap is None else cap
    omega = generate_omega(fa, cap)
    G_C = G_C or preserving_space(fa.der, C)
    xs = [fa.der_coords(X) for X in G_C.basis()]
    out = [C]
    for n in range(1, cap + 1):
        conds = [((lambda f, x=x: _contract_coords(f, x)), out[-1]) for x in xs]
        out.append(fa.solve_within(n, omega[n], conds) if conds else omega[n])
    return out


# projection to a quotient --------------------------------------------------------


def pullback_matrix(fa: FormAlgebra, xs: Sequence[Sequence], n: int) -> np.ndarray:
    """P[K, L] = det(x_{K_a}[L_b]): values on sorted tuples of new vectors."""
    src, _ = fa.combos(n)
    tgt = list(combinations(range(len(xs)), n))
    P = zeros((len(tgt), len(src)), fa.field)
    for a, K in enumerate(tgt):
        for b, L in enumerate(src):
            P[a, b] = _det([[xs[k][l] for l in L] for k in K]) if n else fa.field.one
    return P


class QuotientFormMap:
    """p: Ω_Der(A) -> Ω_Der(Q) for a submanifold quotient Q = A/C."""

    def __init__(self, fa: FormAlgebra, Q: QuotientAlgebra, fq: FormAlgebra | None = None, pi: InducedMap | None = None):
        self.fa = fa
        self.Q = Q
        self.fq = fq or FormAlgebra(Q.q, fa.cap)
        C = Q.ideal.space
        self.G_C = preserving_space(fa.der, C)
        self.G_A = mapping_into(self.G_C, C)
        self.pi = pi or induced_map_pi(self.G_C, Q)
        if not self.pi.is_surjective():
            raise PredicateNotVerified("π is not surjective; p is undefined without lifts")
        dq2 = Q.q.dim ** 2
        lm = LinearMap([sparse(Y.coords()) for Y in self.pi.images], dq2, fa.field)
        self.lifts = []
        for Y in self.fq.basis:
            t = lm.preimage(sparse(Y.coords()))
            ensure(t is not None, "no lift for a derivation of Q")
            self.lifts.append(self.G_C.combine(t))
        self.lift_coords = [fa.der_coords(X) for X in self.lifts]
        self._pull: dict = {}

    def __call__(self, w: Form) -> Form:
        fa, fq = self.fa, self.fq
        n = w.degree
        proj = self.Q.proj.array
        # well-definedness: ω(Y, ...) ∈ C for Y ∈ G_A
        C = self.Q.ideal.space
        for Y in self.G_A.basis():
            iy = contract_iX(Y, w)
            for v in iy.values:
                if not C.contains(v):
                    raise PreconditionError("form is not constant along G_A modulo C; p is not defined on it")
        if n not in self._pull:
            self._pull[n] = pullback_matrix(fa, self.lift_coords, n)
        vals = self._pull[n].dot(w.values) if n else w.values
        if vals.size == 0:
            return fq.zero(n)
        return Form(fq, n, vals.dot(proj.T))

    def linear_image(self, n: int, space: Subspace) -> LinearMap:
        return LinearMap([sparse(self(w).coords()) for w in self.fa.forms(n, space)], self.fq.ambient_dim(n), self.fa.field)


def project_p(w: Form, Q: QuotientAlgebra, pmap: QuotientFormMap | None = None) -> Form:
    pmap = pmap or QuotientFormMap(w.fa, Q)
    return pmap(w)


def p_commutes(pmap: QuotientFormMap, w: Form) -> bool:
    """d∘p = p∘d and i_{π X}∘p = p∘i_X for X ∈ G_C on ``w``."""
    pw = pmap(w)
    if w.degree < pmap.fa.cap and not (koszul_d(pw) == pmap(koszul_d(w))):
        return False
    for X, Xbar in zip(pmap.G_C.basis(), pmap.pi.images):
        if w.degree and not (contract_iX(Xbar, pw) == pmap(contract_iX(X, w))):
            return False
    return True


# basic forms ----------------------------------------------------------------------


def basic_subspace(fa: FormAlgebra, g: DerivationSpace, n: int, space: Subspace | None = None) -> Subspace:
    """{ω : i_X ω = 0 and L_X ω = 0 for X ∈ g}, inside ``space`` (default Ω̄ⁿ)."""
    space = fa.full(n) if space is None else space
    conds = []
    for X in g.basis():
        x = fa.der_coords(X)
        if n:
            conds.append(((lambda f, x=x: _contract_coords(f, x)), None))
        # the direct formula needs no forms of degree n+1, so it also works at the cap
        brk, nz = _bracket_coords(fa, x), _nonzeros(X.matrix)
        conds.append(((lambda f, X=X, brk=brk, nz=nz: _lie_direct(X, f, brk, nz)), None))
    return fa.solve_within(n, space, conds) if conds else space


def _bracket_coords(fa: FormAlgebra, x: Sequence) -> list[list]:
    """Nonzero coordinates (e, c) of [X, D_j] for X = Σ x_a D_a, from the structure constants."""
    zero = fa.field.zero
    out = []
    for j in range(fa.r):
        row = [zero] * fa.r
        for a, xa in enumerate(x):
            if xa:
                for e in range(fa.r):
                    c = fa.bracket[a, j, e]
                    if c:
                        row[e] = row[e] + xa * c
        out.append([(e, c) for e, c in enumerate(row) if c])
    return out


def _nonzeros(M: np.ndarray) -> list[tuple]:
    return [(i, j, c) for (i, j), c in np.ndenumerate(M) if c]


def _lie_direct(X: Derivation, w: Form, brk: list | None = None, nz: list | None = None) -> Form:
    """(L_X ω)(X_1..X_n) = X ω(X_1..) − Σ ω(.., [X, X_i], ..), no degree n+1 needed."""
    fa = w.fa
    n = w.degree
    if brk is None:
        brk = _bracket_coords(fa, fa.der_coords(X))
    # row J becomes X applied to ω(X_J); derivation matrices are sparse
    vals = np.full(w.values.shape, fa.field.zero, dtype=object)
    for i, j, c in _nonzeros(X.matrix) if nz is None else nz:
        vals[:, i] = vals[:, i] + c * w.values[:, j]
    cs, index = fa.combos(n)
    for row, J in enumerate(cs):
        val = vals[row]
        for i, j in enumerate(J):
            for e, c in brk[j]:
                s, key = sort_sign(J[:i] + (e,) + J[i + 1:])
                if s:
                    val = val - (s * c) * w.values[index[key]]
        vals[row] = val
    return Form(fa, n, vals)


def basic_complex(fa: FormAlgebra, g: DerivationSpace, cap: int | None = None, spaces: Sequence[Subspace] | None = None) -> list[Subspace]:
    cap = fa.cap if cap is None else cap
    out = []
    for n in range(cap + 1):
        out.append(basic_subspace(fa, g, n, spaces[n] if spaces is not None else None))
    for n in range(cap):
        for w in fa.forms(n, out[n]):
            ensure(out[n + 1].contains(koszul_d(w).coords()), "d of a basic form is not basic")
    return out


# the isomorphism of basic forms with forms on B ---------------------------------------


@dataclass
class IsomReport:
    hypothesis: bool
    degrees: list = dc_field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.hypothesis and all(r["injective"] and r["surjective"] for r in self.degrees)

    def to_dict(self) -> dict:
        return {"hypothesis": self.hypothesis, "holds": self.holds, "degrees": self.degrees}


def isom_check(A: FDAlgebra, B: Subalgebra, h: DerivationSpace, ghat: DerivationSpace, cap: int = 2) -> IsomReport:
    """Compare basic Ω̄ⁿ(A) for ĝ with Ω̄ⁿ(B) through restriction to h."""
    hyp = zmodule_span(h.basis(), A) == derivations(A)
    report = IsomReport(hyp)
    if not hyp:
        return report
    fa = FormAlgebra(A, max(cap, 1))
    fb = FormAlgebra(B.algebra, max(cap, 1))
    rho = restriction_rho(h, B)
    lm = LinearMap([sparse(Y.coords()) for Y in rho.images], B.algebra.dim ** 2, A.field)
    lifts = []
    for Y in fb.basis:
        t = lm.preimage(sparse(Y.coords()))
        ensure(t is not None, "ρ is not surjective onto Der(B)")
        lifts.append(h.combine(t))
    xs = [fa.der_coords(X) for X in lifts]
    for n in range(cap + 1):
        basic = basic_subspace(fa, ghat, n)
        P = pullback_matrix(fa, xs, n)
        imgs = []
        for w in fa.forms(n, basic):
            vals = P.dot(w.values) if n else w.values
            coords = []
            for v in vals:
                if not B.space.contains(v):
                    raise InvariantBreach("a basic form takes values outside B on h")
                coords.extend(B.space.coordinates(v))
            imgs.append(sparse(coords))
        full_B = fb.full(n)
        lmap = LinearMap(imgs, fb.ambient_dim(n), A.field)
        inside = all(full_B.contains(v) for v in imgs)
        report.degrees.append(
            {
                "degree": n,
                "dim_basic_A": basic.dim,
                "dim_B": full_B.dim,
                "injective": lmap.rank == basic.dim,
                "surjective": inside and lmap.rank == full_B.dim,
            }
        )
    return report
