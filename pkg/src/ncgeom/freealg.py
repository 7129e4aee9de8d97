"""Noncommutative polynomials, rewriting, and finite quotients of free algebras.

Words are tuples of generator names; the empty tuple is the unit.  Terms are
ordered degree-lexicographically with a user-declared generator precedence
(first entry is the largest).  A rewrite system orients each relation at its
leading word.  Membership in the two-sided ideal is decided by reduction to
zero, which is only trusted once the ambiguities have been resolved.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import FDAlgebra
from .cyclotomic import CyclotomicField, field as _field
from .errors import (
    ConfluenceNotEstablished,
    DuplicateLeadingWord,
    ParseError,
    QuotientNotFinite,
    StepCapExceeded,
)

__all__ = [
    "NCPoly",
    "commutator",
    "parse_poly",
    "RewriteSystem",
    "Presentation",
    "FreeDerivation",
    "ConfluenceReport",
    "nf",
    "confluence_check",
    "ideal_member",
    "derivation_preserves_ideal",
    "finite_quotient",
    "FiniteQuotient",
    "heisenberg_presentation",
    "clock_shift_presentation",
    "clock_shift_matrices",
    "word_representation",
    "DEFAULT_STEP_CAP",
    "DEFAULT_WORD_CAP",
]

DEFAULT_STEP_CAP = 100_000
DEFAULT_WORD_CAP = 2_000

Word = tuple


class NCPoly:
    """Finite linear combination of words with no zero coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, F: CyclotomicField, terms: Mapping[Word, object] | None = None):
        self.field = F
        self.terms: dict = {}
        for w, c in (terms or {}).items():
            c = F(c)
            if c:
                self.terms[tuple(w)] = self.terms.get(tuple(w), F.zero) + c
        self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def word(cls, F: CyclotomicField, w: Sequence[str], c=1) -> NCPoly:
        return cls(F, {tuple(w): c})

    @classmethod
    def const(cls, F: CyclotomicField, c=1) -> NCPoly:
        return cls(F, {(): c})

    def __repr__(self) -> str:
        return f"NCPoly({self.format()})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.field.format(self.terms[w])
            name = "*".join(w)
            if not w:
                parts.append(c)
            elif c == "1":
                parts.append(name)
            elif c == "-1":
                parts.append(f"-{name}")
            else:
                parts.append(f"({c})*{name}" if " " in c else f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def _coerce(self, other) -> NCPoly:
        return other if isinstance(other, NCPoly) else NCPoly.const(self.field, other)

    def __add__(self, other) -> NCPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return NCPoly(self.field, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> NCPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> NCPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> NCPoly:
        if not isinstance(other, NCPoly):
            c = self.field(other)
            return NCPoly(self.field, {w: v * c for w, v in self.terms.items()})
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPoly(self.field, out)

    def __rmul__(self, other) -> NCPoly:
        c = self.field(other)
        return NCPoly(self.field, {w: c * v for w, v in self.terms.items()})

    def __pow__(self, k: int) -> NCPoly:
        out = NCPoly.const(self.field)
        for _ in range(k):
            out = out * self
        return out


def commutator(a: NCPoly, b: NCPoly) -> NCPoly:
    return a * b - b * a


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_poly(text: str, F: CyclotomicField, generators: Sequence[str]) -> NCPoly:
    """Parse ``"x*y - z*y*x + 1/2"``; factors are generators (``x^3`` allowed) or scalars."""
    gens = set(generators)
    total = NCPoly(F)
    src = text.strip()
    if not src:
        raise ParseError("empty polynomial")
    pos = 0
    for m in _TERM.finditer(src):
        if m.start() != pos:
            raise ParseError(f"cannot parse polynomial near {src[pos:]!r}", position=pos)
        pos = m.end()
        sign, body = m.group(1), m.group(2).strip()
        coeff = F.one
        word: list[str] = []
        for factor in body.split("*"):
            factor = factor.strip()
            base, _, exp = factor.partition("^")
            if base in gens:
                k = int(exp) if exp else 1
                word.extend([base] * k)
            else:
                try:
                    coeff = coeff * F.parse(factor)
                except Exception as exc:
                    raise ParseError(f"unknown factor {factor!r}", position=m.start(2)) from exc
        total = total + NCPoly(F, {tuple(word): -coeff if sign == "-" else coeff})
    if pos != len(src):
        raise ParseError(f"trailing input {src[pos:]!r}", position=pos)
    return total


# rewriting -------------------------------------------------------------------------


@dataclass
class Presentation:
    """Generators, relations and an orientation, over Q(zeta_m)."""

    field: CyclotomicField
    generators: tuple
    relations: list
    precedence: tuple
    name: str = ""

    def rewrite_system(self) -> RewriteSystem:
        return RewriteSystem.from_relations(self.field, self.generators, self.relations, self.precedence)

    def poly(self, text: str) -> NCPoly:
        return parse_poly(text, self.field, self.generators)

    def gen(self, g: str) -> NCPoly:
        return NCPoly.word(self.field, (g,))


class RewriteSystem:
    def __init__(self, F: CyclotomicField, generators: Sequence[str], precedence: Sequence[str], rules: Sequence[tuple]):
        self.field = F
        self.generators = tuple(generators)
        self.precedence = tuple(precedence)
        if set(self.precedence) != set(self.generators):
            raise ValueError("precedence must list every generator exactly once")
        n = len(self.precedence)
        self._rank = {g: n - i for i, g in enumerate(self.precedence)}
        self.rules: list[tuple[Word, NCPoly]] = []
        seen = set()
        for lhs, rhs in rules:
            lhs = tuple(lhs)
            if lhs in seen:
                raise DuplicateLeadingWord(f"two rules share the leading word {'*'.join(lhs)}")
            seen.add(lhs)
            for w in rhs.terms:
                if not self.less(w, lhs):
                    raise ValueError(f"rule {'*'.join(lhs)} -> {rhs.format()} does not decrease the order")
            self.rules.append((lhs, rhs))
        # matching order at a fixed position: shorter left-hand sides first, then declaration order
        self._by_first: dict = {}
        for idx, (lhs, rhs) in sorted(enumerate(self.rules), key=lambda e: (len(e[1][0]), e[0])):
            self._by_first.setdefault(lhs[0] if lhs else None, []).append((lhs, rhs))

    @classmethod
    def from_relations(cls, F, generators, relations: Iterable[NCPoly], precedence) -> RewriteSystem:
        tmp = cls(F, generators, precedence, [])
        rules = []
        for rel in relations:
            if rel.is_zero():
                continue
            lead = max(rel.terms, key=tmp.key)
            c = rel.terms[lead]
            rest = NCPoly(F, {w: -v / c for w, v in rel.terms.items() if w != lead})
            rules.append((lead, rest))
        return cls(F, generators, precedence, rules)

    def key(self, w: Word) -> tuple:
        return (len(w), tuple(self._rank[g] for g in w))

    def less(self, a: Word, b: Word) -> bool:
        return self.key(a) < self.key(b)

    def leading(self, p: NCPoly) -> Word:
        return max(p.terms, key=self.key)

    def match(self, w: Word):
        """Leftmost match: (position, lhs, rhs) or None."""
        for pos in range(len(w)):
            for lhs, rhs in self._by_first.get(w[pos], ()):
                if w[pos:pos + len(lhs)] == lhs:
                    return pos, lhs, rhs
        return None

    def is_irreducible(self, w: Word) -> bool:
        return self.match(w) is None

    def relations(self) -> list[NCPoly]:
        return [NCPoly.word(self.field, lhs) - rhs for lhs, rhs in self.rules]


def nf(p: NCPoly, R: RewriteSystem, step_cap: int = DEFAULT_STEP_CAP) -> NCPoly:
    """Normal form: rewrite the largest reducible term at its leftmost match."""
    F = R.field
    terms = dict(p.terms)
    steps = 0
    irreducible: set = set()
    while True:
        target = None
        for w in sorted(terms, key=R.key, reverse=True):
            if w in irreducible:
                continue
            m = R.match(w)
            if m is None:
                irreducible.add(w)
                continue
            target = (w, m)
            break
        if target is None:
            return NCPoly(F, terms)
        steps += 1
        if steps > step_cap:
            raise StepCapExceeded(f"normal form did not settle within {step_cap} steps")
        w, (pos, lhs, rhs) = target
        c = terms.pop(w)
        pre, post = w[:pos], w[pos + len(lhs):]
        for rw, rc in rhs.terms.items():
            nw = pre + rw + post
            v = terms.get(nw, 0) + c * rc
            if v:
                terms[nw] = v
            else:
                terms.pop(nw, None)


@dataclass
class ConfluenceReport:
    bound: int
    checked: int
    complete: bool
    unresolved: list = dc_field(default_factory=list)

    @property
    def confluent(self) -> bool:
        return not self.unresolved

    @property
    def established(self) -> bool:
        """True when every ambiguity was checked and all resolved."""
        return self.confluent and self.complete

    def covers(self, degree: int) -> bool:
        return self.confluent and (self.complete or degree <= self.bound)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "checked": self.checked,
            "complete": self.complete,
            "confluent": self.confluent,
            "unresolved": [
                {"word": "*".join(w), "left": a.format(), "right": b.format()} for w, a, b in self.unresolved
            ],
        }


def _ambiguities(R: RewriteSystem):
    """All overlap and inclusion ambiguities: (word, reduct1, reduct2)."""
    F = R.field
    rules = R.rules
    for a, (l1, r1) in enumerate(rules):
        for b, (l2, r2) in enumerate(rules):
            # overlap: suffix of l1 equals prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    one = r1 * NCPoly.word(F, l2[k:])
                    two = NCPoly.word(F, l1[: len(l1) - k]) * r2
                    yield word, one, two
            # inclusion: l2 strictly inside l1
            if len(l2) < len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] == l2:
                        two = NCPoly.word(F, l1[:p]) * r2 * NCPoly.word(F, l1[p + len(l2):])
                        yield l1, r1, two


def confluence_check(R: RewriteSystem, degree_bound: int = 12, step_cap: int = DEFAULT_STEP_CAP) -> ConfluenceReport:
    checked = 0
    complete = True
    unresolved = []
    for word, one, two in _ambiguities(R):
        if len(word) > degree_bound:
            complete = False
            continue
        checked += 1
        a, b = nf(one, R, step_cap), nf(two, R, step_cap)
        if a != b:
            unresolved.append((word, a, b))
    return ConfluenceReport(degree_bound, checked, complete, unresolved)


def _require(R: RewriteSystem, report: ConfluenceReport | None, degree: int, bound: int) -> None:
    report = report or confluence_check(R, bound)
    if not report.covers(degree):
        raise ConfluenceNotEstablished(
            f"confluence not established at bound {report.bound} (needed for degree {degree})"
        )


def ideal_member(p: NCPoly, R: RewriteSystem, bound: int = 12, report: ConfluenceReport | None = None) -> bool:
    """p ∈ (relations) iff nf(p) = 0, given confluence."""
    _require(R, report, p.degree(), bound)
    return nf(p, R).is_zero()


@dataclass
class FreeDerivation:
    """A derivation of the free algebra, fixed by the images of the generators."""

    images: dict

    def __call__(self, p: NCPoly) -> NCPoly:
        F = p.field
        out = NCPoly(F)
        for w, c in p.terms.items():
            for i, g in enumerate(w):
                img = self.images.get(g)
                if img is None or img.is_zero():
                    continue
                out = out + NCPoly.word(F, w[:i]) * img * NCPoly.word(F, w[i + 1:]) * c
        return out


def derivation_preserves_ideal(
    D: FreeDerivation, generators: Sequence[NCPoly], R: RewriteSystem, bound: int = 12, report: ConfluenceReport | None = None
) -> bool:
    """Whether D maps the two-sided ideal C generated by ``generators`` into itself.

    It suffices to test the generators: D(a g b) = D(a) g b + a D(g) b + a g D(b),
    and the outer terms already lie in C, so D(C) ⊆ C iff D(g) ∈ C for each g.
    """
    report = report or confluence_check(R, bound)
    return all(ideal_member(D(g), R, bound, report) for g in generators)


# finite quotients ------------------------------------------------------------------


@dataclass(eq=False)
class FiniteQuotient:
    algebra: FDAlgebra
    words: tuple
    index: dict

    def vector(self, p: NCPoly, R: RewriteSystem) -> np.ndarray:
        q = nf(p, R)
        v = self.algebra.zero()
        for w, c in q.terms.items():
            v[self.index[w]] = c
        return v


def _label(w: Word) -> str:
    if not w:
        return "1"
    return "".join(w) if all(len(g) == 1 for g in w) else "*".join(w)


def finite_quotient(
    R: RewriteSystem, word_cap: int = DEFAULT_WORD_CAP, bound: int = 12, report: ConfluenceReport | None = None, name: str = ""
) -> FiniteQuotient:
    """The quotient algebra on irreducible words, if there are finitely many."""
    report = report or confluence_check(R, bound)
    if not report.established:
        raise ConfluenceNotEstablished("finite quotients need every ambiguity resolved")
    found = [()]
    queue = deque([()])
    while queue:
        w = queue.popleft()
        for g in R.generators:
            nw = w + (g,)
            if R.is_irreducible(nw):
                found.append(nw)
                if len(found) > word_cap:
                    raise QuotientNotFinite(f"more than {word_cap} irreducible words; the quotient looks infinite")
                queue.append(nw)
    words = tuple(sorted(found, key=R.key))
    index = {w: i for i, w in enumerate(words)}
    F = R.field
    products = {}
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            q = nf(NCPoly.word(F, a + b), R)
            products[(i, j)] = {index[w]: c for w, c in q.terms.items()}
    unit = [F.one if w == () else F.zero for w in words]
    A = FDAlgebra(F, [_label(w) for w in words], unit, products, name=name or "quotient")
    return FiniteQuotient(A, words, index)


# named presentations ---------------------------------------------------------------


def heisenberg_presentation() -> Presentation:
    """x, y with xy - yx = i, oriented xy -> yx + i (x > y)."""
    F = _field(4)
    x, y = NCPoly.word(F, "x"), NCPoly.word(F, "y")
    rel = x * y - y * x - NCPoly.const(F, F.zeta())
    return Presentation(F, ("x", "y"), [rel], ("x", "y"), "heisenberg")


def clock_shift_presentation(n: int) -> Presentation:
    """x, y with xy = q yx, x^n = y^n = 1 and q = zeta_n."""
    F = _field(n)
    q = F.zeta()
    x, y = NCPoly.word(F, "x"), NCPoly.word(F, "y")
    one = NCPoly.const(F)
    rels = [x * y - (y * x) * q, x ** n - one, y ** n - one]
    return Presentation(F, ("x", "y"), rels, ("x", "y"), f"clockshift{n}")


def clock_shift_matrices(n: int, F: CyclotomicField | None = None) -> tuple[np.ndarray, np.ndarray]:
    """U = diag(1, q, ..., q^(n-1)) and the cyclic shift V, with UV = qVU."""
    F = F or _field(n)
    q = F.zeta(1 if F.order == n else F.order // n)
    U = np.array([[F.zero] * n for _ in range(n)], dtype=object)
    V = np.array([[F.zero] * n for _ in range(n)], dtype=object)
    for k in range(n):
        U[k, k] = q ** k if k else F.one
        V[(k + 1) % n, k] = F.one
    return U, V


def word_representation(words: Sequence[Word], images: Mapping[str, np.ndarray], F: CyclotomicField) -> list[np.ndarray]:
    """Matrices of the given words under a generator assignment."""
    size = next(iter(images.values())).shape[0]
    ident = np.array([[F.one if i == j else F.zero for j in range(size)] for i in range(size)], dtype=object)
    out = []
    for w in words:
        m = ident
        for g in w:
            m = m.dot(images[g])
        out.append(m)
    return out
