"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are residues modulo the m-th cyclotomic polynomial, stored as
``phi(m)`` rational coefficients in the power basis 1, z, ..., z^(phi-1).

When ``phi(m) == 1`` (m = 1 or 2) the field is Q itself; ``CyclotomicField``
then hands out plain ``gmpy2.mpq`` values, which are an order of magnitude
faster than any wrapper.  Code downstream only relies on ``+ - * /``,
truthiness and equality, so both representations flow through unchanged.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "Cyclotomic",
    "CyclotomicField",
    "cyclotomic_polynomial",
    "euler_phi",
    "field",
    "common_field",
    "to_mpq",
]


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // lead
        out[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("order must be a positive integer")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def to_mpq(x) -> mpq:
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"not a rational number: {x!r}")


_MPQ = type(mpq())


class CyclotomicField:
    """The field Q(zeta_m); one instance per order (see :func:`field`)."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be a positive integer")
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1
        self.rational = self.degree == 1
        n = self.degree
        # powers[k] = z^k reduced, for 0 <= k < max(order, 2n-1)
        powers = []
        cur = [mpq(0)] * n
        cur[0] = mpq(1)
        for _ in range(max(order, 2 * n - 1)):
            powers.append(tuple(cur))
            top = cur[-1]
            nxt = [mpq(0)] + cur[:-1]
            if top:
                for j in range(n):
                    nxt[j] -= top * self.modulus[j]
            cur = nxt
        self._powers = powers
        self._fold = powers[n : 2 * n - 1]
        if self.rational:
            self.zero = mpq(0)
            self.one = mpq(1)
        else:
            self.zero = Cyclotomic._make(self, (mpq(0),) * n)
            self.one = Cyclotomic._make(self, (mpq(1),) + (mpq(0),) * (n - 1))

    def __repr__(self) -> str:
        return f"CyclotomicField({self.order})"

    def __reduce__(self):
        return (field, (self.order,))

    # construction ---------------------------------------------------------

    def __call__(self, value):
        """Coerce an int, rational, string or cyclotomic value into this field."""
        if isinstance(value, Cyclotomic):
            if value.field is self:
                return value
            return value.field.embed(value, self)
        if self.rational:
            return to_mpq(value)
        return Cyclotomic._make(self, (to_mpq(value),) + (mpq(0),) * (self.degree - 1))

    def from_coeffs(self, coeffs) -> object:
        """Element sum coeffs[k] z^k; the list may be longer than phi(m)."""
        acc = [mpq(0)] * self.degree
        for k, c in enumerate(coeffs):
            c = to_mpq(c)
            if c:
                for j, p in enumerate(self._powers[k % self.order]):
                    if p:
                        acc[j] += c * p
        if self.rational:
            return acc[0]
        return Cyclotomic._make(self, tuple(acc))

    def zeta(self, k: int = 1):
        """The power z^k of the chosen primitive root of unity."""
        coeffs = self._powers[k % self.order]
        if self.rational:
            return coeffs[0]
        return Cyclotomic._make(self, coeffs)

    def coeffs(self, x) -> tuple[mpq, ...]:
        """Power-basis coefficients of an element of this field."""
        if isinstance(x, Cyclotomic):
            return self(x).coeffs
        return (to_mpq(x),) + (mpq(0),) * (self.degree - 1)

    def is_element(self, x) -> bool:
        if self.rational:
            return isinstance(x, _MPQ)
        return isinstance(x, Cyclotomic) and x.field is self

    def embed(self, x, target: CyclotomicField):
        """Injective field map Q(zeta_m) -> Q(zeta_M) sending z to z_M^(M/m)."""
        if target.order % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{target.order})")
        step = target.order // self.order
        coeffs = self.coeffs(x)
        out = [0] * (self.order * step)
        for k, c in enumerate(coeffs):
            out[k * step] = c
        return target.from_coeffs(out)

    def format(self, x) -> str:
        """Canonical exact string, e.g. ``-1/2``, ``1 + 3*z - z^2``."""
        coeffs = self.coeffs(x)
        parts = []
        for k, c in enumerate(coeffs):
            if not c:
                continue
            mag = -c if c < 0 else c
            sign = "-" if c < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def parse(self, text: str):
        """Inverse of :meth:`format` (also accepts plain rationals)."""
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty scalar")
        terms, start = [], 0
        for i in range(1, len(text) + 1):
            if i == len(text) or (text[i] in "+-" and text[i - 1] not in "*^"):
                terms.append(text[start:i])
                start = i
        coeffs = [mpq(0)] * max(self.order, 1)
        for term in terms:
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("+-")
            if "z" in term:
                coef, _, mono = term.rpartition("*") if "*" in term else ("1", "", term)
                power = int(mono[2:]) if mono.startswith("z^") else 1
                if mono not in ("z",) and not mono.startswith("z^"):
                    raise ValueError(f"bad monomial {mono!r}")
            else:
                coef, power = term, 0
            coeffs[power % self.order] += sign * to_mpq(coef)
        return self.from_coeffs(coeffs)

    # raw polynomial arithmetic on coefficient tuples -----------------------

    def _mul(self, a: tuple, b: tuple) -> tuple:
        n = self.degree
        prod = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        low = prod[:n]
        for k, c in enumerate(prod[n:]):
            if c:
                for j, p in enumerate(self._fold[k]):
                    if p:
                        low[j] += c * p
        return tuple(low)

    def _inv(self, a: tuple) -> tuple:
        n = self.degree
        # solve (multiplication-by-a matrix) y = e0 over Q
        cols = []
        basis = [mpq(0)] * n
        for j in range(n):
            e = list(basis)
            e[j] = mpq(1)
            cols.append(self._mul(a, tuple(e)))
        aug = [[cols[j][i] for j in range(n)] + [mpq(1) if i == 0 else mpq(0)] for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("cyclotomic division by zero")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [v * inv for v in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
        return tuple(row[n] for row in aug)


@lru_cache(maxsize=None)
def field(order: int) -> CyclotomicField:
    """The (cached) field Q(zeta_order)."""
    return CyclotomicField(order)


def common_field(*orders: int) -> CyclotomicField:
    """Smallest cyclotomic field containing all the requested ones."""
    m = 1
    for o in orders:
        m = m * o // gcd(m, o)
    return field(m)


class Cyclotomic:
    """An element of Q(zeta_m).

    >>> i = Cyclotomic(4, [0, 1])
    >>> i * i
    Cyclotomic(4, [-1, 0])
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, order: int, coeffs=(0,)):
        F = field(order)
        value = F.from_coeffs(coeffs)
        self.field = F
        self.coeffs = F.coeffs(value)

    @classmethod
    def _make(cls, F: CyclotomicField, coeffs: tuple) -> Cyclotomic:
        obj = object.__new__(cls)
        obj.field = F
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> Cyclotomic:
        F = field(order)
        return cls._make(F, F._powers[k % order])

    @property
    def order(self) -> int:
        return self.field.order

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        return self.field.format(self)

    def __reduce__(self):
        return (Cyclotomic, (self.order, [Fraction(int(c.numerator), int(c.denominator)) for c in self.coeffs]))

    def _coerce(self, other) -> tuple | None:
        if isinstance(other, Cyclotomic):
            if other.field is self.field:
                return other.coeffs
            return None
        if isinstance(other, (int, _MPQ, Rational)):
            return (to_mpq(other),) + (mpq(0),) * (self.field.degree - 1)
        return NotImplemented

    def _promote(self, other: Cyclotomic) -> tuple[Cyclotomic, Cyclotomic]:
        F = common_field(self.order, other.order)
        a = self.field.embed(self, F)
        b = other.field.embed(other, F)
        if F.rational:
            a, b = Cyclotomic._make(F, (a,)), Cyclotomic._make(F, (b,))
        return a, b

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other) -> bool:
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c is None:
            a, b = self._promote(other)
            return a.coeffs == b.coeffs
        return self.coeffs == c

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic._make(self.field, tuple(-c for c in self.coeffs))

    def __pos__(self) -> Cyclotomic:
        return self

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c is None:
            a, b = self._promote(other)
            return a + b
        return Cyclotomic._make(self.field, tuple(x + y for x, y in zip(self.coeffs, c)))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c is None:
            a, b = self._promote(other)
            return a - b
        return Cyclotomic._make(self.field, tuple(x - y for x, y in zip(self.coeffs, c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, _MPQ)) and not isinstance(other, bool):
            return Cyclotomic._make(self.field, tuple(x * other for x in self.coeffs))
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c is None:
            a, b = self._promote(other)
            return a * b
        return Cyclotomic._make(self.field, self.field._mul(self.coeffs, c))

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if not self:
            raise ZeroDivisionError("cyclotomic division by zero")
        return Cyclotomic._make(self.field, self.field._inv(self.coeffs))

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        if c is None:
            a, b = self._promote(other)
            return a / b
        return self * Cyclotomic._make(self.field, c).inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return Cyclotomic._make(self.field, c) * self.inverse()

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def embed(self, order: int) -> Cyclotomic:
        """Image under the injective map into Q(zeta_order)."""
        target = field(order)
        value = self.field.embed(self, target)
        if target.rational:
            return Cyclotomic._make(target, (value,))
        return value

