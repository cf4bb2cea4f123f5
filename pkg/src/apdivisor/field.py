"""Exact arithmetic in a real number field Q(theta) with a fixed real embedding.

A field is presented by a monic minimal polynomial ``p`` (coefficients low to
high) and a rational interval isolating the real root ``theta`` we embed by.
Elements are stored in the power basis ``c0 + c1*theta + ... ``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    IrreducibilityNotCertifiedError,
    MixedFieldsError,
    MultipleRootsInIntervalError,
    NoRootInIntervalError,
    NonMonicError,
    RationalRootPresentError,
)

Poly = tuple  # tuple[Fraction, ...], low-to-high, no trailing zeros


# ---------------------------------------------------------------------------
# rational polynomials


def _trim(coeffs: Iterable) -> Poly:
    out = [c if type(c) is Fraction else Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_eval(p: Sequence[Fraction], x):
    acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, tuple(-c for c in b))


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / lead
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = list(_trim(a))
    return _trim(q), _trim(a)


def poly_derivative(p: Poly) -> Poly:
    return _trim(i * c for i, c in enumerate(p) if i > 0)


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [_trim(p), poly_derivative(_trim(p))]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = poly_divmod(seq[-2], seq[-1])
        seq.append(tuple(-c for c in r))
    return [s for s in seq if s]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(poly_eval(s, lo) for s in seq) - _sign_changes(
        poly_eval(s, hi) for s in seq
    )


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of ``p`` via the rational root theorem."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
        while p and p[0] == 0:
            p = p[1:]
        if len(p) <= 1:
            return roots
    denom = math.lcm(*(c.denominator for c in p))
    ints = [int(c * denom) for c in p]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and poly_eval(p, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# interval arithmetic over Q, used for exact sign determination


def _imul(a: tuple, b: tuple) -> tuple:
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(prods), max(prods)


def _interval_eval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> tuple:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _imul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """Q(theta) with theta the unique root of ``minpoly`` inside (lo, hi)."""

    minpoly: tuple
    lo: Fraction
    hi: Fraction
    assume_irreducible: bool = False
    _bisections: dict = dc_field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        p = tuple(Fraction(c) for c in self.minpoly)
        object.__setattr__(self, "minpoly", p)
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        self._validate()

    def _validate(self):
        p, lo, hi = self.minpoly, self.lo, self.hi
        if len(p) < 2 or _trim(p) != p:
            raise NonMonicError(f"minimal polynomial must have degree >= 1, got {p}")
        if p[-1] != 1:
            raise NonMonicError(f"minimal polynomial is not monic (leading coefficient {p[-1]})")
        if not lo < hi:
            raise NoRootInIntervalError(f"empty interval ({lo}, {hi})")
        deg = len(p) - 1
        if deg >= 2:
            rr = rational_roots(p)
            if rr:
                raise RationalRootPresentError(
                    f"minimal polynomial has rational root(s) {', '.join(map(str, rr))}"
                )
            if deg >= 4 and not self.assume_irreducible:
                raise IrreducibilityNotCertifiedError(
                    f"degree {deg} > 3: pass assume_irreducible=True to assert irreducibility"
                )
        if deg >= 2 and len(sturm_sequence(p)[-1]) > 1:
            raise IrreducibilityNotCertifiedError("minimal polynomial has a repeated factor")
        # Sturm counts (lo, hi]; a root sitting exactly on hi is excluded
        n = count_real_roots(p, lo, hi) - (1 if poly_eval(p, hi) == 0 else 0)
        if n == 0:
            raise NoRootInIntervalError(f"no root of the minimal polynomial in ({lo}, {hi})")
        if n > 1:
            raise MultipleRootsInIntervalError(f"{n} roots in ({lo}, {hi})")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls((0, 1), -1, 1)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def _powers(self) -> tuple:
        """theta^k reduced to the power basis, for k = deg .. 2*deg - 2."""
        deg = self.degree
        top = [-c for c in self.minpoly[:-1]]
        out, cur = [], top
        for _ in range(max(deg - 1, 0)):
            out.append(tuple(cur))
            # multiply by theta and reduce the overflowing coefficient
            lead = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [a + lead * b for a, b in zip(cur, top)]
        return tuple(out)

    def scalar(self, value) -> "Scalar":
        """Coerce an int, Fraction, coefficient list or Scalar into this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise MixedFieldsError("scalar belongs to a different field")
            return value
        if isinstance(value, (int, Rational, str)) and not isinstance(value, bool):
            coeffs = [Fraction(value)] + [Fraction(0)] * (self.degree - 1)
            return Scalar(self, tuple(coeffs))
        coeffs = [Fraction(c) for c in value]
        if len(coeffs) > self.degree:
            _, r = poly_divmod(_trim(coeffs), self.minpoly)
            coeffs = list(r)
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return Scalar(self, tuple(coeffs))

    __call__ = scalar

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)

    @property
    def theta(self) -> "Scalar":
        if self.degree == 1:
            return self.scalar(-self.minpoly[0])
        return self.scalar([0, 1])

    def isolating_interval(self, bisections: int) -> tuple[Fraction, Fraction]:
        """Root interval after ``bisections`` halvings of (lo, hi)."""
        if self.degree == 1:
            t = -self.minpoly[0]
            return t, t
        cache = self._bisections
        if bisections in cache:
            return cache[bisections]
        done = max((k for k in cache if k < bisections), default=0)
        lo, hi = cache.get(done, (self.lo, self.hi))
        slo = poly_eval(self.minpoly, lo) > 0
        for _ in range(bisections - done):
            mid = (lo + hi) / 2
            # p has no rational roots for degree >= 2, so p(mid) != 0
            if (poly_eval(self.minpoly, mid) > 0) == slo:
                lo = mid
            else:
                hi = mid
        cache[bisections] = (lo, hi)
        return lo, hi

    def literal(self) -> str:
        mp = ", ".join(_frac_str(c) for c in self.minpoly)
        s = f"field {{ minpoly = [{mp}], interval = [{_frac_str(self.lo)}, {_frac_str(self.hi)}]"
        if self.assume_irreducible:
            s += ", assume_irreducible = true"
        return s + " }"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Scalar:
    field: FieldSpec
    coeffs: tuple

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise MixedFieldsError("arithmetic between scalars of different fields")
            return other
        if isinstance(other, (int, Rational)):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        deg = field.degree
        if deg == 1:
            return Scalar(field, (self.coeffs[0] * other.coeffs[0],))
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        prod[i + j] += x * y
        out = prod[:deg]
        for k, c in enumerate(prod[deg:]):
            if c:
                for i, t in enumerate(field._powers[k]):
                    if t:
                        out[i] += c * t
        return Scalar(field, tuple(out))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.field.degree == 1:
            return Scalar(self.field, (1 / self.coeffs[0],))
        p = self.field.minpoly
        # invariant: r_i == s_i * a (mod p)
        r0, r1 = p, _trim(self.coeffs)
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisionError("element is a zero divisor: minimal polynomial is reducible")
        return self.field.scalar(tuple(c / r0[0] for c in s0))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def sign(self) -> int:
        """Sign of the image under the real embedding, decided exactly."""
        if self.is_zero():
            return 0
        if self.is_rational() or self.field.degree == 1:
            v = self._exact_rational()
            return (v > 0) - (v < 0)
        k = 0
        while True:
            lo, hi = self.field.isolating_interval(k)
            vlo, vhi = _interval_eval(self.coeffs, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            k += 4

    def to_real(self, precision) -> Fraction:
        """Rational q with |q - value| <= precision."""
        precision = Fraction(precision)
        if precision <= 0:
            raise ValueError("precision must be positive")
        if self.is_rational() or self.field.degree == 1:
            return self._exact_rational()
        k = 0
        while True:
            lo, hi = self.field.isolating_interval(k)
            vlo, vhi = _interval_eval(self.coeffs, lo, hi)
            if vhi - vlo <= 2 * precision:
                return (vlo + vhi) / 2
            k += 4

    def _exact_rational(self) -> Fraction:
        return self.coeffs[0]

    def __float__(self):
        return float(self.to_real(Fraction(1, 2**60)))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __str__(self):
        if self.is_rational():
            return _frac_str(self.coeffs[0])
        return "[" + ", ".join(_frac_str(c) for c in self.coeffs) + "]"

    def __repr__(self):
        return f"Scalar({self})"


def field_new(minpoly, root_interval, *, assume_irreducible: bool = False) -> FieldSpec:
    lo, hi = root_interval
    return FieldSpec(tuple(minpoly), lo, hi, assume_irreducible)


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def neg(a: Scalar) -> Scalar:
    return -a


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def inv(a: Scalar) -> Scalar:
    return a.inv()


def sign_of(a: Scalar) -> int:
    return a.sign()


def to_real(a: Scalar, precision) -> Fraction:
    return a.to_real(precision)


QQ = FieldSpec.rationals()
SQRT2 = FieldSpec((-2, 0, 1), 1, Fraction(3, 2))
