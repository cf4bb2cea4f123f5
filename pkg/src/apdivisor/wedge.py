"""Sparse exact exterior square of Q^(m*deg).

A vector in K^m (K = Q(theta) of degree ``deg``) is flattened coordinate by
coordinate in the power basis, so ``(1 + theta, 3)`` over Q(sqrt 2) becomes
``(1, 1, 3, 0)``. The class of a model divisor d[lam, mu] is modelled by
``embed(lam) ^ embed(mu)``; this map is Q-bilinear and alternating, which is
all the structure the class map is known to have.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatchError, MixedFieldsError
from .field import FieldSpec, Scalar, _frac_str


@dataclass(frozen=True)
class QVector:
    coords: tuple
    m: int
    deg: int

    def __post_init__(self):
        if len(self.coords) != self.m * self.deg:
            raise DimensionMismatchError(
                f"expected {self.m * self.deg} coordinates, got {len(self.coords)}"
            )

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: "QVector") -> "QVector":
        _check_dims(self, other)
        return QVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.m, self.deg)

    def scaled(self, q) -> "QVector":
        q = Fraction(q)
        return QVector(tuple(q * a for a in self.coords), self.m, self.deg)

    def is_zero(self) -> bool:
        return not any(self.coords)


def _check_dims(u: QVector, v: QVector):
    if (u.m, u.deg) != (v.m, v.deg):
        raise DimensionMismatchError(f"shapes differ: m={u.m},deg={u.deg} vs m={v.m},deg={v.deg}")


def embed(v: Sequence, field: FieldSpec) -> QVector:
    """Flatten a vector of m field elements into m*deg rationals."""
    coords = []
    for x in v:
        if isinstance(x, Scalar) and x.field != field:
            raise MixedFieldsError("vector entry belongs to a different field")
        coords.extend(field.scalar(x).coeffs)
    return QVector(tuple(coords), len(v), field.degree)


@dataclass(frozen=True)
class Wedge2:
    """Element of the exterior square; ``terms`` is sorted, 0-based, no zeros."""

    dim: int
    terms: tuple = ()

    @classmethod
    def from_mapping(cls, dim: int, coeffs: Mapping) -> "Wedge2":
        items = []
        for (i, j), c in coeffs.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"index pair ({i}, {j}) not strictly increasing within {dim}")
            if c:
                items.append(((i, j), Fraction(c)))
        return cls(dim, tuple(sorted(items)))

    @classmethod
    def zero(cls, dim: int) -> "Wedge2":
        return cls(dim, ())

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Wedge2") -> "Wedge2":
        if not isinstance(other, Wedge2):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(f"wedge dimensions differ: {self.dim} vs {other.dim}")
        acc = self.as_dict()
        for key, c in other.terms:
            acc[key] = acc.get(key, 0) + c
        return Wedge2.from_mapping(self.dim, acc)

    def __neg__(self) -> "Wedge2":
        return Wedge2(self.dim, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "Wedge2") -> "Wedge2":
        return self + (-other)

    def __rmul__(self, n: int) -> "Wedge2":
        return scale_wedge(n, self)

    def serialize(self) -> list[tuple[int, int, str]]:
        """Lexicographic ``(i, j, "p/q")`` triples with 1-based basis indices."""
        return [(i + 1, j + 1, _fmt(c)) for (i, j), c in self.terms]

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({_fmt(c)})u{i + 1}^u{j + 1}" for (i, j), c in self.terms)


def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def wedge(u: QVector, v: QVector) -> Wedge2:
    _check_dims(u, v)
    nz_u = [i for i, a in enumerate(u.coords) if a]
    nz_v = [j for j, b in enumerate(v.coords) if b]
    acc: dict = {}
    for i in nz_u:
        for j in nz_v:
            if i == j:
                continue
            c = u.coords[i] * v.coords[j]
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            acc[key] = acc.get(key, 0) + sign * c
    return Wedge2.from_mapping(len(u), acc)


def add_wedge(a: Wedge2, b: Wedge2) -> Wedge2:
    return a + b


def scale_wedge(n: int, a: Wedge2) -> Wedge2:
    n = Fraction(n)
    if n == 0:
        return Wedge2.zero(a.dim)
    return Wedge2(a.dim, tuple((k, n * c) for k, c in a.terms))


def is_zero(w: Wedge2) -> bool:
    return w.is_zero()


def wedge_sum(items: Iterable[Wedge2], dim: int) -> Wedge2:
    acc: dict = {}
    for w in items:
        if w.dim != dim:
            raise DimensionMismatchError(f"wedge dimensions differ: {w.dim} vs {dim}")
        for key, c in w.terms:
            acc[key] = acc.get(key, 0) + c
    return Wedge2.from_mapping(dim, acc)


def class_of(d) -> Wedge2:
    """Sum of mult * embed(lam) ^ embed(mu) over the pairs of a divisor."""
    dim = d.m * d.field.degree
    terms = []
    for pair in d.pairs:
        for x in (*pair.lam, *pair.mu):
            if x.field != d.field:
                raise MixedFieldsError("pair entries do not belong to the divisor's field")
        w = wedge(embed(pair.lam, d.field), embed(pair.mu, d.field))
        terms.append(scale_wedge(pair.mult, w))
    return wedge_sum(terms, dim)


def rational_rank(vectors: Sequence[QVector]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    rows = [list(v.coords) for v in vectors]
    if not rows:
        return 0
    rank, ncols = 0, len(rows[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / pv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank
