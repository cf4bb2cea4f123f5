"""Formal integer combinations of model divisors d[lam, mu] and their invariants.

d[lam, mu] is the zero divisor of g(<z, lam> + i<z, mu>) on C^m, with g entire
and simply vanishing on the Gaussian integers. Everything here is exact over a
single number field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, MixedFieldsError, RDependentPairError
from .field import FieldSpec, Scalar
from .wedge import embed, rational_rank

Vector = tuple  # tuple[Scalar, ...]


def _as_vector(field: FieldSpec, v: Iterable) -> Vector:
    return tuple(field.scalar(x) for x in v)


def unit_vector(field: FieldSpec, m: int, i: int) -> Vector:
    """e^(i+1) in K^m (``i`` is 0-based)."""
    return tuple(field.one if k == i else field.zero for k in range(m))


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise DimensionMismatchError(f"lengths {len(u)} and {len(v)} differ")
    acc = u[0] * 0
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def scale(c, v: Sequence[Scalar]) -> Vector:
    return tuple(c * x for x in v)


def vadd(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"lengths {len(u)} and {len(v)} differ")
    return tuple(a + b for a, b in zip(u, v))


@dataclass(frozen=True)
class Pair:
    lam: Vector
    mu: Vector
    mult: int = 1

    def __post_init__(self):
        if len(self.lam) != len(self.mu):
            raise DimensionMismatchError(
                f"lambda has length {len(self.lam)}, mu has length {len(self.mu)}"
            )
        if isinstance(self.mult, bool) or not isinstance(self.mult, int) or self.mult == 0:
            raise ValueError(f"multiplicity must be a nonzero integer, got {self.mult!r}")
        if all(x.is_zero() for x in self.lam) and all(x.is_zero() for x in self.mu):
            raise ValueError("lambda = mu = 0 gives the unit divisor; not a model pair")

    @property
    def m(self) -> int:
        return len(self.lam)


@dataclass(frozen=True)
class Divisor:
    field: FieldSpec
    m: int
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        for p in self.pairs:
            if p.m != self.m:
                raise DimensionMismatchError(f"pair of dimension {p.m} in a divisor with m={self.m}")
            for x in (*p.lam, *p.mu):
                if x.field != self.field:
                    raise MixedFieldsError("pair entries do not belong to the divisor's field")

    @classmethod
    def build(cls, field: FieldSpec, m: int, pairs: Iterable) -> "Divisor":
        """Build from ``(lam, mu)`` or ``(lam, mu, mult)`` tuples of coercible entries."""
        out = []
        for item in pairs:
            lam, mu, *rest = item
            mult = rest[0] if rest else 1
            out.append(Pair(_as_vector(field, lam), _as_vector(field, mu), mult))
        return cls(field, m, tuple(out))

    def __add__(self, other: "Divisor") -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        if other.field != self.field:
            raise MixedFieldsError("cannot add divisors over different fields")
        if other.m != self.m:
            raise DimensionMismatchError(f"dimensions differ: {self.m} vs {other.m}")
        return Divisor(self.field, self.m, self.pairs + other.pairs)

    def __neg__(self) -> "Divisor":
        return Divisor(self.field, self.m, tuple(Pair(p.lam, p.mu, -p.mult) for p in self.pairs))

    def __len__(self):
        return len(self.pairs)


# ---------------------------------------------------------------------------
# matrices over K


@dataclass(frozen=True)
class ScalarMatrix:
    entries: tuple  # tuple of row tuples of Scalars

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if any(len(r) != len(rows) for r in rows):
            raise DimensionMismatchError("matrix is not square")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, jk):
        j, k = jk
        return self.entries[j][k]

    def transpose(self) -> "ScalarMatrix":
        n = self.size
        return ScalarMatrix(tuple(tuple(self.entries[k][j] for k in range(n)) for j in range(n)))

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        return ScalarMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        return ScalarMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        n = self.size
        cols = other.transpose().entries
        return ScalarMatrix(tuple(tuple(dot(self.entries[j], cols[k]) for k in range(n)) for j in range(n)))

    def scaled(self, c) -> "ScalarMatrix":
        return ScalarMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def _check(self, other):
        if self.size != other.size:
            raise DimensionMismatchError(f"matrix sizes differ: {self.size} vs {other.size}")

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def to_floats(self) -> list[list[float]]:
        return [[float(a) for a in r] for r in self.entries]

    def __eq__(self, other):
        if not isinstance(other, ScalarMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)


class GramMatrix(ScalarMatrix):
    pass


class AMatrix(ScalarMatrix):
    """Skew-symmetric matrix; the invariant is checked on construction."""

    def __post_init__(self):
        super().__post_init__()
        n = self.size
        for j in range(n):
            for k in range(j, n):
                if self.entries[j][k] != -self.entries[k][j]:
                    raise AssertionError(f"A-matrix not skew-symmetric at ({j}, {k})")


def zero_matrix(field: FieldSpec, m: int) -> ScalarMatrix:
    return ScalarMatrix(tuple(tuple(field.zero for _ in range(m)) for _ in range(m)))


def identity(field: FieldSpec, m: int) -> ScalarMatrix:
    return ScalarMatrix(tuple(unit_vector(field, m, j) for j in range(m)))


def outer(lam: Sequence[Scalar], mu: Sequence[Scalar]) -> GramMatrix:
    if len(lam) != len(mu):
        raise DimensionMismatchError(f"lengths {len(lam)} and {len(mu)} differ")
    return GramMatrix(tuple(tuple(a * b for b in mu) for a in lam))


def gram_sum(d: Divisor) -> GramMatrix:
    acc = zero_matrix(d.field, d.m)
    for p in d.pairs:
        acc = acc + outer(p.lam, p.mu).scaled(p.mult)
    return GramMatrix(acc.entries)


def is_symmetric(g: ScalarMatrix) -> bool:
    return g.entries == g.transpose().entries


def asymmetric_entries(g: ScalarMatrix) -> list[tuple[int, int]]:
    n = g.size
    return [(j, k) for j in range(n) for k in range(j + 1, n) if g[j, k] != g[k, j]]


def a_matrix(d: Divisor) -> AMatrix:
    """sum_j mult_j * ((mu, lam) - (lam, mu))."""
    acc = zero_matrix(d.field, d.m)
    for p in d.pairs:
        acc = acc + (outer(p.mu, p.lam) - outer(p.lam, p.mu)).scaled(p.mult)
    return AMatrix(acc.entries)


def ap_modulus_criterion(d: Divisor) -> bool:
    """True iff d is the divisor of a holomorphic function with almost-periodic modulus.

    Every formal combination of model divisors is almost-periodic, so the
    test reduces to A(d) == 0.
    """
    return a_matrix(d).is_zero()


def congruence(B: ScalarMatrix, A0: ScalarMatrix) -> AMatrix:
    """B^T A0 B."""
    if not isinstance(B, ScalarMatrix):
        B = ScalarMatrix(B)
    if B.size != A0.size:
        raise DimensionMismatchError(f"B is {B.size}x{B.size}, A0 is {A0.size}x{A0.size}")
    return AMatrix((B.transpose() @ A0 @ B).entries)


def r_dependent(lam: Sequence[Scalar], mu: Sequence[Scalar]) -> bool:
    """All 2x2 minors of the 2 x m matrix [lam; mu] vanish."""
    m = len(lam)
    return all(
        (lam[j] * mu[k] - lam[k] * mu[j]).is_zero() for j in range(m) for k in range(j + 1, m)
    )


def q_dependent(lam: Sequence[Scalar], mu: Sequence[Scalar], field: FieldSpec | None = None) -> bool:
    field = field or lam[0].field
    return rational_rank([embed(lam, field), embed(mu, field)]) < 2


def periods(lam: Sequence[Scalar], mu: Sequence[Scalar]) -> tuple[Vector, Vector]:
    """Real translations shifting <z,lam> + i<z,mu> by 1 and by i respectively."""
    ll, mm, lm = dot(lam, lam), dot(mu, mu), dot(lam, mu)
    den = ll * mm - lm * lm
    if den.is_zero():
        raise RDependentPairError("lambda and mu are linearly dependent over R")
    p1 = tuple((mm * a - lm * b) / den for a, b in zip(lam, mu))
    p2 = tuple((ll * b - lm * a) / den for a, b in zip(lam, mu))
    return p1, p2


@dataclass(frozen=True)
class PairClass:
    q_dependent: bool
    r_dependent: bool
    periodic: bool
    holo_ap_divisor: bool
    ap_modulus: bool

    def as_dict(self) -> dict:
        return {
            "q_dependent": self.q_dependent,
            "r_dependent": self.r_dependent,
            "periodic": self.periodic,
            "holo_ap_divisor": self.holo_ap_divisor,
            "ap_modulus": self.ap_modulus,
        }


def classify_pair(lam: Sequence[Scalar], mu: Sequence[Scalar]) -> PairClass:
    qd = q_dependent(lam, mu)
    rd = r_dependent(lam, mu)
    return PairClass(
        q_dependent=qd,
        r_dependent=rd,
        periodic=qd or not rd,
        holo_ap_divisor=qd,
        ap_modulus=rd or qd,
    )
