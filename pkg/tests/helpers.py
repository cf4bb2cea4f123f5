"""Random instance generators and independent oracles shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from apdivisor.divisor import Divisor, Pair, gram_sum, outer, unit_vector
from apdivisor.field import FieldSpec

SQRT2 = FieldSpec((-2, 0, 1), 1, Fraction(3, 2))
CBRT2 = FieldSpec((-2, 0, 0, 1), 1, 2)
QQ = FieldSpec.rationals()


def rand_q(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_scalar(rng: random.Random, field: FieldSpec, zero_prob: float = 0.0):
    if rng.random() < zero_prob:
        return field.zero
    return field.scalar([rand_q(rng) for _ in range(field.degree)])


def rand_nonzero(rng: random.Random, field: FieldSpec):
    while True:
        x = rand_scalar(rng, field)
        if not x.is_zero():
            return x


def rand_vector(rng: random.Random, field: FieldSpec, m: int, zero_prob: float = 0.3):
    return tuple(rand_scalar(rng, field, zero_prob) for _ in range(m))


def rand_pair(rng: random.Random, field: FieldSpec, m: int, mult_range: int = 2) -> Pair:
    while True:
        lam, mu = rand_vector(rng, field, m), rand_vector(rng, field, m)
        if any(not x.is_zero() for x in lam + mu):
            mult = rng.choice([k for k in range(-mult_range, mult_range + 1) if k])
            return Pair(lam, mu, mult)


def rand_divisor(rng: random.Random, field: FieldSpec, m: int, n: int) -> Divisor:
    return Divisor(field, m, tuple(rand_pair(rng, field, m) for _ in range(n)))


def symmetric_divisor(rng: random.Random, field: FieldSpec, m: int, max_pairs: int = 8) -> Divisor:
    """Random divisor whose Gram sum is symmetric, with at most ``max_pairs`` pairs.

    Mixes three constructions: pairs plus their transposes, pairs plus
    corrections d[e^q, a e^p] cancelling the asymmetry, and ℝ-proportional
    pairs d[g v, v].
    """
    while True:
        pairs: list[Pair] = []
        style = rng.randrange(3)
        k = rng.randint(1, max_pairs // 2)
        base = [rand_pair(rng, field, m) for _ in range(k)]
        if style == 0:
            for p in base:
                pairs += [p, Pair(p.mu, p.lam, p.mult)]
        elif style == 1:
            pairs += base
            g = gram_sum(Divisor(field, m, tuple(base)))
            for p in range(m):
                for q in range(p + 1, m):
                    a = g[p, q] - g[q, p]
                    if not a.is_zero():
                        pairs.append(Pair(unit_vector(field, m, q), tuple(a * x for x in unit_vector(field, m, p))))
        for _ in range(rng.randint(0 if style < 2 else 1, 2)):
            v = rand_vector(rng, field, m)
            if all(x.is_zero() for x in v):
                continue
            gamma = rand_scalar(rng, field)
            pairs.append(Pair(tuple(gamma * x for x in v), v, rng.choice([-1, 1, 2])))
        if not pairs or len(pairs) > max_pairs:
            continue
        rng.shuffle(pairs)
        d = Divisor(field, m, tuple(pairs))
        g = gram_sum(d)
        assert g.entries == g.transpose().entries
        return d


# ---------------------------------------------------------------------------
# brute-force wedge oracle, independent of apdivisor.wedge


def flatten(v, deg: int) -> list[Fraction]:
    """Coordinate-by-coordinate: index = coord * deg + power."""
    out = []
    for x in v:
        c = list(x.coeffs) + [Fraction(0)] * (deg - len(x.coeffs))
        out += c[:deg]
    return out


def brute_wedge(u: list[Fraction], v: list[Fraction]) -> dict:
    """All 2x2 minors u_i v_j - u_j v_i, 1-based, zeros dropped."""
    out = {}
    for i, j in combinations(range(len(u)), 2):
        c = u[i] * v[j] - u[j] * v[i]
        if c:
            out[(i + 1, j + 1)] = c
    return out


def brute_sum(items) -> dict:
    acc: dict = {}
    for w in items:
        for key, c in w.items():
            acc[key] = acc.get(key, 0) + c
    return {k: c for k, c in acc.items() if c}


def brute_class(d: Divisor) -> dict:
    deg = d.field.degree
    return brute_sum(
        {k: p.mult * c for k, c in brute_wedge(flatten(p.lam, deg), flatten(p.mu, deg)).items()}
        for p in d.pairs
    )


def brute_outer_a(d: Divisor) -> list[list]:
    """A(d) entry by entry from the mixed products."""
    m = d.m
    return [
        [sum((p.mult * (p.mu[j] * p.lam[k] - p.lam[j] * p.mu[k]) for p in d.pairs), d.field.zero) for k in range(m)]
        for j in range(m)
    ]


__all__ = [
    "QQ", "SQRT2", "CBRT2", "rand_q", "rand_scalar", "rand_nonzero", "rand_vector", "rand_pair",
    "rand_divisor", "symmetric_divisor", "flatten", "brute_wedge", "brute_sum", "brute_class",
    "brute_outer_a", "outer",
]
