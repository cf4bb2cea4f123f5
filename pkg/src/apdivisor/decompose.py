"""Rewrite a divisor with symmetric Gram sum into degenerate pairs.

The class sum_j W(lam^j, mu^j) is expanded by additivity into coordinate
terms W(alpha e^p, beta e^q), sorted into buckets (p, q) with p <= q, and each
off-diagonal bucket (whose alpha*beta sum is then forced to vanish) is
collapsed two terms at a time into classes of the form W(gamma nu, nu).

Every rewrite is logged as a ``Step``; ``audit_certificate`` re-checks each
step locally in the exterior-square model and ``verify_certificate`` checks
the end-to-end identity from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .divisor import Divisor, Pair, asymmetric_entries, gram_sum, is_symmetric, scale, unit_vector, vadd
from .errors import (
    ConstraintViolatedError,
    InternalConstraintViolatedError,
    MixedFieldsError,
    NotSymmetricGramError,
)
from .field import FieldSpec, Scalar
from .wedge import Wedge2, class_of, embed, wedge, wedge_sum

DROP_ZERO = "drop-zero"
FLIP_SIGN = "flip-sign"
DIAGONAL_DIRECT = "diagonal-direct"
W1_MERGE = "w1-merge"
EXPAND = "expand"


@dataclass(frozen=True)
class Term:
    """W(alpha e^p, beta e^q); axes are 0-based."""

    p: int
    q: int
    alpha: Scalar
    beta: Scalar

    def literal(self) -> str:
        return f"({self.p + 1},{self.q + 1},{self.alpha},{self.beta})"


@dataclass(frozen=True)
class TermList:
    axis_p: int
    axis_q: int
    terms: tuple = ()

    def __post_init__(self):
        if not self.axis_p < self.axis_q:
            raise ValueError(f"need axis_p < axis_q, got ({self.axis_p}, {self.axis_q})")
        object.__setattr__(self, "terms", tuple(self.terms))

    def pairing_sum(self, field: FieldSpec) -> Scalar:
        acc = field.zero
        for a, b in self.terms:
            acc = acc + a * b
        return acc


@dataclass(frozen=True)
class DegeneratePair:
    gamma: Scalar
    nu: tuple

    def __post_init__(self):
        if all(x.is_zero() for x in self.nu):
            raise ValueError("degenerate pair with nu = 0")

    @property
    def lam(self) -> tuple:
        return scale(self.gamma, self.nu)

    def literal(self) -> str:
        return f"(gamma={self.gamma}, nu=[{', '.join(map(str, self.nu))}])"


@dataclass(frozen=True)
class Step:
    rule: str
    bucket: tuple | None = None
    consumed: tuple = ()
    produced: tuple = ()
    emitted: tuple = ()
    source: int | None = None  # pair index for EXPAND

    def literal(self) -> str:
        parts = [self.rule]
        if self.source is not None:
            parts.append(f"source={self.source}")
        if self.bucket is not None:
            parts.append(f"bucket=({self.bucket[0] + 1},{self.bucket[1] + 1})")
        parts.append("consumed=[" + " ".join(t.literal() for t in self.consumed) + "]")
        parts.append("produced=[" + " ".join(t.literal() for t in self.produced) + "]")
        parts.append("emitted=[" + " ".join(d.literal() for d in self.emitted) + "]")
        return " ".join(parts)

    def as_dict(self) -> dict:
        def term(t):
            return [t.p + 1, t.q + 1, str(t.alpha), str(t.beta)]

        return {
            "rule": self.rule,
            "source": self.source,
            "bucket": None if self.bucket is None else [self.bucket[0] + 1, self.bucket[1] + 1],
            "consumed": [term(t) for t in self.consumed],
            "produced": [term(t) for t in self.produced],
            "emitted": [_pair_dict(d) for d in self.emitted],
        }


def _pair_dict(d: DegeneratePair) -> dict:
    return {"gamma": str(d.gamma), "nu": [str(x) for x in d.nu]}


@dataclass(frozen=True)
class Certificate:
    steps: tuple = ()
    result: tuple = ()
    field: FieldSpec | None = dc_field(default=None, compare=False)
    m: int | None = None

    def lines(self, d: Divisor | None = None) -> list[str]:
        out = [f"step {i} {s.literal()}" for i, s in enumerate(self.steps, 1)]
        out += [f"pair {k} {p.literal()}" for k, p in enumerate(self.result, 1)]
        if d is not None:
            out.append("lhs " + _wedge_text(class_of(d)))
            out.append("rhs " + _wedge_text(degenerate_class(self.result, d.field, d.m)))
        return out

    def to_text(self, d: Divisor | None = None) -> str:
        return "\n".join(self.lines(d)) + "\n"

    def as_dict(self, d: Divisor | None = None) -> dict:
        out = {
            "steps": [s.as_dict() for s in self.steps],
            "pairs": [_pair_dict(p) for p in self.result],
        }
        if d is not None:
            out["lhs"] = [list(t) for t in class_of(d).serialize()]
            out["rhs"] = [list(t) for t in degenerate_class(self.result, d.field, d.m).serialize()]
        return out


def _wedge_text(w: Wedge2) -> str:
    return "[" + " ".join(f"({i},{j},{c})" for i, j, c in w.serialize()) + "]"


# ---------------------------------------------------------------------------


def _term_wedge(t: Term, field: FieldSpec, m: int) -> Wedge2:
    u = embed(scale(t.alpha, unit_vector(field, m, t.p)), field)
    v = embed(scale(t.beta, unit_vector(field, m, t.q)), field)
    return wedge(u, v)


def _pair_wedge(d: DegeneratePair, field: FieldSpec) -> Wedge2:
    return wedge(embed(d.lam, field), embed(d.nu, field))


def degenerate_class(pairs: Sequence[DegeneratePair], field: FieldSpec, m: int) -> Wedge2:
    return wedge_sum((_pair_wedge(d, field) for d in pairs), m * field.degree)


def degenerate_divisor(pairs: Sequence[DegeneratePair], field: FieldSpec, m: int) -> Divisor:
    """The divisor sum_k d[gamma_k nu^k, nu^k]."""
    return Divisor(field, m, tuple(Pair(d.lam, d.nu, 1) for d in pairs))


def lemma_w1_reduce(
    t: TermList, field: FieldSpec, m: int
) -> tuple[list[DegeneratePair], Certificate]:
    """Collapse sum_j W(alpha_j e^p, beta_j e^q) with sum alpha_j beta_j = 0.

    The last two terms (a, b), (c, d) are replaced by the single term
    (a, b + d*c/a) plus three degenerate classes
    W((a/c) c e^p, c e^p), W((a/c)(dc/a) e^q, (dc/a) e^q) and
    W((c/a)(a e^p + d e^q), a e^p + d e^q), until nothing is left.
    """
    p, q = t.axis_p, t.axis_q
    steps: list[Step] = []
    terms: list[tuple[Scalar, Scalar]] = []
    for a, b in t.terms:
        a, b = field.scalar(a), field.scalar(b)
        if a.is_zero() or b.is_zero():
            steps.append(Step(DROP_ZERO, (p, q), consumed=(Term(p, q, a, b),)))
        else:
            terms.append((a, b))
    total = TermList(p, q, tuple(terms)).pairing_sum(field)
    if not total.is_zero():
        raise ConstraintViolatedError(f"sum alpha*beta = {total} != 0 on axes ({p + 1}, {q + 1})")

    e_p, e_q = unit_vector(field, m, p), unit_vector(field, m, q)
    emitted_all: list[DegeneratePair] = []
    while len(terms) >= 2:
        (a, b), (c, d) = terms[-2], terms[-1]
        dc_a = d * c / a
        emitted = (
            DegeneratePair(a / c, scale(c, e_p)),
            DegeneratePair(a / c, scale(dc_a, e_q)),
            DegeneratePair(c / a, vadd(scale(a, e_p), scale(d, e_q))),
        )
        new_beta = b + dc_a
        consumed = (Term(p, q, a, b), Term(p, q, c, d))
        residual = Term(p, q, a, new_beta)
        steps.append(Step(W1_MERGE, (p, q), consumed=consumed, produced=(residual,), emitted=emitted))
        terms = terms[:-2]
        if new_beta.is_zero():
            steps.append(Step(DROP_ZERO, (p, q), consumed=(residual,)))
        else:
            terms.append((a, new_beta))
        emitted_all.extend(emitted)
        running = TermList(p, q, tuple(terms)).pairing_sum(field)
        if not running.is_zero():
            raise InternalConstraintViolatedError("sum alpha*beta not conserved by merge")
    if terms:
        # a single surviving term would need alpha*beta = 0 with both nonzero
        raise InternalConstraintViolatedError(f"unreduced term {terms[0]} left in bucket")
    return emitted_all, Certificate(tuple(steps), tuple(emitted_all), field, m)


def bucketize(d: Divisor) -> tuple[dict, list[Step]]:
    """Expand pairs into coordinate terms grouped by (p, q), p <= q.

    Terms appear in file order of the pairs, then row-major in (p, q).
    Multiplicity k is folded by |k|-fold repetition, with alpha negated when
    k < 0; a term on (p, q) with p > q becomes (-beta, alpha) on (q, p).
    Returns ``{(p, q): [(alpha, beta), ...]}`` and the expansion steps.
    """
    field, m = d.field, d.m
    buckets: dict = {}
    steps: list[Step] = []
    for idx, pair in enumerate(d.pairs):
        sign = 1 if pair.mult > 0 else -1
        raw = [
            Term(p, q, sign * pair.lam[p], pair.mu[q])
            for p in range(m)
            for q in range(m)
            if not pair.lam[p].is_zero() and not pair.mu[q].is_zero()
        ]
        for _ in range(abs(pair.mult)):
            steps.append(Step(EXPAND, source=idx, produced=tuple(raw)))
            for t in raw:
                if t.p > t.q:
                    flipped = Term(t.q, t.p, -t.beta, t.alpha)
                    steps.append(Step(FLIP_SIGN, (t.q, t.p), consumed=(t,), produced=(flipped,)))
                    t = flipped
                buckets.setdefault((t.p, t.q), []).append((t.alpha, t.beta))
    return {k: buckets[k] for k in sorted(buckets)}, steps


def decompose(d: Divisor) -> tuple[list[DegeneratePair], Certificate]:
    """Degenerate pairs (gamma_k, nu^k) with class_of(d) = sum_k W(gamma_k nu^k, nu^k)."""
    g = gram_sum(d)
    if not is_symmetric(g):
        bad = asymmetric_entries(g)
        desc = ", ".join(f"G[{j + 1},{k + 1}]={g[j, k]} vs G[{k + 1},{j + 1}]={g[k, j]}" for j, k in bad)
        raise NotSymmetricGramError(f"Gram sum is not symmetric: {desc}", bad)
    field, m = d.field, d.m
    buckets, steps = bucketize(d)
    result: list[DegeneratePair] = []
    for (p, q), terms in buckets.items():
        if p == q:
            for a, b in terms:
                pair = DegeneratePair(a / b, scale(b, unit_vector(field, m, p)))
                steps.append(Step(DIAGONAL_DIRECT, (p, p), consumed=(Term(p, p, a, b),), emitted=(pair,)))
                result.append(pair)
            continue
        tl = TermList(p, q, tuple(terms))
        if not tl.pairing_sum(field).is_zero():
            raise InternalConstraintViolatedError(f"bucket ({p + 1}, {q + 1}) has nonzero alpha*beta sum")
        pairs, cert = lemma_w1_reduce(tl, field, m)
        steps.extend(cert.steps)
        result.extend(pairs)
    return result, Certificate(tuple(steps), tuple(result), field, m)


def verify_certificate(d: Divisor, pairs: Sequence[DegeneratePair]) -> bool:
    """class_of(d) == sum_k W(gamma_k nu^k, nu^k), recomputed from scratch."""
    for pair in pairs:
        for x in (pair.gamma, *pair.nu):
            if x.field != d.field:
                raise MixedFieldsError("degenerate pair over a different field")
        if len(pair.nu) != d.m:
            raise MixedFieldsError(f"degenerate pair of dimension {len(pair.nu)} vs m={d.m}")
    return class_of(d) == degenerate_class(pairs, d.field, d.m)


def audit_certificate(d: Divisor, cert: Certificate) -> bool:
    """Replay every step and check it is class-preserving on its own.

    Each step must satisfy W(consumed) = W(produced) + sum W(emitted) (for
    expansion steps, W(source pair) = W(produced)); the emitted pairs in step
    order must equal the result, and the result must verify end to end.
    """
    field, m = d.field, d.m
    dim = m * field.degree
    emitted: list[DegeneratePair] = []
    for s in cert.steps:
        if s.rule == EXPAND:
            pair = d.pairs[s.source]
            lhs = wedge(embed(pair.lam, field), embed(pair.mu, field))
            lhs = lhs if pair.mult > 0 else -lhs
        else:
            lhs = wedge_sum((_term_wedge(t, field, m) for t in s.consumed), dim)
        rhs = wedge_sum((_term_wedge(t, field, m) for t in s.produced), dim)
        rhs = rhs + degenerate_class(s.emitted, field, m)
        if lhs != rhs:
            return False
        emitted.extend(s.emitted)
    if tuple(emitted) != tuple(cert.result):
        return False
    return verify_certificate(d, cert.result)
