import random
from dataclasses import replace
from fractions import Fraction

import pytest

from apdivisor.decompose import (
    DIAGONAL_DIRECT,
    DROP_ZERO,
    W1_MERGE,
    DegeneratePair,
    TermList,
    audit_certificate,
    bucketize,
    decompose,
    degenerate_divisor,
    lemma_w1_reduce,
    verify_certificate,
)
from apdivisor.divisor import Divisor, a_matrix, unit_vector
from apdivisor.errors import ConstraintViolatedError, NotSymmetricGramError
from helpers import QQ, SQRT2, brute_class, brute_sum, brute_wedge, flatten, rand_nonzero, symmetric_divisor

r2 = SQRT2.theta
WORKED_CLASS = {(1, 4): Fraction(1), (2, 3): Fraction(-1)}  # u1^u4 - u2^u3


def brute_pairs_class(pairs, field):
    deg = field.degree
    return brute_sum(brute_wedge(flatten(p.lam, deg), flatten(p.nu, deg)) for p in pairs)


def brute_terms_class(terms, p, q, field, m):
    deg = field.degree
    out = []
    for a, b in terms:
        u = [field.zero] * m
        v = [field.zero] * m
        u[p], v[q] = field.scalar(a), field.scalar(b)
        out.append(brute_wedge(flatten(u, deg), flatten(v, deg)))
    return brute_sum(out)


def worked_divisor():
    return Divisor.build(SQRT2, 2, [((1, 0), (0, r2)), ((r2, 0), (0, -1))])


class TestMergeReduction:
    def test_worked_instance(self):
        tl = TermList(0, 1, ((SQRT2.one, r2), (r2, SQRT2(-1))))
        pairs, cert = lemma_w1_reduce(tl, SQRT2, 2)
        half = r2 / 2
        expect = [
            DegeneratePair(half, (r2, SQRT2.zero)),
            DegeneratePair(half, (SQRT2.zero, -r2)),
            DegeneratePair(r2, (SQRT2.one, SQRT2(-1))),
        ]
        assert pairs == expect
        assert brute_terms_class(tl.terms, 0, 1, SQRT2, 2) == WORKED_CLASS
        assert brute_pairs_class(pairs, SQRT2) == WORKED_CLASS

    def test_empty(self):
        pairs, cert = lemma_w1_reduce(TermList(0, 1, ()), QQ, 2)
        assert pairs == [] and cert.steps == ()

    def test_rational(self):
        tl = TermList(0, 1, ((QQ(1), QQ(1)), (QQ(-1), QQ(1))))
        pairs, _ = lemma_w1_reduce(tl, QQ, 2)
        assert len(pairs) == 3
        for p in pairs:
            assert p.gamma.is_rational()
            assert brute_pairs_class([p], QQ) == {}

    def test_constraint(self):
        with pytest.raises(ConstraintViolatedError):
            lemma_w1_reduce(TermList(0, 1, ((QQ(1), QQ(1)),)), QQ, 2)

    def test_zero_terms_dropped(self):
        tl = TermList(0, 1, ((QQ(0), QQ(3)), (QQ(2), QQ(0))))
        pairs, cert = lemma_w1_reduce(tl, QQ, 2)
        assert pairs == [] and [s.rule for s in cert.steps] == [DROP_ZERO, DROP_ZERO]

    def test_axes_ordered(self):
        with pytest.raises(ValueError):
            TermList(1, 1, ())

    @pytest.mark.parametrize("field", [QQ, SQRT2], ids=["Q", "sqrt2"])
    def test_random_lists(self, field):
        """Identity, conservation and the 3(n-1) bound on random zero-sum lists."""
        rng = random.Random(10)
        for _ in range(150):
            n = rng.randint(2, 6)
            m = rng.choice([2, 3])
            p, q = sorted(rng.sample(range(m), 2))
            terms = [(rand_nonzero(rng, field), rand_nonzero(rng, field)) for _ in range(n - 1)]
            s = sum((a * b for a, b in terms), field.zero)
            if s.is_zero():
                continue
            a = rand_nonzero(rng, field)
            terms.append((a, -s / a))
            rng.shuffle(terms)
            tl = TermList(p, q, tuple(terms))
            pairs, cert = lemma_w1_reduce(tl, field, m)
            assert brute_pairs_class(pairs, field) == brute_terms_class(terms, p, q, field, m)
            merges = [st for st in cert.steps if st.rule == W1_MERGE]
            assert len(merges) <= n - 1
            assert len(pairs) == 3 * len(merges) <= 3 * (n - 1)
            if not any(st.rule == DROP_ZERO for st in cert.steps):
                assert len(pairs) == 3 * (n - 1)
            for st in merges:
                (a1, b1), (c1, d1) = [(t.alpha, t.beta) for t in st.consumed]
                (r,) = st.produced
                assert a1 * b1 + c1 * d1 == r.alpha * r.beta

    def test_merge_identity_symbolic(self):
        """W(a e1, b e2) + W(c e1, d e2) against the residual plus three degenerate classes."""
        rng = random.Random(11)
        for _ in range(200):
            a, b, c, d = (rand_nonzero(rng, SQRT2) for _ in range(4))
            e1, e2 = unit_vector(SQRT2, 2, 0), unit_vector(SQRT2, 2, 1)
            dc_a = d * c / a
            lhs = brute_terms_class([(a, b), (c, d)], 0, 1, SQRT2, 2)
            rhs = brute_sum([
                brute_terms_class([(a, b + dc_a)], 0, 1, SQRT2, 2),
                brute_pairs_class([
                    DegeneratePair(a / c, tuple(c * x for x in e1)),
                    DegeneratePair(a / c, tuple(dc_a * x for x in e2)),
                    DegeneratePair(c / a, tuple(a * x + d * y for x, y in zip(e1, e2))),
                ], SQRT2),
            ])
            assert lhs == rhs


class TestBucketize:
    def test_coordinate_expansion(self):
        d = Divisor.build(QQ, 2, [((1, 1), (0, 1))])
        buckets, _ = bucketize(d)
        assert buckets == {(0, 1): [(QQ(1), QQ(1))], (1, 1): [(QQ(1), QQ(1))]}

    def test_flip(self):
        buckets, _ = bucketize(Divisor.build(QQ, 2, [((0, 1), (1, 0))]))
        assert buckets == {(0, 1): [(QQ(-1), QQ(1))]}

    def test_negative_multiplicity(self):
        buckets, _ = bucketize(Divisor.build(QQ, 2, [((1, 0), (0, 1), -1)]))
        assert buckets == {(0, 1): [(QQ(-1), QQ(1))]}

    def test_multiplicity_repeats(self):
        buckets, _ = bucketize(Divisor.build(QQ, 2, [((1, 0), (0, 1), 3)]))
        assert buckets == {(0, 1): [(QQ(1), QQ(1))] * 3}


class TestDecompose:
    def test_worked_instance(self):
        d = worked_divisor()
        pairs, cert = decompose(d)
        assert len(pairs) == 3
        assert brute_class(d) == WORKED_CLASS
        assert brute_pairs_class(pairs, SQRT2) == WORKED_CLASS
        assert verify_certificate(d, pairs)
        assert audit_certificate(d, cert)

    def test_diagonal(self):
        d = Divisor.build(QQ, 2, [((1, 0), (3, 0))])
        pairs, cert = decompose(d)
        assert pairs == [DegeneratePair(QQ(Fraction(1, 3)), (QQ(3), QQ(0)))]
        assert cert.steps[-1].rule == DIAGONAL_DIRECT

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetricGramError) as info:
            decompose(Divisor.build(QQ, 2, [((1, 0), (0, 1))]))
        assert list(info.value.entries) == [(0, 1)]
        assert "G[1,2]" in str(info.value)

    def test_empty(self):
        pairs, cert = decompose(Divisor(QQ, 3))
        assert pairs == [] and cert.steps == ()
        assert verify_certificate(Divisor(QQ, 3), [])

    def test_verify_examples(self):
        assert not verify_certificate(Divisor.build(SQRT2, 2, [((1, 0), (r2, 0))]), [])
        assert verify_certificate(Divisor.build(QQ, 2, [((1, 0), (2, 0))]), [])

    def test_random_end_to_end(self):
        rng = random.Random(12)
        for i in range(120):
            field = (QQ, SQRT2)[i % 2]
            d = symmetric_divisor(rng, field, rng.choice([2, 3, 4]))
            pairs, cert = decompose(d)
            assert verify_certificate(d, pairs)
            assert brute_pairs_class(pairs, field) == brute_class(d)
            assert a_matrix(degenerate_divisor(pairs, field, d.m)).is_zero()
            assert audit_certificate(d, cert)

    def test_deterministic(self):
        rng = random.Random(13)
        for _ in range(20):
            d = symmetric_divisor(rng, SQRT2, 3)
            assert decompose(d)[1].to_text(d) == decompose(d)[1].to_text(d)

    def test_audit_rejects_tampering(self):
        d = worked_divisor()
        pairs, cert = decompose(d)
        forged = list(cert.steps)
        i = next(k for k, s in enumerate(forged) if s.rule == W1_MERGE)
        bad = forged[i].emitted[0]
        forged[i] = replace(forged[i], emitted=(replace(bad, gamma=bad.gamma + 1),) + forged[i].emitted[1:])
        assert not audit_certificate(d, replace(cert, steps=tuple(forged)))
        assert not verify_certificate(d, pairs[:-1])

    def test_certificate_text(self):
        d = worked_divisor()
        _, cert = decompose(d)
        text = cert.to_text(d)
        assert "w1-merge" in text
        assert "lhs [(1,4,1/1) (2,3,-1/1)]" in text
        assert "rhs [(1,4,1/1) (2,3,-1/1)]" in text
