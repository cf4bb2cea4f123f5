"""Zero sets of holomorphic functions with almost-periodic modulus on tube domains.

Exact decision, certified decomposition and quadrature checks for formal
combinations of model divisors d[lambda, mu].
"""

__version__ = "0.1.0"

from .decompose import (
    Certificate,
    DegeneratePair,
    TermList,
    audit_certificate,
    bucketize,
    decompose,
    degenerate_divisor,
    lemma_w1_reduce,
    verify_certificate,
)
from .divisor import (
    AMatrix,
    Divisor,
    GramMatrix,
    Pair,
    a_matrix,
    ap_modulus_criterion,
    classify_pair,
    congruence,
    gram_sum,
    is_symmetric,
    outer,
    periods,
    unit_vector,
)
from .field import QQ, SQRT2, FieldSpec, Scalar, field_new, sign_of, to_real
from .specfile import format_spec, load_spec, parse_spec
from .wedge import QVector, Wedge2, class_of, embed, wedge
