import random
from fractions import Fraction
from pathlib import Path

import pytest

from apdivisor.errors import ParseError
from apdivisor.field import FieldSpec
from apdivisor.specfile import format_spec, load_spec, parse_spec
from helpers import QQ, SQRT2, rand_divisor

SPECS = Path(__file__).resolve().parent.parent / "specs"


def test_worked_file():
    d = load_spec(SPECS / "sqrt2_worked.txt")
    assert d.field == SQRT2 and d.m == 2 and len(d) == 2
    assert d.pairs[0].mu[1] == SQRT2.theta
    assert d.pairs[1].lam[0] == SQRT2.theta and d.pairs[1].mu[1] == -1


def test_default_field_is_rationals():
    d = parse_spec("m = 2\npair lambda=[1, 0] mu=[0, 1/2]\n")
    assert d.field == QQ
    assert d.pairs[0].mu[1] == Fraction(1, 2)


def test_decimal_literals_are_exact():
    d = parse_spec("m = 1\npair lambda=[0.25] mu=[-1.5]")
    assert d.pairs[0].lam[0] == Fraction(1, 4) and d.pairs[0].mu[0] == Fraction(-3, 2)


def test_multiplicity_and_comments():
    d = parse_spec("m = 1  # one variable\npair mult=-3 lambda=[1] mu=[2] # trailing\n")
    assert d.pairs[0].mult == -3


def test_degree_four_field():
    d = load_spec(SPECS / "sqrt2_sqrt3.txt")
    lam, mu = d.pairs[0].lam, d.pairs[0].mu
    assert lam[1] * lam[1] == 2 and mu[0] * mu[0] == 3


def test_empty_divisor():
    d = load_spec(SPECS / "empty.txt")
    assert d.m == 3 and len(d) == 0


@pytest.mark.parametrize(
    "text, line",
    [
        ("m = 2\npair lambda=[1, 0] mu=[0]\n", 2),
        ("m = 2\npair lambda=[1, 0] mu=[0, 1] nu=[1]\n", 2),
        ("m = 2\npair lambda=[0, 0] mu=[0, 0]\n", 2),
        ("m = 2\npair mult=0 lambda=[1, 0] mu=[0, 1]\n", 2),
        ("m = 2\npair mult=1/2 lambda=[1, 0] mu=[0, 1]\n", 2),
        ("m = 0\n", 1),
        ("m = 2\n\nwidget\n", 3),
        ("m = 2\npair lambda=[1, 0] mu=[0, 1] @\n", 2),
        ("field { minpoly = [-2, 0, 2], interval = [0, 2] }\nm = 1\n", 1),
        ("field { minpoly = [-4, 0, 1], interval = [1, 3] }\nm = 1\n", 1),
        ("field { minpoly = [-2, 0, 1], interval = [1, 3/2], colour = 1 }\nm = 1\n", 1),
        ("field { minpoly = [-2, 0, 1], interval = [1, 3/2] }\nm = 1\npair lambda=[[1, 2, 3]] mu=[1]\n", 3),
    ],
)
def test_rejections(text, line):
    with pytest.raises(ParseError) as info:
        parse_spec(text)
    assert str(info.value).startswith(f"line {line}:")


def test_missing_m():
    with pytest.raises(ParseError):
        parse_spec("pair lambda=[1] mu=[1]\n")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_spec(tmp_path / "nope.txt")


def test_round_trip():
    rng = random.Random(0)
    for field in (QQ, SQRT2, FieldSpec((-2, 0, 0, 1), 1, 2)):
        for _ in range(30):
            d = rand_divisor(rng, field, rng.choice([1, 2, 3]), rng.randint(0, 4))
            assert parse_spec(format_spec(d)) == d
