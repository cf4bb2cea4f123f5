"""Plain-text divisor spec files.

    # comments run to end of line
    field { minpoly = [-2, 0, 1], interval = [1, 3/2] }
    m = 2
    pair mult=1 lambda=[1, 0] mu=[0, [0, 1]]
    pair lambda=[[0, 1], 0] mu=[0, -1]

``minpoly`` lists coefficients low to high and must be monic. A scalar is a
rational (``3``, ``-3/2``, ``0.25``) or a coefficient list ``[c0, c1, ...]``
in powers of theta. ``mult`` defaults to 1. Degree >= 4 fields need
``assume_irreducible = true`` in the field block. Without a field block the
field is Q.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .divisor import Divisor, Pair
from .errors import ApDivisorError, ParseError
from .field import FieldSpec

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[{}\[\]=,])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, line, pos = [], 1, 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line)
        kind = mo.lastgroup
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            tokens.append((kind, mo.group(), line))
        pos = mo.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, self.last_line())

    def last_line(self):
        return self.tokens[-1][2] if self.tokens else 1

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError(f"unexpected end of input, expected {value or kind}", tok[2])
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def value(self):
        kind, text, line = self.peek()
        if kind == "num":
            self.i += 1
            try:
                return Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad number {text!r}", line) from exc
        if text in ("true", "false"):
            self.i += 1
            return text == "true"
        if text == "[":
            self.i += 1
            items = []
            if self.peek()[1] == "]":
                self.i += 1
                return items
            while True:
                items.append(self.value())
                tok = self.take(kind="punct")
                if tok[1] == "]":
                    return items
                if tok[1] != ",":
                    raise ParseError(f"expected ',' or ']', got {tok[1]!r}", tok[2])
        raise ParseError(f"expected a value, got {text!r}", line)

    def keyvals(self, stop):
        out = {}
        while self.peek()[0] == "ident" and self.peek()[1] not in stop:
            _, key, line = self.take(kind="ident")
            self.take("=")
            if key in out:
                raise ParseError(f"duplicate key {key!r}", line)
            out[key] = (self.value(), line)
            if self.peek()[1] == ",":
                self.i += 1
        return out


def _scalar(field: FieldSpec, v, line):
    if isinstance(v, Fraction):
        return field.scalar(v)
    if isinstance(v, list) and all(isinstance(c, Fraction) for c in v) and v:
        if len(v) > field.degree:
            raise ParseError(f"scalar {v} has more than {field.degree} coefficients", line)
        return field.scalar(v)
    raise ParseError(f"not a scalar literal: {v!r}", line)


def _vector(field: FieldSpec, v, m: int, name: str, line):
    if not isinstance(v, list):
        raise ParseError(f"{name} must be a list of scalars", line)
    if len(v) != m:
        raise ParseError(f"{name} has {len(v)} entries but m = {m}", line)
    return tuple(_scalar(field, x, line) for x in v)


def _field(kv) -> FieldSpec:
    unknown = set(kv) - {"minpoly", "interval", "assume_irreducible"}
    if unknown:
        raise ParseError(f"unknown field key(s): {', '.join(sorted(unknown))}", kv[min(unknown)][1])
    for key in ("minpoly", "interval"):
        if key not in kv:
            raise ParseError(f"field block missing {key!r}")
    mp, line = kv["minpoly"]
    iv, iline = kv["interval"]
    if not isinstance(mp, list) or not all(isinstance(c, Fraction) for c in mp):
        raise ParseError("minpoly must be a list of rationals", line)
    if not isinstance(iv, list) or len(iv) != 2 or not all(isinstance(c, Fraction) for c in iv):
        raise ParseError("interval must be [lo, hi] with rational endpoints", iline)
    flag = kv.get("assume_irreducible", (False, line))[0]
    if not isinstance(flag, bool):
        raise ParseError("assume_irreducible must be true or false", line)
    try:
        return FieldSpec(tuple(mp), iv[0], iv[1], flag)
    except ApDivisorError as exc:
        raise ParseError(f"invalid field: {exc}", line) from exc


def parse_spec(text: str) -> Divisor:
    p = _Parser(text)
    field = None
    m = None
    raw_pairs = []
    while p.peek()[0] is not None:
        kind, word, line = p.take(kind="ident")
        if word == "field":
            if field is not None:
                raise ParseError("duplicate field block", line)
            if raw_pairs:
                raise ParseError("field block must precede pairs", line)
            p.take("{")
            kv = p.keyvals(stop=())
            p.take("}")
            field = _field(kv)
        elif word == "m":
            if m is not None:
                raise ParseError("duplicate m", line)
            p.take("=")
            v = p.value()
            if not isinstance(v, Fraction) or v.denominator != 1 or v < 1:
                raise ParseError("m must be a positive integer", line)
            m = int(v)
        elif word == "pair":
            kv = p.keyvals(stop=("pair", "field", "m"))
            raw_pairs.append((kv, line))
        else:
            raise ParseError(f"unknown statement {word!r}", line)
    if m is None:
        raise ParseError("missing 'm = <int>'")
    field = field or FieldSpec.rationals()
    pairs = []
    for kv, line in raw_pairs:
        unknown = set(kv) - {"mult", "lambda", "mu"}
        if unknown:
            raise ParseError(f"unknown pair key(s): {', '.join(sorted(unknown))}", line)
        if "lambda" not in kv or "mu" not in kv:
            raise ParseError("pair needs lambda= and mu=", line)
        mult = kv.get("mult", (Fraction(1), line))[0]
        if not isinstance(mult, Fraction) or mult.denominator != 1 or mult == 0:
            raise ParseError("mult must be a nonzero integer", line)
        lam = _vector(field, kv["lambda"][0], m, "lambda", line)
        mu = _vector(field, kv["mu"][0], m, "mu", line)
        try:
            pairs.append(Pair(lam, mu, int(mult)))
        except ValueError as exc:
            raise ParseError(str(exc), line) from exc
    return Divisor(field, m, tuple(pairs))


def load_spec(path) -> Divisor:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_spec(text)


def format_spec(d: Divisor) -> str:
    lines = [d.field.literal(), f"m = {d.m}"]
    for pair in d.pairs:
        lam = ", ".join(map(str, pair.lam))
        mu = ", ".join(map(str, pair.mu))
        lines.append(f"pair mult={pair.mult} lambda=[{lam}] mu=[{mu}]")
    return "\n".join(lines) + "\n"

