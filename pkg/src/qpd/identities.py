"""A small expression language for q-series identities, and the identity ledger.

Grammar (usual precedence, ``^`` binds tightest and takes an integer)::

    expr   := term (("+" | "-") term)*
    term   := power (("*" | "/") power)*
    power  := atom ("^" ["-"] INT)?
    atom   := INT | "(" expr ")" | "q" ["^" INT] | f<k> | P(a,b)
            | phi | psi | theta(x,y,s1,s2) | subst(expr,k) | extract(expr,A,r)
            | pd | pd_<k> | g | h | <sparse sum name>

The printer emits a canonical text with minimal parentheses, so both
``parse(to_text(e)) == e`` and, for canonical input, ``to_text(parse(s)) == s``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Union

import numpy as np

from . import qfactory as qf
from .report import VerificationReport
from .series import (
    SeriesError,
    TruncatedSeries,
    arith,
    constant,
    divide,
    extract_progression,
    from_terms,
    make_series,
    monomial,
    power,
    substitute_power,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(ValueError):
    pass


# --- syntax tree -------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class QPow:
    j: int


@dataclass(frozen=True)
class Eta:
    k: int


@dataclass(frozen=True)
class Poch:
    a: int
    b: int


@dataclass(frozen=True)
class Theta:
    spec: qf.ThetaSpec


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Subst:
    child: "Expr"
    k: int


@dataclass(frozen=True)
class Extract:
    child: "Expr"
    A: int
    r: int


Expr = Union[IntLit, QPow, Eta, Poch, Theta, Named, Add, Sub, Mul, Div, Pow, Subst, Extract]

_BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Pow: 3}


# --- sparse sums exposed as names ---------------------------------------------


def _squares(N: int, modulus, keep: Callable[[int], bool], coeff: Callable[[int], int] = lambda k: 1):
    terms = {}
    k = 1
    while k * k <= N:
        if keep(k):
            terms[k * k] = coeff(k)
        k += 1
    return from_terms(terms, N, modulus)


def _shifted_squares(N: int, modulus):
    # sum over j in Z of q^((3j+1)^2)
    terms: dict = {}
    for start, step in ((1, 3), (-2, -3)):
        v = start
        while v * v <= N:
            terms[v * v] = terms.get(v * v, 0) + 1
            v += step
    return from_terms(terms, N, modulus)


def _odd_multiplicity_product(N: int, modulus):
    # prod_n (1 + q^n + q^3n + ...) = prod_n (1 + q^n - q^2n) / (1 - q^2n)
    out = np.zeros(N + 1, dtype=object if modulus is None else np.int64)
    out[0] = 1
    for n in range(1, N + 1):
        nxt = out.copy()
        nxt[n:] += out[: N + 1 - n]
        if 2 * n <= N:
            nxt[2 * n :] -= out[: N + 1 - 2 * n]
            for start in range(2 * n, N + 1, 2 * n):
                stop = min(start + 2 * n, N + 1)
                nxt[start:stop] += nxt[start - 2 * n : stop - 2 * n]
        out = nxt if modulus is None else nxt % modulus
    return make_series([int(c) for c in out], N, modulus)


SPARSE_SUMS: dict = {
    "sq": lambda N, m: _squares(N, m, lambda k: True),
    "sq_not3": lambda N, m: _squares(N, m, lambda k: k % 3 != 0),
    "oddsq": lambda N, m: _squares(N, m, lambda k: k % 2 == 1),
    "altsq": lambda N, m: _squares(N, m, lambda k: True, lambda k: (-1) ** k),
    "sq3p1": _shifted_squares,
    "oddmult": _odd_multiplicity_product,
}

_NAMED = {"pd", "g", "h"} | set(SPARSE_SUMS)


# --- lexer and parser --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _int(token) -> int:
    kind, value, pos = token
    if kind != "int":
        raise ParseError(f"expected an integer, found {value or 'end of input'!r}", pos)
    if len(value) > 1 and value[0] == "0":
        raise ParseError(f"malformed integer {value!r}", pos)
    return int(value)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}, found {value or 'end of input'!r}", pos)

    def at(self, op: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "op" and value == op

    def parse(self) -> Expr:
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.power()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            right = self.power()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def signed_int(self) -> int:
        if self.at("-"):
            self.take()
            return -_int(self.take())
        if self.at("+"):
            self.take()
        return _int(self.take())

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.take()
            base = Pow(base, self.signed_int())
        return base

    def args(self, count: int, name: str, pos: int, first_expr: bool = False) -> list:
        self.expect("(")
        out = [self.expr() if first_expr else self.signed_int()]
        while self.at(","):
            self.take()
            out.append(self.signed_int())
        kind, value, p = self.peek()
        if len(out) != count:
            raise ParseError(f"{name} takes {count} arguments, got {len(out)}", pos)
        self.expect(")")
        return out

    def atom(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "int":
            return IntLit(_int((kind, value, pos)))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind != "name":
            raise ParseError(f"unexpected {value or 'end of input'!r}", pos)
        if value == "q":
            if self.at("^"):
                self.take()
                return QPow(_int(self.take()))
            return QPow(1)
        if re.fullmatch(r"f\d+", value):
            k = _int(("int", value[1:], pos + 1))
            if k < 1:
                raise ParseError("f_k needs k >= 1", pos)
            return Eta(k)
        if value == "P":
            a, b = self.args(2, "P", pos)
            if a < 1 or b < 1:
                raise ParseError("P(a,b) needs positive arguments", pos)
            return Poch(a, b)
        if value == "phi":
            return Theta(qf.PHI)
        if value == "psi":
            return Theta(qf.PSI)
        if value == "theta":
            x, y, s1, s2 = self.args(4, "theta", pos)
            try:
                return Theta(qf.ThetaSpec.general(x, y, s1, s2))
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
        if value == "subst":
            child, k = self.args(2, "subst", pos, first_expr=True)
            if k < 1:
                raise ParseError("subst needs k >= 1", pos)
            return Subst(child, k)
        if value == "extract":
            child, A, r = self.args(3, "extract", pos, first_expr=True)
            if A < 1 or not 0 <= r < A:
                raise ParseError("extract needs A >= 1 and 0 <= r < A", pos)
            return Extract(child, A, r)
        m = re.fullmatch(r"pd_(\d+)", value)
        if m:
            k = _int(("int", m.group(1), pos + 3))
            if k < 2:
                raise ParseError("pd_k needs k >= 2", pos)
            return Named(value)
        if value in _NAMED:
            return Named(value)
        raise ParseError(f"unknown atom {value!r}", pos)


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


def to_text(e: Expr) -> str:
    """Canonical text of an expression."""
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, QPow):
        return f"q^{e.j}"
    if isinstance(e, Eta):
        return f"f{e.k}"
    if isinstance(e, Poch):
        return f"P({e.a},{e.b})"
    if isinstance(e, Theta):
        s = e.spec
        if s.kind != "general":
            return s.kind
        return f"theta({s.x},{s.y},{s.s1},{s.s2})"
    if isinstance(e, Named):
        return e.name
    if isinstance(e, Subst):
        return f"subst({to_text(e.child)},{e.k})"
    if isinstance(e, Extract):
        return f"extract({to_text(e.child)},{e.A},{e.r})"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if type(e.base) in _PREC:
            base = f"({base})"
        return f"{base}^{e.exp}"
    op = _BINARY[type(e)]
    prec = _PREC[type(e)]
    left, right = to_text(e.left), to_text(e.right)
    if _PREC.get(type(e.left), 9) < prec:
        left = f"({left})"
    if _PREC.get(type(e.right), 9) <= prec:
        right = f"({right})"
    sep = " " if prec == 1 else ""
    return f"{left}{sep}{op}{sep}{right}"


# --- evaluation ----------------------------------------------------------------


def _named(name: str, N: int, modulus) -> TruncatedSeries:
    if name == "pd":
        return qf.pd_series(N, modulus)
    if name == "g":
        return qf.g_series(N, modulus)
    if name == "h":
        return qf.h_series(N, modulus)
    if name.startswith("pd_"):
        return qf.pdk_series(int(name[3:]), N, modulus)
    return SPARSE_SUMS[name](N, modulus)


def _eval(e: Expr, N: int, m) -> TruncatedSeries:
    if isinstance(e, IntLit):
        return constant(e.value, N, m)
    if isinstance(e, QPow):
        return monomial(e.j, N, 1, m)
    if isinstance(e, Eta):
        return qf.fk(e.k, N, m)
    if isinstance(e, Poch):
        return qf.pochhammer(e.a, e.b, N, m)
    if isinstance(e, Theta):
        return qf.theta(e.spec, N, m)
    if isinstance(e, Named):
        return _named(e.name, N, m)
    if isinstance(e, Subst):
        return substitute_power(_eval(e.child, N // e.k, m), e.k, N)
    if isinstance(e, Extract):
        return extract_progression(_eval(e.child, e.A * N + e.r, m), e.A, e.r)
    if isinstance(e, Pow):
        return power(_eval(e.base, N, m), e.exp)
    if isinstance(e, Mul) and isinstance(e.left, QPow):
        # q^j * X only needs X through degree N - j
        j = e.left.j
        if j > N:
            return constant(0, N, m)
        rest = _eval(e.right, N - j, m)
        return TruncatedSeries((0,) * j + rest.coeffs, m)
    left, right = _eval(e.left, N, m), _eval(e.right, N, m)
    if isinstance(e, Add):
        return arith(left, right, "add")
    if isinstance(e, Sub):
        return arith(left, right, "sub")
    if isinstance(e, Mul):
        return arith(left, right, "mul")
    return divide(left, right)


def evaluate(e: Expr | str, N: int, modulus: int | None = None) -> TruncatedSeries:
    """Expand ``e`` to precision ``N``, reducing mod ``modulus`` at every node."""
    if isinstance(e, str):
        e = parse_expression(e)
    if N < 0:
        raise EvaluationError("precision must be nonnegative")
    try:
        return _eval(e, N, modulus)
    except SeriesError as exc:
        raise EvaluationError(f"cannot evaluate {to_text(e)}: {exc}") from exc


# --- ledger --------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityClaim:
    id: str
    lhs: Expr
    rhs: Expr
    modulus: int | None
    status: str
    source: str

    @property
    def default_precision(self) -> int:
        return 500 if self.modulus is None else 1000

    def to_line(self) -> str:
        mod = "-" if self.modulus is None else str(self.modulus)
        return " | ".join([self.id, mod, to_text(self.lhs), to_text(self.rhs), self.status, self.source])


LEDGER_STATUSES = ("stated", "imported", "conjectural")


def parse_ledger(text: str) -> list:
    claims = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 6:
            raise ValueError(f"ledger line {lineno}: expected 6 fields, got {len(fields)}")
        cid, mod, lhs, rhs, status, source = fields
        if cid in seen:
            raise ValueError(f"ledger line {lineno}: duplicate id {cid}")
        if status not in LEDGER_STATUSES:
            raise ValueError(f"ledger line {lineno}: unknown status {status!r}")
        seen.add(cid)
        try:
            claims.append(
                IdentityClaim(
                    cid,
                    parse_expression(lhs),
                    parse_expression(rhs),
                    None if mod == "-" else int(mod),
                    status,
                    source,
                )
            )
        except ParseError as exc:
            raise ValueError(f"ledger line {lineno} ({cid}): {exc}") from exc
    return claims


def ledger_text(path: str | Path | None = None) -> str:
    if path is None:
        return resources.files("qpd").joinpath("data/ledger.txt").read_text(encoding="utf-8")
    return Path(path).read_text(encoding="utf-8")


def load_ledger(path: str | Path | None = None) -> list:
    return parse_ledger(ledger_text(path))


def check_identity(claim: IdentityClaim, N: int | None = None) -> VerificationReport:
    """Compare both sides coefficientwise through ``q^N``."""
    if N is None:
        N = claim.default_precision
    if N < 1:
        raise ValueError("precision must be at least 1")
    start = time.perf_counter()
    report = VerificationReport(
        claim.id,
        "identity",
        claim.status,
        claim.modulus,
        (0, N),
        description=f"{to_text(claim.lhs)} == {to_text(claim.rhs)}",
    )
    try:
        lhs = evaluate(claim.lhs, N, claim.modulus)
        rhs = evaluate(claim.rhs, N, claim.modulus)
    except EvaluationError as exc:
        raise EvaluationError(f"{claim.id}: {exc}") from exc
    for n, (x, y) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
        if x != y:
            report.add_failure(n, x, y)
    report.checked = N + 1
    report.elapsed = time.perf_counter() - start
    return report
