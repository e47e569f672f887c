import dataclasses

import pytest

from qpd import identities as ids
from qpd.identities import (
    Add,
    Div,
    Eta,
    EvaluationError,
    IdentityClaim,
    IntLit,
    Mul,
    Named,
    ParseError,
    Poch,
    Pow,
    QPow,
    check_identity,
    evaluate,
    load_ledger,
    parse_expression,
    parse_ledger,
    to_text,
)
from qpd.qfactory import pd_series


def test_parse_pd_quotient():
    e = parse_expression("f6/(f1*f2*f3)")
    assert e == Div(Eta(6), Mul(Mul(Eta(1), Eta(2)), Eta(3)))


def test_parse_even_odd_split():
    e = parse_expression("(f2^3/f6)^2 + q^1*f12^2")
    assert e == Add(Pow(Div(Pow(Eta(2), 3), Eta(6)), 2), Mul(QPow(1), Pow(Eta(12), 2)))


def test_parse_product_form():
    e = parse_expression("f1^13*P(6,16)*P(10,16)")
    assert e == Mul(Mul(Pow(Eta(1), 13), Poch(6, 16)), Poch(10, 16))


def test_parse_misc_atoms():
    assert parse_expression("q") == QPow(1)
    assert parse_expression("pd_12") == Named("pd_12")
    assert parse_expression("2*g") == Mul(IntLit(2), Named("g"))
    assert parse_expression("f1^-2") == Pow(Eta(1), -2)
    assert to_text(parse_expression("subst( phi , 2 )")) == "subst(phi,2)"


@pytest.mark.parametrize(
    "text, pos",
    [
        ("f1*(", 4),
        ("f1 $ f2", 3),
        ("foo", 0),
        ("P(1)", 0),
        ("theta(1,2,3)", 0),
        ("f01", 1),
        ("pd_1", 0),
        ("f1 f2", 3),
        ("extract(pd,2,2)", 0),
        ("", 0),
    ],
)
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.position == pos


def test_evaluate_examples():
    assert evaluate("f6/(f1*f2*f3)", 5)[5] == 15
    assert evaluate("h", 9, 3).coeffs == (1, 1, 0, 0, 2, 0, 0, 0, 0, 1)
    assert evaluate("q^1", 0).coeffs == (0,)
    assert evaluate("q^3*pd", 2).coeffs == (0, 0, 0)
    assert evaluate("pd", 30) == pd_series(30)


def test_evaluate_negative_one_mod2():
    assert evaluate("0 - 1", 2, 2).coeffs == (1, 0, 0)


def test_evaluate_errors():
    with pytest.raises(EvaluationError):
        evaluate("1/q^1", 5)
    with pytest.raises(EvaluationError):
        evaluate("1/(2*pd)", 5, 4)
    with pytest.raises(EvaluationError):
        evaluate("pd", -1)


def test_sparse_names():
    assert evaluate("sq", 9).coeffs == (0, 1, 0, 0, 1, 0, 0, 0, 0, 1)
    assert evaluate("sq_not3", 16).coeffs[9] == 0
    assert evaluate("altsq", 4).coeffs == (0, -1, 0, 0, 1)
    assert evaluate("sq3p1", 16).coeffs == tuple(1 if n in (1, 4, 16) else 0 for n in range(17))
    assert evaluate("oddsq", 9).coeffs == (0, 1, 0, 0, 0, 0, 0, 0, 0, 1)


def test_ledger_round_trip_texts():
    text = ids.ledger_text()
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            fields = [f.strip() for f in line.split("|")]
            for side in fields[2:4]:
                assert to_text(parse_expression(side)) == side


def test_ledger_shape():
    ledger = load_ledger()
    names = {c.id for c in ledger}
    for expected in ("ID-P2", "ID-OM", "ID-F3", "ID-F8", "ID-X75", "ID-X12", "ID-L63", "ID-65", "ID-67",
                     "ID-A22", "ID-71", "ID-D4", "ID-RR1", "ID-RR2", "ID-RR3", "ID-RR4", "ID-B1", "ID-B2a",
                     "ID-B2b", "ID-H", "ID-P3H", "ID-S20", "ID-A313"):
        assert expected in names
    assert sum(1 for n in names if n.startswith("ID-M4-")) == 8
    assert sum(1 for n in names if n.startswith("ID-GF-")) == 5
    for c in ledger:
        assert c.status in ("stated", "imported", "conjectural")
        assert IdentityClaim(c.id, parse_expression(to_text(c.lhs)), c.rhs, c.modulus, c.status, c.source) == c


@pytest.mark.parametrize("cid, N", [("ID-L63", 200), ("ID-M4-k1-m1", 400)])
def test_check_examples(cid, N):
    claim = next(c for c in load_ledger() if c.id == cid)
    r = check_identity(claim, N)
    assert r.passed
    assert r.checked == N + 1


def test_check_negative_control():
    claim = next(c for c in load_ledger() if c.id == "ID-L63")
    broken = dataclasses.replace(claim, rhs=Add(claim.rhs, QPow(7)))
    r = check_identity(broken, 200)
    assert not r.passed
    assert r.failures[0] == (7, 0, 1)
    assert r.verdict == "fail"


def test_check_requires_precision():
    claim = load_ledger()[0]
    with pytest.raises(ValueError):
        check_identity(claim, 0)


def test_check_attaches_id():
    claim = IdentityClaim("ID-BAD", parse_expression("1/q^1"), IntLit(1), None, "stated", "x")
    with pytest.raises(EvaluationError, match="ID-BAD"):
        check_identity(claim, 10)


def test_ledger_parse_errors():
    with pytest.raises(ValueError):
        parse_ledger("A | - | pd | pd | stated")
    with pytest.raises(ValueError):
        parse_ledger("A | - | pd | pd | stated | s\nA | - | pd | pd | stated | s")
    with pytest.raises(ValueError):
        parse_ledger("A | - | pd | pd | guessed | s")
    with pytest.raises(ValueError):
        parse_ledger("A | - | pd( | pd | stated | s")
    assert parse_ledger("# only a comment\n\n") == []


def test_full_ledger_passes():
    for c in load_ledger():
        assert check_identity(c).passed, c.id
