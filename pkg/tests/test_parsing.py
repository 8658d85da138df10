import pytest
from hypothesis import given, settings

from topocc.parsing import (FALSE, ParseError, UnboundIdentifier, conj, disj, eq, exists, iff, neg,
                            parse_context, parse_term, print_term, tokenize)
from topocc.syntax import PROP, App, Const, Lam, Pi, Sort, Var

from strategies import raw_terms

CTX = ["c5", "c4", "c3", "c2", "c1", "c0"]


@settings(max_examples=400, deadline=None)
@given(raw_terms())
def test_print_parse_round_trip(t):
    text = print_term(t, CTX)
    assert parse_term(text, CTX) == t


def test_round_trip_on_generated_redexes():
    from topocc.semantics import REDEX_CONTEXT, random_redexes
    names = [n for n, _ in REDEX_CONTEXT]
    for redex, contractum in random_redexes(100, seed=11):
        for t in (redex, contractum):
            assert parse_term(print_term(t, names), names) == t


def test_binders_and_arrows():
    assert parse_term("fun (A : Prop) (a : A) => a") == Lam(PROP, Lam(Var(0), Var(0)))
    assert parse_term("forall A B : Prop, A -> B") == Pi(PROP, Pi(PROP, Pi(Var(1), Var(1))))
    assert parse_term("Prop -> Prop -> Prop") == Pi(PROP, Pi(PROP, PROP))
    assert parse_term("Type3") == Sort(3)


def test_unicode_aliases():
    assert parse_term("∀ P : Prop, P → P") == parse_term("forall P : Prop, P -> P")
    assert parse_term("λ (x : Prop) => x") == parse_term("fun (x : Prop) => x")
    assert parse_term("∀ P Q : Prop, P ∧ Q ∨ ¬P") == parse_term("forall P Q : Prop, P /\\ Q \\/ ~P")


def test_connective_encodings():
    P, Q = Var(1, "P"), Var(0, "Q")
    names = ["P", "Q"]
    assert parse_term("False") == FALSE == Pi(PROP, Var(0))
    assert parse_term("~P", names) == neg(P)
    assert parse_term("P /\\ Q", names) == conj(P, Q)
    assert parse_term("P \\/ Q", names) == disj(P, Q)
    assert parse_term("P <-> Q", names) == iff(P, Q)
    assert parse_term("P =[Prop] Q", names) == eq(P, PROP, Q)
    assert parse_term("exists x : Prop, x", names) == exists(PROP, Var(0))
    # the disjunction's body: (P -> C) -> (Q -> C) -> C under a fresh C
    assert disj(P, Q) == Pi(PROP, Pi(Pi(Var(2), Var(1)), Pi(Pi(Var(2), Var(2)), Var(2))))


def test_precedence():
    names = ["P", "Q", "R"]
    assert parse_term("P -> Q -> R", names) == parse_term("P -> (Q -> R)", names)
    assert parse_term("P /\\ Q \\/ R", names) == parse_term("(P /\\ Q) \\/ R", names)
    assert parse_term("~P -> Q", names) == parse_term("(~P) -> Q", names)
    assert parse_term("list_rec Prop", names) == App(Const("list_rec"), PROP)


def test_parse_errors_carry_positions():
    with pytest.raises(UnboundIdentifier) as e:
        parse_term("fun (x : Prop) => y")
    assert (e.value.line, e.value.col) == (1, 19)
    with pytest.raises(ParseError):
        parse_term("fun (x : Prop) =>")
    with pytest.raises(ParseError):
        parse_term("Type")
    with pytest.raises(ParseError):
        parse_term("(Prop")


def test_context_files():
    ctx = parse_context("# two hypotheses\nP : Prop\np : P\n")
    assert ctx == [("P", PROP), ("p", Var(0))]
    with pytest.raises(ParseError):
        parse_context("P : Prop\nP : Prop")
    with pytest.raises(ParseError):
        parse_context("fun : Prop")


def test_printer_freshens_shadowed_names():
    t = Lam(PROP, Lam(PROP, Var(1), "x"), "x")
    text = print_term(t)
    assert parse_term(text) == t
    assert "x1" in text


def test_tokens():
    kinds = [tok.kind for tok in tokenize("fun (x : Type2) => x")]
    assert kinds[0] == "kw" and "type" in kinds and kinds[-1] == "eof"
