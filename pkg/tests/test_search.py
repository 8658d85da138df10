import pytest

from topocc.config import Config
from topocc.heyting import diamond, sierpinski
from topocc.parsing import parse_term
from topocc.search import (ApproximateProposition, NotRefutedUpTo, Refuted, closed_proposition,
                           emit_exponent_table, refute, validate)
from topocc.semantics import evaluate
from topocc.typecheck import TypeCheckError

LEM = "forall P : Prop, P \\/ ~P"
LIN = "forall P Q : Prop, (P -> Q) \\/ (Q -> P)"
DNE = "forall P : Prop, ~~P -> P"


def test_excluded_middle_fails_on_sierpinski():
    res = refute(LEM, 2)
    v = res.verdict
    assert isinstance(v, Refuted) and res.exact_only
    assert v.space.le == sierpinski().le
    assert v.value_index == 1 and v.witness == 1
    assert "point" in v.describe()


def test_linearity_needs_four_points():
    res = refute(LIN, 2)
    assert not res.refuted and res.verdict == NotRefutedUpTo(2)
    res = refute(LIN, 3)
    assert not res.refuted
    v = refute(LIN, 4).verdict
    assert v.space.le == diamond().le
    assert v.value_index == 4
    # the witness lies outside the value
    assert not (v.value >> v.witness) & 1 and v.witness == 3


def test_monotone_in_the_bound():
    for prop in (LEM, LIN, DNE):
        first = None
        for k in range(1, 5):
            res = refute(prop, k)
            if first is None and res.refuted:
                first = k
            if first is not None:
                assert res.refuted


def test_deterministic():
    a, b = refute(LIN, 4), refute(LIN, 4)
    assert a.verdict.space.le == b.verdict.space.le and a.verdict.witness == b.verdict.witness
    assert a.spaces_tried == b.spaces_tried


def test_workers_agree_with_sequential():
    seq = refute(LIN, 4)
    par = refute(LIN, 4, workers=2)
    assert par.verdict.space.le == seq.verdict.space.le
    assert par.verdict.value == seq.verdict.value and par.verdict.witness == seq.verdict.witness
    assert [e.value for e in validate(LEM, 4, workers=2).entries] == \
           [e.value for e in validate(LEM, 4).entries]


def test_refuted_value_matches_direct_evaluation():
    v = refute(DNE, 4).verdict
    assert evaluate(v.space, (), parse_term(DNE)).value.mask == v.value


def test_validate():
    rep = validate("False", 4)
    assert not rep.all_valid and all(e.value == 0 for e in rep.entries)
    assert len(rep.entries) == 5
    rep = validate("forall P : Prop, forall p1 p2 : P, p1 =[P] p2", 4)
    assert rep.all_valid and not rep.failures()
    rep = validate(LEM, 4)
    assert [e.space.n for e in rep.failures()] == [2, 3, 4, 4]


def test_rejects_non_propositions_and_approximations():
    with pytest.raises(TypeCheckError):
        closed_proposition("Prop")
    with pytest.raises(TypeCheckError):
        refute("fun (P : Prop) => P", 2)
    with pytest.raises(ApproximateProposition):
        refute("forall A : Type0, forall x : A, x =[A] x", 2)
    rep = validate("forall A : Type0, forall x : A, x =[A] x", 2, allow_approx=True)
    assert not any(e.exact for e in rep.entries)
    with pytest.raises(ValueError):
        refute(LEM, 7)
    with pytest.raises(ValueError):
        validate(LEM, 0)


def test_exponent_rows():
    assert emit_exponent_table(sierpinski()) == [[2, 0, 0], [2, 2, 1], [2, 2, 2]]


def test_config_is_passed_through():
    small = Config(list_depth=2)
    assert refute(LEM, 2, small).refuted
