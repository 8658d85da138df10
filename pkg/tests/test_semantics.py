import os
import subprocess
import sys

import pytest

from topocc.config import Config
from topocc.corpus import load_corpus
from topocc.heyting import diamond, one_point, sierpinski
from topocc.parsing import parse_context, parse_term
from topocc.posets import enumerate_spaces
from topocc.semantics import (REDEX_CONTEXT, Model, Valuation, app_op, check_beta_soundness,
                              check_logical_symbols, check_proof_irrelevance, check_semantic_irrelevance,
                              check_soundness, evaluate, floor, random_redexes)
from topocc.syntax import PROP, shift
from topocc.values import (EMPTY, CarrierTooLarge, FinSet, Fun, OpenVal, Point, TestUniverse,
                           UndefinedApplication, UniverseSet, default_carriers)

LEM = "forall P : Prop, P \\/ ~P"
LIN = "forall P Q : Prop, (P -> Q) \\/ (Q -> P)"
CORPUS = load_corpus()
SMALL = Config(list_depth=2)
SPACES = list(enumerate_spaces(4))


def value(space, text, **kw):
    rep = evaluate(space, (), parse_term(text), **kw)
    assert rep.exact
    return space.index[rep.value.mask]


def test_separations():
    s, d = sierpinski(), diamond()
    assert value(s, LEM) == 1
    assert value(s, LIN) == 2
    assert value(s, f"({LIN}) -> ({LEM})") == 1
    assert value(d, LEM) == 1
    assert value(d, LIN) == 4
    for sp in SPACES:
        assert value(sp, "False") == 0
        assert value(sp, "forall P : Prop, P -> P") == len(sp.opens) - 1


def test_negation_on_sierpinski():
    s = sierpinski()
    ctx = (("P", PROP),)
    m = Model(s)
    got = [s.index[m.value(ctx, parse_term("~P", ["P"]), Valuation((OpenVal(o),), (False,))).mask]
           for o in s.opens]
    assert got == [2, 0, 0]


def test_proofs_evaluate_to_the_floor():
    s = sierpinski()
    m = Model(s)
    ctx = tuple(parse_context("P : Prop\np : P\nQ : Prop\nq : Q"))
    t = parse_term("fun (C : Prop) (k : P -> Q -> C) => k p q", [n for n, _ in ctx])
    for g in m.eval_context(ctx):
        assert m.value(ctx, t, g) == Point(floor(s, g))
    # with no proof entries the floor is the top point
    assert floor(s, Valuation((), ())) == s.top


def test_valuations_of_a_context():
    s = sierpinski()
    ctx = tuple(parse_context("P : Prop\np : P"))
    vals = Model(s).eval_context(ctx)
    assert [(v.values[0].mask, v.values[1].p) for v in vals] == [(1, 0), (3, 0), (3, 1)]
    assert vals[0].tags == (False, True)


def test_exactness_flag():
    s = sierpinski()
    assert evaluate(s, (), parse_term(LEM)).exact
    rep = evaluate(s, (), parse_term("forall A : Type0, forall x : A, x =[A] x"))
    assert not rep.exact and rep.value.mask == s.full


def test_universe_and_carriers():
    tu = TestUniverse()
    assert [len(c) for c in tu.carriers(0)] == [0, 1, 2]
    u = UniverseSet(1, None)
    assert u.contains(EMPTY) and u.contains(UniverseSet(0, None)) and not u.contains(u)
    with pytest.raises(ValueError):
        TestUniverse(levels=[default_carriers(), [EMPTY]])


def test_value_order_is_independent_of_hash_seed():
    code = ("from topocc.values import TestUniverse, FinSet, EMPTY; from topocc.lists import kleene; "
            "print(TestUniverse().carriers(0), kleene(FinSet([EMPTY, FinSet([EMPTY])]), 2).elems)")
    outs = {subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True,
                           env=dict(os.environ, PYTHONHASHSEED=str(h))).stdout for h in (1, 2, 3)}
    assert len(outs) == 1


def test_undefined_applications():
    m = Model(sierpinski())
    with pytest.raises(UndefinedApplication):
        app_op(m, False, OpenVal(1), OpenVal(1))
    f = Fun(FinSet([EMPTY]), lambda a: a, m.tracker)
    with pytest.raises(UndefinedApplication):
        app_op(m, False, f, FinSet([EMPTY]))
    # a proof argument needs the bottom point in the domain as well
    g = Fun(OpenVal(0b10), lambda a: a, m.tracker)
    with pytest.raises(UndefinedApplication):
        app_op(m, True, g, Point(1))


def test_carrier_cap():
    d = diamond()
    ctx = tuple(parse_context("R : Prop -> Prop"))
    with pytest.raises(CarrierTooLarge):
        Model(d).eval_context(ctx)
    assert len(Model(d, config=Config(carrier_cap=50000)).eval_context(ctx)) == 6 ** 6


def test_model_needs_well_behaved_space():
    from topocc.heyting import Space
    with pytest.raises(ValueError):
        Model(Space.from_poset(3, [(0, 1), (0, 2)]))


@pytest.mark.parametrize("e", CORPUS, ids=lambda e: e.name)
def test_corpus_totality_and_soundness(e):
    for sp in SPACES:
        rep = check_soundness(Model(sp, config=SMALL), e.ctx, e.term, e.ty)
        assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("e", [e for e in CORPUS if e.ctx], ids=lambda e: e.name)
def test_weakening_semantics(e):
    """A fresh trailing entry does not change non-proof values."""
    for sp in [sierpinski(), diamond()]:
        m = Model(sp, config=SMALL)
        if m.checker.is_proof_term(e.ctx, e.term):
            continue
        ctx2 = e.ctx + (("Z", PROP),)
        t2 = shift(e.term, 1)
        for g in m.eval_context(e.ctx):
            base = m.value(e.ctx, e.term, g)
            for o in sp.opens:
                g2 = Valuation(g.values + (OpenVal(o),), g.tags + (False,))
                assert m.value(ctx2, t2, g2) == base


def test_semantic_irrelevance():
    ctx = tuple(parse_context("P : Prop\np : P\nQ : Prop\nq : Q"))
    names = [n for n, _ in ctx]
    for sp in SPACES:
        m = Model(sp)
        for text in ["P -> Q", "P /\\ Q", "(fun (X : Prop) (x : X) => P) Q q"]:
            for slot in (1, 3):
                assert check_semantic_irrelevance(m, ctx, parse_term(text, names), slot).ok


def test_pp_shortcut_matches_exhaustive_meet():
    """The PP clause evaluated once at the bottom point agrees with the meet
    over every point of the domain."""
    terms = [parse_term(t) for t in (LEM, LIN, f"({LIN}) -> ({LEM})", "forall P : Prop, ~~P -> P",
                                     "forall P Q : Prop, forall p : P, forall q : Q, P /\\ Q")]
    for sp in SPACES:
        fast, slow = Model(sp), Model(sp, exhaustive_pp=True)
        for t in terms:
            assert fast.eval((), t).value == slow.eval((), t).value
        ctx = REDEX_CONTEXT
        for redex, _ in random_redexes(60, seed=5):
            for g in fast.eval_context(ctx):
                assert fast.value(ctx, redex, g) == slow.value(ctx, redex, g)


def test_beta_soundness_small_sweep():
    for sp in [one_point(), sierpinski(), diamond()]:
        m = Model(sp)
        for redex, contractum in random_redexes(80, seed=2):
            assert check_beta_soundness(m, REDEX_CONTEXT, redex, contractum).ok


def test_redex_generator_is_deterministic_and_typed():
    a = random_redexes(30, seed=9)
    b = random_redexes(30, seed=9)
    assert a == b
    from topocc.syntax import beta_eq
    m = Model(sierpinski())
    for redex, contractum in a:
        assert beta_eq(redex, contractum)
        m.checker.check(REDEX_CONTEXT, contractum, m.checker.infer(REDEX_CONTEXT, redex))


def test_logical_symbols_and_irrelevance():
    for sp in SPACES:
        m = Model(sp)
        reps = check_logical_symbols(m)
        assert sorted(reps) == ["i", "ii", "iii", "iv", "v", "vi", "vii"]
        assert all(r.ok for r in reps.values())
        assert check_proof_irrelevance(m).ok
