import pytest

from topocc.config import Config
from topocc.heyting import diamond, sierpinski
from topocc.lists import (NIL, TruncationError, apply_graph, check_list_ind_lemma, cons_val, kleene,
                          psi_tables, rec_val, recurse)
from topocc.parsing import parse_context, parse_term
from topocc.semantics import Model, check_beta_soundness
from topocc.syntax import beta_eq, normalize
from topocc.values import EMPTY, CarrierTooLarge, FinSet, Fun, ListVal, OpenVal, TestUniverse, Tracker

IN = ("(fun (A : Type0) (a : A) (l : list A) => list_rec A (fun (_ : list A) => Prop) False "
      "(fun (x : A) (_ : list A) (ind : Prop) => x =[A] a \\/ ind) l)")
CTX = tuple(parse_context("A : Type0\na : A\nx : A\nl : list A"))
NAMES = [n for n, _ in CTX]
S1 = FinSet([EMPTY])
S2 = FinSet([EMPTY, FinSet([EMPTY])])


def in_pairs():
    t = lambda s: parse_term(s, NAMES)
    return [(t(f"{IN} A a (nil A)"), t("False")),
            (t(f"{IN} A a (cons A x l)"), t(f"x =[A] a \\/ {IN} A a l"))]


def test_in_identities_syntactic():
    for lhs, rhs in in_pairs():
        assert beta_eq(lhs, rhs)


@pytest.mark.parametrize("space", [sierpinski(), diamond()], ids=["sierpinski", "diamond"])
def test_in_identities_semantic(space):
    m = Model(space)
    for lhs, rhs in in_pairs():
        rep = check_beta_soundness(m, CTX, lhs, rhs)
        assert rep.ok and rep.checked > 0
        # A ranges over the test universe, so the check is approximate
        assert not rep.exact


def test_kleene_closure():
    assert len(kleene(S2, 2)) == 1 + 2 + 4
    assert len(kleene(EMPTY, 3)) == 1
    with pytest.raises(CarrierTooLarge):
        kleene(S2, 7, cap=64)


def test_cons_graph_truncates():
    c = cons_val(S2, 2)
    a = FinSet([EMPTY])
    assert apply_graph(c, a, ListVal([EMPTY])) == ListVal([a, EMPTY])
    with pytest.raises(TruncationError):
        apply_graph(c, a, ListVal([EMPTY, EMPTY]))


def _length_parity():
    tr = Tracker(TestUniverse())
    two = FinSet([EMPTY, FinSet([EMPTY])])
    lists = kleene(S2, 3)
    T = Fun(lists, lambda l: two, tr)
    flip = lambda b: FinSet([EMPTY]) if b == EMPTY else EMPTY
    f = Fun(S2, lambda a: Fun(lists, lambda l: Fun(two, flip, tr), tr), tr)
    return T, EMPTY, f


def test_rec_graph_matches_recursion():
    T, t, f = _length_parity()
    g = rec_val(S2, T, t, f, 3)
    for l in kleene(S2, 3).iterate():
        want = EMPTY if len(l.items) % 2 == 0 else FinSet([EMPTY])
        assert apply_graph(g, l) == want == recurse(t, f, l)
    with pytest.raises(TruncationError):
        apply_graph(g, ListVal([EMPTY] * 4))


def test_recursor_coherence():
    """Closed recursor redexes evaluate like their normal forms."""
    step = "(fun (x : Prop) (_ : list Prop) (r : Prop) => x \\/ r)"
    lists = ["nil Prop", "cons Prop False (nil Prop)",
             "cons Prop (forall P : Prop, P -> P) (cons Prop False (nil Prop))"]
    for sp in [sierpinski(), diamond()]:
        m = Model(sp, config=Config(list_depth=2))
        for l in lists:
            t = parse_term(f"list_rec Prop (fun (_ : list Prop) => Prop) False {step} ({l})")
            assert m.eval((), t).value == m.eval((), normalize(t)).value


def test_list_ind_lemma_exhaustive_on_sierpinski():
    rep = check_list_ind_lemma(sierpinski(), S1, 2)
    assert rep.ok and rep.exhaustive and rep.tables == 3 ** 3


def test_list_ind_lemma_sampled_on_diamond():
    rep = check_list_ind_lemma(diamond(), S2, 2, samples=200, seed=0)
    assert rep.ok and not rep.exhaustive and rep.tables == 200


def test_psi_sampling_is_seeded():
    a = [p for p, _ in psi_tables(diamond(), S2, 2, samples=5, seed=4)]
    b = [p for p, _ in psi_tables(diamond(), S2, 2, samples=5, seed=4)]
    assert a == b


def test_nil_encoding():
    assert NIL.encoded() == (0, "·")
    assert ListVal([EMPTY]).encoded() == (1, (EMPTY, (0, "·")))
