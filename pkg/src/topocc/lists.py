"""Semantics of the list extension.

Lists over a carrier ``S`` are :class:`ListVal` tuples; the nested
tagged encoding is available through ``ListVal.encoded``. The interpretation
of the constants used by the evaluator is lazy and untruncated for
application; only iteration over ``S*`` is cut at the list depth. The
materialised helpers (``kleene``, ``cons_val``, ``rec_val``) build finite
graphs over lists of bounded length and fail at the boundary.
"""
import itertools
import random
from dataclasses import dataclass, field

from .values import (CarrierTooLarge, FinSet, Fun, ListSet, ListVal, ProdSet,
                     TestUniverse, Tracker, UndefinedApplication, UniverseSet)

NIL = ListVal(())

PSI_EXHAUSTIVE_LIMIT = 10 ** 5


class TruncationError(UndefinedApplication):
    """A materialised list graph was asked about a list longer than its depth."""


# -- constants used by the evaluator ----------------------------------------------

def list_constant(model, name):
    tr = model.tracker
    U0 = UniverseSet(0, tr)

    def const(v):
        return lambda _: v

    if name == "list":
        return Fun(U0, lambda S: ListSet(S, tr), tr)
    if name == "nil":
        return Fun(U0, const(NIL), tr)
    if name == "cons":
        def cons_S(S):
            return Fun(S, lambda a: Fun(ListSet(S, tr), lambda l: ListVal((a,) + l.items), tr), tr)
        return Fun(U0, cons_S, tr)
    if name == "list_rec":
        def rec_S(S):
            lists = ListSet(S, tr)
            T_dom = ProdSet(lists, const(U0), tr)

            def rec_T(T):
                def step_dom():
                    # forall a : A, forall l : list A, F l -> F (cons A a l)
                    return ProdSet(S, lambda a: ProdSet(
                        lists, lambda l: ProdSet(T.apply(l), const(T.apply(ListVal((a,) + l.items))), tr), tr), tr)

                def rec_t(t):
                    return Fun(step_dom(), lambda f: Fun(lists, lambda l: recurse(t, f, l), tr), tr)
                return Fun(T.apply(NIL), rec_t, tr)
            return Fun(T_dom, rec_T, tr)
        return Fun(U0, rec_S, tr)
    raise ValueError(f"{name} has no non-proof interpretation")


def recurse(t, f, l):
    """``rec_{t,f}(l)`` by recursion on the length of ``l``."""
    acc = t
    for k in range(len(l.items) - 1, -1, -1):
        tail = ListVal(l.items[k + 1:])
        acc = f.apply(l.items[k]).apply(tail).apply(acc)
    return acc


# -- materialised helpers ----------------------------------------------------------------

def _tracker(cap):
    return Tracker(TestUniverse(), carrier_cap=cap)


def kleene(S, n, cap=64):
    """All lists of length at most ``n`` over the elements of ``S``."""
    items = list(S.iterate())
    size = sum(len(items) ** k for k in range(n + 1))
    if size > cap:
        raise CarrierTooLarge(f"Kleene closure has {size} elements, above the cap of {cap}")
    return FinSet(ListVal(c) for k in range(n + 1) for c in itertools.product(items, repeat=k))


def lists_of_length(S, k):
    return [ListVal(c) for c in itertools.product(list(S.iterate()), repeat=k)]


def cons_val(S, n, cap=64):
    """``cons_S`` as a finite curried graph over lists of length below ``n``."""
    tr = _tracker(cap)
    shorter = kleene(S, n - 1, cap)

    def row(a):
        return Fun.from_pairs(shorter, [(l, ListVal((a,) + l.items)) for l in shorter.iterate()], tr)
    return Fun.from_pairs(S, [(a, row(a)) for a in S.iterate()], tr)


def apply_graph(f, *args):
    """Apply a materialised graph, reporting truncation at the boundary."""
    for a in args:
        if a.key not in f.cache:
            raise TruncationError(f"{a!r} lies outside the materialised domain")
        f = f.cache[a.key]
    return f


def rec_val(S, T, t, f, n, cap=64):
    """The recursor graph ``rec_{t,f}`` restricted to lists of length <= n.

    ``T`` is a function from lists to sets, ``t`` an element of ``T(nil)`` and
    ``f`` maps ``a``, ``l`` and a value in ``T(l)`` to ``T(cons a l)``.
    """
    if not T.apply(NIL).contains(t):
        raise UndefinedApplication("t is not an element of T(nil)")
    dom = kleene(S, n, cap)
    table = {NIL.key: (NIL, t)}
    for k in range(n):
        for l in lists_of_length(S, k):
            prev = table[l.key][1]
            for a in S.iterate():
                out = f.apply(a).apply(l).apply(prev)
                cl = ListVal((a,) + l.items)
                if not T.apply(cl).contains(out):
                    raise UndefinedApplication("step function leaves T(cons a l)")
                table[cl.key] = (cl, out)
    return Fun.from_pairs(dom, table.values(), _tracker(cap))


# -- the list-induction lemma ----------------------------------------------------------

@dataclass
class ListIndReport:
    ok: bool
    tables: int = 0
    exhaustive: bool = True
    failures: list = field(default_factory=list)


def t_sets(space, S, psi, n):
    """``T_0 .. T_n`` for the table ``psi`` (mask valued, keyed by list key)."""
    out = [{psi[NIL.key]}]
    for k in range(n):
        nxt = set(out[-1])
        for l in lists_of_length(S, k):
            for a in S.iterate():
                nxt.add(space.exp(psi[ListVal((a,) + l.items).key], psi[l.key]))
        out.append(nxt)
    return out


def check_psi(space, S, psi, n):
    """Failures (possibly empty) of the lemma's invariants for one table."""
    fails = []
    ts = t_sets(space, S, psi, n)
    meets = [space.big_meet(t) for t in ts]
    for k in range(n + 1):
        for l in lists_of_length(S, k):
            if not space.le_open(meets[n], psi[l.key]):
                fails.append(("invariant", l, meets[n], psi[l.key]))
    for k in range(n):
        if not space.le_open(meets[k + 1], meets[k]):
            fails.append(("monotone", k))
    all_psi = space.big_meet(psi.values())
    if space.exp(all_psi, meets[n]) != space.full:
        fails.append(("top", all_psi, meets[n]))
    return fails


def psi_tables(space, S, n, samples=200, seed=0, limit=PSI_EXHAUSTIVE_LIMIT):
    """Yield ``(psi, exhaustive)``; all tables when few enough, else a seeded sample."""
    lists = kleene(S, n, cap=10 ** 6).elems
    opens = space.opens
    total = len(opens) ** len(lists)
    if total <= limit:
        for combo in itertools.product(opens, repeat=len(lists)):
            yield {l.key: o for l, o in zip(lists, combo)}, True
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            yield {l.key: rng.choice(opens) for l in lists}, False


def check_list_ind_lemma(space, S, n, samples=200, seed=0, psi=None):
    """Check the lemma on one ``psi`` table, or on all / sampled tables."""
    rep = ListIndReport(True)
    source = [(psi, True)] if psi is not None else psi_tables(space, S, n, samples, seed)
    for table, exh in source:
        rep.tables += 1
        rep.exhaustive &= exh
        fails = check_psi(space, S, table, n)
        if fails:
            rep.ok = False
            rep.failures.append((table, fails))
    return rep
