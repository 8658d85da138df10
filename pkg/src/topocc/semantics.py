"""Interpretation of judgments in a well-behaved finite Alexandroff space.

Terms are first elaborated against the type checker into nodes that record
what the interpretation needs: which subterms are proofs, the product class
of every binder and whether application arguments are proofs. Evaluation then
follows the clauses of the interpretation directly. A proof term evaluates to
the infimum of the proof entries of the valuation.
"""
import itertools
import random
import time
from dataclasses import dataclass, field

from .config import DEFAULT
from .parsing import conj, disj, eq, exists, iff, parse_term, print_term
from .syntax import PROP, App, Const, Lam, Pi, Sort, Var, free_indices, shift
from .typecheck import PP, PT, TP, TT, Checker, TypeCheckError, extend
from .values import (CarrierTooLarge, FinSet, Fun, OpenVal, Point, ProdSet, TestUniverse,
                     Tracker, UndefinedApplication, UniverseSet)

MAX_VALUATIONS = 100_000

# node tags
N_PROOF, N_VAR, N_SORT, N_CONST, N_PI, N_LAM, N_APP = range(7)


@dataclass(frozen=True)
class Valuation:
    values: tuple
    tags: tuple  # True for proof entries

    def __len__(self):
        return len(self.values)


@dataclass
class EvalReport:
    value: object
    exact: bool
    elapsed_ms: float = 0.0


@dataclass
class CheckReport:
    ok: bool
    exact: bool
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped: str = ""

    def __bool__(self):
        return self.ok


class Model:
    """A space, a test universe and a configuration, plus evaluation caches."""

    def __init__(self, space, universe=None, config=DEFAULT, exhaustive_pp=False, check_domains=True):
        report = space.well_behaved()
        if not report:
            raise ValueError(f"space is not well behaved: {report.reason}")
        self.space = space
        self.config = config
        self.universe = universe or TestUniverse(max_level=config.max_level)
        self.tracker = Tracker(self.universe, config.list_depth, config.carrier_cap, check_domains)
        self.checker = Checker(config)
        self.exhaustive_pp = exhaustive_pp
        self.bottom = space.bottom
        self.top = space.top
        self.inf = space.inf_table
        self.prop_set = FinSet(OpenVal(o) for o in space.opens)
        self._nodes = {}
        self._fv = {}
        self._consts = {}
        # (node, ids of the free-variable values, floor) -> (value, pinned values);
        # pinning keeps the ids from being reused while the entry lives
        self._memo = {}

    @property
    def approx(self):
        return self.tracker.approx

    def reset(self):
        self.tracker.approx = False
        self._memo.clear()

    # elaboration -------------------------------------------------------------

    def elaborate(self, ctx, t):
        ctx = tuple(ctx)
        key = (ctx, t)
        node = self._nodes.get(key)
        if node is None:
            node = self._elab(ctx, t)
            self._nodes[key] = node
            self._fv[id(node)] = tuple(sorted(free_indices(t)))
        return node

    def _elab(self, ctx, t):
        ck = self.checker
        if isinstance(t, Sort):
            return (N_SORT, t.level)
        if isinstance(t, Const):
            return (N_PROOF,) if t.name == "list_ind" else (N_CONST, t.name)
        if ck.is_proof_term(ctx, t):
            return (N_PROOF,)
        if isinstance(t, Var):
            return (N_VAR, t.index)
        if isinstance(t, Pi):
            cls = ck.prod_class(ctx, t.dom, t.cod, t.hint)
            inner = extend(ctx, t.hint, t.dom)
            return (N_PI, cls, self.elaborate(ctx, t.dom), self.elaborate(inner, t.cod))
        if isinstance(t, Lam):
            dom_prop = ck.sort_of(ctx, t.ann).is_prop
            inner = extend(ctx, t.hint, t.ann)
            return (N_LAM, dom_prop, self.elaborate(ctx, t.ann), self.elaborate(inner, t.body))
        if isinstance(t, App):
            return (N_APP, ck.is_proof_term(ctx, t.arg), self.elaborate(ctx, t.fn), self.elaborate(ctx, t.arg))
        raise TypeError(f"not a term: {t!r}")

    # evaluation ----------------------------------------------------------------

    def push_floor(self, fl, v, is_proof):
        if not is_proof:
            return fl
        if not isinstance(v, Point):
            raise UndefinedApplication(f"proof entry {v!r} is not a point")
        return self.inf[fl][v.p]

    def ev(self, node, vals, fl):
        tag = node[0]
        if tag >= N_PI:
            n = len(vals)
            pinned = tuple(vals[n - 1 - i] for i in self._fv[id(node)])
            key = (id(node), tuple(map(id, pinned)), fl)
            hit = self._memo.get(key)
            if hit is None:
                hit = (self._ev(node, vals, fl), pinned)
                self._memo[key] = hit
            return hit[0]
        return self._ev(node, vals, fl)

    def _ev(self, node, vals, fl):
        tag = node[0]
        if tag == N_PROOF:
            return Point(fl)
        if tag == N_VAR:
            return vals[len(vals) - 1 - node[1]]
        if tag == N_SORT:
            return self.prop_set if node[1] is None else UniverseSet(node[1], self.tracker)
        if tag == N_CONST:
            return self.constant(node[1])
        if tag == N_PI:
            _, cls, dnode, cnode = node
            dom = self.ev(dnode, vals, fl)
            proof_dom = cls[0] == "P"

            def fam(a):
                return self.ev(cnode, vals + (a,), self.push_floor(fl, a, proof_dom))
            return prod_op(self, cls, dom, fam)
        if tag == N_LAM:
            _, dom_prop, dnode, bnode = node
            dom = self.ev(dnode, vals, fl)

            def body(a):
                return self.ev(bnode, vals + (a,), self.push_floor(fl, a, dom_prop))
            return Fun(dom, body, self.tracker)
        if tag == N_APP:
            _, arg_proof, fnode, anode = node
            return app_op(self, arg_proof, self.ev(fnode, vals, fl), self.ev(anode, vals, fl))
        raise ValueError(f"bad node {node!r}")

    def constant(self, name):
        if name not in self._consts:
            from .lists import list_constant
            self._consts[name] = list_constant(self, name)
        return self._consts[name]

    def floor_of(self, valuation):
        fl = self.top
        for v, tag in zip(valuation.values, valuation.tags):
            fl = self.push_floor(fl, v, tag)
        return fl

    def value(self, ctx, t, valuation=None):
        """Interpretation of ``t`` under ``valuation`` (no reset of the flag)."""
        valuation = valuation or Valuation((), ())
        if len(valuation) != len(ctx):
            raise ValueError("valuation does not match the context")
        node = self.elaborate(ctx, t)
        return self.ev(node, tuple(valuation.values), self.floor_of(valuation))

    def eval(self, ctx, t, valuation=None):
        self.checker.infer(ctx, t)
        self.reset()
        start = time.perf_counter()
        v = self.value(ctx, t, valuation)
        if isinstance(v, (Fun, ProdSet)):
            v.key  # force the graph so truncation shows up in the flag
        return EvalReport(v, not self.approx, (time.perf_counter() - start) * 1000)

    def eval_context(self, ctx):
        """All valuations of ``ctx`` with proof tags."""
        ctx = tuple(ctx)
        self.checker.wf_context(ctx)
        tags = tuple(self.checker.sort_of(ctx[:k], ctx[k][1]).is_prop for k in range(len(ctx)))
        out = [((), self.top)]
        for k in range(len(ctx)):
            node = self.elaborate(ctx[:k], ctx[k][1])
            nxt = []
            for vals, fl in out:
                carrier = self.ev(node, vals, fl)
                for a in carrier.iterate():
                    nxt.append((vals + (a,), self.push_floor(fl, a, tags[k])))
            out = nxt
            if len(out) > MAX_VALUATIONS:
                raise CarrierTooLarge(f"context has more than {MAX_VALUATIONS} valuations")
        return [Valuation(vals, tags) for vals, _ in out]


# -- the two operators -------------------------------------------------------------

def app_op(model, arg_is_proof, f, a):
    if not isinstance(f, Fun):
        raise UndefinedApplication(f"applying a non-function {f!r}")
    if arg_is_proof:
        bot = Point(model.bottom)
        if not (f.domain.contains(a) and f.domain.contains(bot)):
            raise UndefinedApplication("domain lacks the argument or the bottom point")
        return f.apply(bot)
    if model.tracker.check_domains and not f.domain.contains(a):
        raise UndefinedApplication(f"argument {a!r} is outside the domain {f.domain!r}")
    return f.apply(a)


def prod_op(model, cls, dom, family):
    sp = model.space
    if cls == PP:
        if not isinstance(dom, OpenVal):
            raise UndefinedApplication("PP product over a non-open domain")
        pts = list(dom.iterate()) if model.exhaustive_pp else [Point(model.bottom)] * bool(dom.mask)
        acc = sp.full
        for a in pts:
            acc &= _open(family(a)).mask
        return OpenVal(sp.exp(sp.interior(acc), dom.mask))
    if cls == TP:
        acc = sp.full
        for a in dom.iterate():
            acc &= _open(family(a)).mask
        return OpenVal(sp.interior(acc))
    if cls in (PT, TT):
        if cls == PT and not isinstance(dom, OpenVal):
            raise UndefinedApplication("PT product over a non-open domain")
        return ProdSet(dom, family, model.tracker, const_only=cls == PT)
    raise ValueError(f"unknown product class {cls!r}")


def _open(v):
    if not isinstance(v, OpenVal):
        raise UndefinedApplication(f"family member {v!r} is not an open")
    return v


# -- functional entry points --------------------------------------------------------

def floor(space, valuation):
    fl = space.top
    for v, tag in zip(valuation.values, valuation.tags):
        if tag:
            if not isinstance(v, Point):
                raise ValueError(f"proof entry {v!r} is not a point")
            fl = space.inf_table[fl][v.p]
    return fl


def evaluate(space, ctx, t, valuation=None, universe=None, config=DEFAULT, **kw):
    return Model(space, universe, config, **kw).eval(ctx, t, valuation)


def eval_context(space, ctx, universe=None, config=DEFAULT):
    return Model(space, universe, config).eval_context(ctx)


def check_soundness(model, ctx, t, ty=None):
    """``[[t]](g)`` belongs to ``[[T]](g)`` for every valuation ``g``."""
    ctx = tuple(ctx)
    ty = model.checker.judge(ctx, t, ty).ty
    model.reset()
    rep = CheckReport(True, True)
    try:
        for g in model.eval_context(ctx):
            rep.checked += 1
            v = model.value(ctx, t, g)
            carrier = model.value(ctx, ty, g)
            if not carrier.contains(v):
                rep.ok = False
                rep.violations.append(g)
    except UndefinedApplication as e:
        rep.ok = False
        rep.violations.append(f"undefined: {e}")
    rep.exact = not model.approx
    return rep


def check_beta_soundness(model, ctx, t1, t2):
    ctx = tuple(ctx)
    ck = model.checker
    ty1 = ck.infer(ctx, t1)
    ck.check(ctx, t2, ty1)
    model.reset()
    rep = CheckReport(True, True)
    try:
        for g in model.eval_context(ctx):
            rep.checked += 1
            if model.value(ctx, t1, g) != model.value(ctx, t2, g):
                rep.ok = False
                rep.violations.append(g)
    except UndefinedApplication as e:
        rep.ok = False
        rep.violations.append(f"undefined: {e}")
    rep.exact = not model.approx
    return rep


def check_semantic_irrelevance(model, ctx, t, slot):
    """``t`` (not a proof) evaluates alike on valuations differing only at the
    proof entry ``slot`` (an index into ``ctx``, outermost first)."""
    ctx = tuple(ctx)
    ck = model.checker
    if ck.is_proof_term(ctx, t):
        raise ValueError("the term is a proof; the property is about non-proofs")
    if not ck.sort_of(ctx[:slot], ctx[slot][1]).is_prop:
        raise ValueError("the chosen slot is not a proof entry")
    model.reset()
    rep = CheckReport(True, True)
    groups = {}
    for g in model.eval_context(ctx):
        rest = tuple(v.key for i, v in enumerate(g.values) if i != slot)
        groups.setdefault(rest, []).append(g)
    for gs in groups.values():
        vals = [model.value(ctx, t, g) for g in gs]
        rep.checked += len(gs)
        if any(v != vals[0] for v in vals[1:]):
            rep.ok = False
            rep.violations.append(gs)
    rep.exact = not model.approx
    return rep


# -- logical symbols -------------------------------------------------------------------

PQ = (("P", PROP), ("Q", PROP))


def check_logical_symbols(model):
    """Every clause of the logical-symbol theorem on ``model``'s space.

    Returns ``{clause: CheckReport}`` with clauses ``"i"`` .. ``"vii"``.
    """
    sp = model.space
    P, Q = Var(1, "P"), Var(0, "Q")
    out = {}

    def opens_pq():
        for a in sp.opens:
            for b in sp.opens:
                yield Valuation((OpenVal(a), OpenVal(b)), (False, False))

    def clause(name, fn):
        model.reset()
        rep = CheckReport(True, True)
        for item in fn():
            rep.checked += 1
            if item is not None:
                rep.ok = False
                rep.violations.append(item)
        rep.exact = not model.approx
        out[name] = rep

    bottom = parse_term("False")
    clause("i", lambda: [None if model.value((), bottom).mask == 0 else "bottom is not empty"])

    def binop(term, op):
        def run():
            for g in opens_pq():
                a, b = g.values[0].mask, g.values[1].mask
                got = model.value(PQ, term, g).mask
                yield None if got == op(a, b) else (a, b, got)
        return run

    clause("ii", binop(conj(P, Q), lambda a, b: a & b))
    clause("iii", binop(disj(P, Q), lambda a, b: a | b))

    # (iv): exists over a propositional domain; the body may use the proof
    # variable only through proof positions, so it is a proposition in P and Q
    ex_prop = exists(P, shift(Q, 1), "x")
    clause("iv", binop(ex_prop, lambda a, b: a & b if a else 0))

    # (v): exists over a Type-sorted domain: x : Prop, body x /\ Q, and x : A
    # for carrier-valued A with body Q x
    def clause_v():
        body = conj(Var(0, "x"), shift(Q, 1))
        t = exists(PROP, body, "x")
        for g in opens_pq():
            b = g.values[1].mask
            want = sp.big_join([o & b for o in sp.opens])
            got = model.value(PQ, t, g).mask
            yield None if got == want else ("Prop", b, got)
        ctx = (("A", Sort(0)), ("R", Pi(Var(0, "A"), PROP, "_")))
        t = exists(Var(1, "A"), App(Var(1, "R"), Var(0, "x")), "x")
        for g in model.eval_context(ctx):
            A, R = g.values
            want = sp.big_join([R.apply(a).mask for a in A.iterate()])
            got = model.value(ctx, t, g).mask
            yield None if got == want else ("carrier", got, want)
    clause("v", clause_v)

    def clause_vi():
        t = iff(P, Q)
        for g in opens_pq():
            a, b = g.values[0].mask, g.values[1].mask
            got = model.value(PQ, t, g).mask
            yield None if got != sp.full or a == b else (a, b)
    clause("vi", clause_vi)

    def clause_vii():
        # carriers: every test-universe carrier, and O(X) itself while the
        # predicates O(X) -> O(X) stay under the carrier cap
        m = len(sp.opens)
        if m ** m <= model.config.carrier_cap:
            ctx = (("x", PROP), ("y", PROP))
            t = eq(Var(1, "x"), PROP, Var(0, "y"))
            for g in opens_pq():
                got = model.value(ctx, t, g).mask
                same = g.values[0] == g.values[1]
                yield None if (got == sp.full) == same else ("Prop", g.values, got)
        ctx = (("A", Sort(0)), ("x", Var(0, "A")), ("y", Var(1, "A")))
        t = eq(Var(1, "x"), Var(2, "A"), Var(0, "y"))
        for g in model.eval_context(ctx):
            got = model.value(ctx, t, g).mask
            same = g.values[1] == g.values[2]
            yield None if (got == sp.full) == same else ("carrier", g.values, got)
    clause("vii", clause_vii)
    return out


PROOF_IRRELEVANCE = "forall P : Prop, forall p1 p2 : P, p1 =[P] p2"


def check_proof_irrelevance(model):
    rep = model.eval((), parse_term(PROOF_IRRELEVANCE))
    return CheckReport(rep.value.mask == model.space.full, rep.exact, 1,
                       [] if rep.value.mask == model.space.full else [rep.value])


# -- random redexes for the beta sweep -------------------------------------------------

REDEX_CONTEXT = (("P", PROP), ("Q", PROP), ("p", Var(1, "P")))


def random_redexes(count, seed=0, config=DEFAULT):
    """Seeded well-typed redexes ``(fun x : A => body) arg`` over
    ``REDEX_CONTEXT``, paired with their one-step contracta."""
    from .syntax import subst
    rng = random.Random(seed)
    ck = Checker(config)
    ctx = REDEX_CONTEXT
    pool_types = [PROP, Var(2, "P"), Var(1, "Q"), Pi(PROP, PROP, "_"),
                  Pi(Var(2, "P"), Var(2, "Q"), "_")]
    out = []
    seen = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > count * 200:
            raise RuntimeError("redex generator is stuck")
        A = rng.choice(pool_types)
        inner = extend(ctx, "x", A)
        body = _random_term(rng, ck, inner, 3)
        if body is None:
            continue
        arg = _inhabitant(rng, ck, ctx, A)
        if arg is None:
            continue
        redex = App(Lam(A, body, "x"), arg)
        try:
            ck.infer(ctx, redex)
        except TypeCheckError:
            continue
        if redex in seen:
            continue
        seen.add(redex)
        out.append((redex, subst(body, 0, arg)))
    return out


def _terms_of(ck, ctx):
    """Small atoms available in ``ctx``: variables, sorts and a few closed terms."""
    atoms = [Var(i) for i in range(len(ctx))]
    atoms += [PROP, parse_term("False"), parse_term("fun (X : Prop) => X"),
              parse_term("forall X : Prop, X -> X")]
    return atoms


def _random_term(rng, ck, ctx, depth):
    atoms = _terms_of(ck, ctx)
    for _ in range(20):
        r = rng.random()
        if depth <= 0 or r < 0.35:
            t = rng.choice(atoms)
        elif r < 0.55:
            a = rng.choice(atoms)
            b = _random_term(rng, ck, extend(ctx, "y", a), depth - 1) if _is_type(ck, ctx, a) else None
            t = Pi(a, b, "y") if b is not None else None
        elif r < 0.75:
            a = rng.choice(atoms)
            b = _random_term(rng, ck, extend(ctx, "y", a), depth - 1) if _is_type(ck, ctx, a) else None
            t = Lam(a, b, "y") if b is not None else None
        else:
            f = _random_term(rng, ck, ctx, depth - 1)
            x = _random_term(rng, ck, ctx, depth - 1)
            t = App(f, x) if f is not None and x is not None else None
            if t is not None and rng.random() < 0.5:
                # an inner redex makes the contractum differ in more than one spot
                a = rng.choice(atoms)
                if _is_type(ck, ctx, a):
                    arg = _inhabitant(rng, ck, ctx, a)
                    if arg is not None:
                        t = App(Lam(a, shift(t, 1), "z"), arg)
        if t is None:
            continue
        try:
            ck.infer(ctx, t)
            return t
        except TypeCheckError:
            continue
    return None


def _is_type(ck, ctx, a):
    try:
        ck.infer_sort(ctx, a)
        return True
    except TypeCheckError:
        return False


def _inhabitant(rng, ck, ctx, A):
    cands = [t for t in _terms_of(ck, ctx) + [parse_term("fun (X : Prop) => X"), parse_term("fun (X : Prop) => False")]]
    rng.shuffle(cands)
    for c in cands:
        try:
            ck.check(ctx, c, A)
            return c
        except TypeCheckError:
            continue
    # build an identity-like inhabitant for arrows
    if isinstance(A, Pi):
        body = _inhabitant(rng, ck, extend(ctx, "z", A.dom), A.cod)
        if body is not None:
            lam = Lam(A.dom, body, "z")
            try:
                ck.check(ctx, lam, A)
                return lam
            except TypeCheckError:
                return None
    return None


def show(t, ctx=()):
    return print_term(t, [n for n, _ in ctx])
