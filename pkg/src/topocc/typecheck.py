"""Bidirectional type checking for CC^omega with lists.

A context is a sequence of ``(name, type)`` pairs, outermost first; each type
is a de Bruijn term over the entries before it. Inferred types are returned
in normal form. Cumulativity is only used by :func:`check`.
"""
import json
from dataclasses import dataclass

from .config import DEFAULT
from .parsing import parse_term, print_term
from .syntax import (PROP, App, Const, FuelExhausted, Lam, Pi, Sort, Var,
                     beta_eq, normalize, shift, subst, whnf)

PP, TP, PT, TT = "PP", "TP", "PT", "TT"
PROOF, PROPOSITIONAL, OTHER = "Proof", "Propositional", "Other"
RULES = ("Axiom-Prop", "Axiom-Type", "Weakening", "PI-Type", "Abstract", "Apply",
         "Variable", "Beta Equality", "Subsumption")

_SIGNATURES = {
    "list": "Type0 -> Type0",
    "nil": "forall A : Type0, list A",
    "cons": "forall A : Type0, A -> list A -> list A",
    "list_rec": ("forall A : Type0, forall F : list A -> Type0, F (nil A) -> "
                 "(forall a : A, forall l : list A, F l -> F (cons A a l)) -> "
                 "forall l : list A, F l"),
    "list_ind": ("forall A : Type0, forall P : list A -> Prop, P (nil A) -> "
                 "(forall a : A, forall l : list A, P l -> P (cons A a l)) -> "
                 "forall l : list A, P l"),
}
SIGNATURES = {k: normalize(parse_term(v)) for k, v in _SIGNATURES.items()}


class TypeCheckError(Exception):
    """``rule`` names the typing rule that failed; ``expected``/``actual`` are
    printed terms (or None)."""

    def __init__(self, rule, message, expected=None, actual=None, location=None):
        super().__init__(message)
        self.rule = rule
        self.message = message
        self.expected = expected
        self.actual = actual
        self.location = location

    def to_json(self):
        return json.dumps({"rule": self.rule, "expected": self.expected,
                           "actual": self.actual, "location": self.location,
                           "message": self.message}, ensure_ascii=False)


@dataclass(frozen=True)
class Judgment:
    ctx: tuple
    term: object
    ty: object


# -- contexts ----------------------------------------------------------------

def names(ctx):
    return [n for n, _ in ctx]


def extend(ctx, hint, ty):
    taken = set(names(ctx))
    name = hint if hint and hint != "_" else "x"
    base, k = name, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return tuple(ctx) + ((name, ty),)


def lookup(ctx, i):
    if i >= len(ctx):
        raise TypeCheckError("Variable", f"unbound index {i}", location=f"#{i}")
    return shift(ctx[len(ctx) - 1 - i][1], i + 1)


def _show(t, ctx):
    try:
        return print_term(t, names(ctx))
    except (ValueError, TypeError):
        return repr(t)


# -- the checker ---------------------------------------------------------------

class Checker:
    def __init__(self, config=DEFAULT):
        self.fuel = config.fuel
        self.max_level = config.max_level
        self._memo = {}
        # names of the rules used by derivations built so far (cached
        # subderivations are not revisited, so use a fresh checker per judgment)
        self.rules = set()

    def nf(self, t):
        try:
            return normalize(t, self.fuel)
        except FuelExhausted as e:
            raise TypeCheckError("Beta Equality", str(e)) from None

    def wf_context(self, ctx):
        for k in range(len(ctx)):
            name, ty = ctx[k]
            try:
                self.infer_sort(ctx[:k], ty)
            except TypeCheckError as e:
                e.location = f"context entry {name!r}: {e.location or ''}".rstrip(": ")
                raise
        return True

    def infer(self, ctx, t):
        ctx = tuple(ctx)
        key = (ctx, t)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._infer(ctx, t)
            self._memo[key] = hit
        return hit

    def _infer(self, ctx, t):
        if ctx:
            self.rules.add("Weakening")
        if isinstance(t, Sort):
            self.rules.add("Axiom-Prop" if t.level is None else "Axiom-Type")
            level = 0 if t.level is None else t.level + 1
            if t.level is not None and level > self.max_level:
                raise TypeCheckError("Axiom-Type", f"Type{t.level} has no type below max level {self.max_level}",
                                     location=_show(t, ctx))
            return Sort(level)
        if isinstance(t, Var):
            self.rules.add("Variable")
            return self.nf(lookup(ctx, t.index))
        if isinstance(t, Const):
            return SIGNATURES[t.name]
        if isinstance(t, Pi):
            s1 = self.infer_sort(ctx, t.dom)
            s2 = self.infer_sort(extend(ctx, t.hint, t.dom), t.cod)
            self.rules.add("PI-Type")
            return pi_sort(s1, s2)
        if isinstance(t, Lam):
            self.infer_sort(ctx, t.ann)
            inner = extend(ctx, t.hint, t.ann)
            body_ty = self.infer(inner, t.body)
            self.infer_sort(inner, body_ty)
            self.rules.add("Abstract")
            return Pi(self.nf(t.ann), body_ty, t.hint)
        if isinstance(t, App):
            fty = self.infer(ctx, t.fn)
            f = whnf(fty, self.fuel)
            if not isinstance(f, Pi):
                raise TypeCheckError("Apply", "applying a non-function",
                                     expected="a product type", actual=_show(fty, ctx),
                                     location=_show(t, ctx))
            self.check(ctx, t.arg, f.dom, rule="Apply")
            self.rules.add("Apply")
            out = subst(f.cod, 0, t.arg)
            nf = self.nf(out)
            if nf != out:
                self.rules.add("Beta Equality")
            return nf
        raise TypeError(f"not a term: {t!r}")

    def infer_sort(self, ctx, t):
        ty = whnf(self.infer(ctx, t), self.fuel)
        if not isinstance(ty, Sort):
            raise TypeCheckError("PI-Type", "expected a type",
                                 expected="a sort", actual=_show(ty, ctx), location=_show(t, ctx))
        return ty

    def check(self, ctx, t, ty, rule="Beta Equality"):
        ctx = tuple(ctx)
        self.infer_sort(ctx, ty)
        actual = self.infer(ctx, t)
        try:
            if beta_eq(actual, ty, self.fuel):
                if actual != ty:
                    self.rules.add("Beta Equality")
                return True
            if subsumes(actual, self.nf(ty), self.fuel):
                self.rules.add("Subsumption")
                return True
        except FuelExhausted as e:
            raise TypeCheckError(rule, str(e)) from None
        raise TypeCheckError(rule, "type mismatch", expected=_show(ty, ctx),
                             actual=_show(actual, ctx), location=_show(t, ctx))

    def sort_of(self, ctx, ty):
        return self.infer_sort(ctx, ty)

    def is_proof_term(self, ctx, t):
        ty = self.infer(ctx, t)
        # types of types are sorts, never propositions; this also avoids
        # asking for the type of the top sort
        if isinstance(whnf(ty, self.fuel), Sort):
            return False
        return self.sort_of(ctx, ty).is_prop

    def is_propositional(self, ctx, t):
        return self.infer(ctx, t) == PROP

    def prod_class(self, ctx, dom, cod, hint="x"):
        s1 = self.sort_of(ctx, dom)
        s2 = self.sort_of(extend(ctx, hint, dom), cod)
        return ("P" if s1.is_prop else "T") + ("P" if s2.is_prop else "T")

    def classify_judgment(self, ctx, t):
        ty = self.infer(ctx, t)
        if self.sort_of(ctx, ty).is_prop:
            return PROOF, ty
        if ty == PROP:
            return PROPOSITIONAL, ty
        return OTHER, ty

    def judge(self, ctx, t, ty=None):
        self.wf_context(ctx)
        if ty is None:
            return Judgment(tuple(ctx), t, self.infer(ctx, t))
        self.check(ctx, t, ty)
        return Judgment(tuple(ctx), t, self.nf(ty))


def pi_sort(s1, s2):
    """Sort of ``forall x : A, B`` from the sorts of ``A`` and ``B``."""
    if s2.is_prop:
        return PROP
    if s1.is_prop:
        return s2
    return Sort(max(s1.level, s2.level))


def subsumes(small, big, fuel=DEFAULT.fuel):
    """``forall xs, Type_i`` against ``forall xs, Type_j`` with ``i < j``.

    Both arguments are expected in normal form.
    """
    while isinstance(small, Pi) and isinstance(big, Pi):
        if not beta_eq(small.dom, big.dom, fuel):
            return False
        small, big = small.cod, big.cod
    return (isinstance(small, Sort) and isinstance(big, Sort)
            and not small.is_prop and not big.is_prop and small.level < big.level)


# module-level conveniences with the default configuration

def _checker(config):
    return Checker(config or DEFAULT)


def wf_context(ctx, config=None):
    return _checker(config).wf_context(ctx)


def infer(ctx, t, config=None):
    return _checker(config).infer(ctx, t)


def check(ctx, t, ty, config=None):
    return _checker(config).check(ctx, t, ty)


def sort_of(ctx, ty, config=None):
    return _checker(config).sort_of(ctx, ty)


def is_proof_term(ctx, t, config=None):
    return _checker(config).is_proof_term(ctx, t)


def prod_class(ctx, dom, cod, config=None):
    return _checker(config).prod_class(ctx, dom, cod)


def classify_judgment(ctx, t, config=None):
    return _checker(config).classify_judgment(ctx, t)
