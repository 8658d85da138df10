"""Terms of CC^omega with lists, de Bruijn style.

``Var(0)`` is the innermost binder; indices past the enclosing binders refer
to context slots counted from the end (``Var(0)`` in an empty binder prefix is
the last context entry). Name hints are carried for printing only and never
take part in equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

LIST_CONSTANTS = ("list", "nil", "cons", "list_rec", "list_ind")
DEFAULT_FUEL = 10_000


class FuelExhausted(RuntimeError):
    """Reduction ran out of steps: the input diverges or the fuel is too low."""


@dataclass(frozen=True)
class Var:
    index: int
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    ann: "Term"
    body: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Pi:
    dom: "Term"
    cod: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Sort:
    """``level=None`` is Prop, otherwise Type_level."""
    level: Optional[int] = None

    @property
    def is_prop(self):
        return self.level is None


@dataclass(frozen=True)
class Const:
    name: str

    def __post_init__(self):
        if self.name not in LIST_CONSTANTS:
            raise ValueError(f"unknown constant {self.name!r}")


Term = Union[Var, App, Lam, Pi, Sort, Const]

PROP = Sort(None)


def Type(level):
    return Sort(level)


def apps(head, *args):
    for a in args:
        head = App(head, a)
    return head


def spine(t):
    """Split ``f a1 .. an`` into ``(f, [a1, .., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def shift(t, d, cutoff=0):
    """Add ``d`` to every free index ``>= cutoff``."""
    if d == 0:
        return t
    if isinstance(t, Var):
        if t.index >= cutoff:
            if t.index + d < 0:
                raise ValueError("shift produced a negative index")
            return Var(t.index + d, t.hint)
        return t
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Lam):
        return Lam(shift(t.ann, d, cutoff), shift(t.body, d, cutoff + 1), t.hint)
    if isinstance(t, Pi):
        return Pi(shift(t.dom, d, cutoff), shift(t.cod, d, cutoff + 1), t.hint)
    return t


def subst(t, j, v):
    """Replace ``Var(j)`` by ``v`` and close the gap left by slot ``j``.

    ``v`` lives in the scope of ``t`` with slot ``j`` removed; it is lifted by
    one at every binder crossed. ``subst(body, 0, a)`` is the beta contractum
    of ``(fun x => body) a``.
    """
    return _subst(t, j, v, 0)


def _subst(t, j, v, depth):
    if isinstance(t, Var):
        k = j + depth
        if t.index == k:
            return shift(v, depth)
        if t.index > k:
            return Var(t.index - 1, t.hint)
        return t
    if isinstance(t, App):
        return App(_subst(t.fn, j, v, depth), _subst(t.arg, j, v, depth))
    if isinstance(t, Lam):
        return Lam(_subst(t.ann, j, v, depth), _subst(t.body, j, v, depth + 1), t.hint)
    if isinstance(t, Pi):
        return Pi(_subst(t.dom, j, v, depth), _subst(t.cod, j, v, depth + 1), t.hint)
    return t


def free_indices(t, depth=0, acc=None):
    """Set of free indices of ``t`` (relative to the outside of ``t``)."""
    if acc is None:
        acc = set()
    if isinstance(t, Var):
        if t.index >= depth:
            acc.add(t.index - depth)
    elif isinstance(t, App):
        free_indices(t.fn, depth, acc)
        free_indices(t.arg, depth, acc)
    elif isinstance(t, (Lam, Pi)):
        a, b = (t.ann, t.body) if isinstance(t, Lam) else (t.dom, t.cod)
        free_indices(a, depth, acc)
        free_indices(b, depth + 1, acc)
    return acc


def free_context_arity(t):
    """Number of context slots ``t`` needs: one past its largest free index."""
    fv = free_indices(t)
    return max(fv) + 1 if fv else 0


def occurs(t, j=0):
    return j in free_indices(t)


def size(t):
    if isinstance(t, App):
        return 1 + size(t.fn) + size(t.arg)
    if isinstance(t, Lam):
        return 1 + size(t.ann) + size(t.body)
    if isinstance(t, Pi):
        return 1 + size(t.dom) + size(t.cod)
    return 1


# -- reduction -------------------------------------------------------------

def _iota(head, args):
    """Contract a list recursor redex at the head of a spine, if any.

    Returns the contractum with surplus arguments reapplied, else None.
    """
    if not (isinstance(head, Const) and head.name in ("list_rec", "list_ind")):
        return None
    if len(args) < 5:
        return None
    A, F, t1, t2, l = args[:5]
    rest = args[5:]
    lh, largs = spine(l)
    if not isinstance(lh, Const):
        return None
    if lh.name == "nil" and len(largs) == 1:
        return apps(t1, *rest)
    if lh.name == "cons" and len(largs) == 3:
        _, a, tail = largs
        rec = apps(head, A, F, t1, t2, tail)
        return apps(t2, a, tail, rec, *rest)
    return None


def root_step(t):
    """Contract the redex whose root is exactly ``t``, or None."""
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return subst(t.fn.body, 0, t.arg)
    if isinstance(t, App):
        head, args = spine(t)
        if len(args) == 5:
            return _iota(head, args)
    return None


def head_step(t):
    """Contract the redex at the head of the application spine of ``t``.

    This is the leftmost-outermost redex whenever one sits on the spine.
    """
    head, args = spine(t)
    if isinstance(head, Lam) and args:
        return apps(subst(head.body, 0, args[0]), *args[1:])
    return _iota(head, args)


def step(t):
    """One leftmost-outermost reduction step, or None if ``t`` is normal."""
    r = head_step(t)
    if r is not None:
        return r
    if isinstance(t, App):
        s = step(t.fn)
        if s is not None:
            return App(s, t.arg)
        s = step(t.arg)
        if s is not None:
            return App(t.fn, s)
        return None
    if isinstance(t, (Lam, Pi)):
        a, b = (t.ann, t.body) if isinstance(t, Lam) else (t.dom, t.cod)
        s = step(a)
        if s is not None:
            return type(t)(s, b, t.hint)
        s = step(b)
        if s is not None:
            return type(t)(a, s, t.hint)
    return None


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n):
        if n <= 0:
            raise ValueError("fuel must be positive")
        self.left = n

    def burn(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("reduction did not terminate within the fuel budget")


def _whnf(t, fuel):
    while True:
        r = head_step(t)
        if r is None:
            return t
        fuel.burn()
        t = r


def _nf(t, fuel):
    # normal order: head to weak head normal form, then components left to
    # right. A stuck recursor's scrutinee is normalised before its iota step
    # fires, so step counts can differ from step() but normal forms cannot.
    t = _whnf(t, fuel)
    if isinstance(t, App):
        head, args = spine(t)
        head = _nf(head, fuel)
        out = head
        for a in args:
            out = App(out, _nf(a, fuel))
        if isinstance(head, (Lam, Const)):
            # normalised arguments may expose an iota redex at the head
            again = head_step(out)
            if again is not None:
                fuel.burn()
                return _nf(again, fuel)
        return out
    if isinstance(t, Lam):
        return Lam(_nf(t.ann, fuel), _nf(t.body, fuel), t.hint)
    if isinstance(t, Pi):
        return Pi(_nf(t.dom, fuel), _nf(t.cod, fuel), t.hint)
    return t


def normalize(t, fuel=DEFAULT_FUEL):
    """Beta/iota normal form by leftmost-outermost reduction."""
    return _nf(t, _Fuel(fuel))


def whnf(t, fuel=DEFAULT_FUEL):
    return _whnf(t, _Fuel(fuel))


def normalize_by_steps(t, fuel=DEFAULT_FUEL):
    """Reference normaliser iterating :func:`step`; slow, used to cross-check."""
    f = _Fuel(fuel)
    while True:
        s = step(t)
        if s is None:
            return t
        f.burn()
        t = s


def beta_eq(t1, t2, fuel=DEFAULT_FUEL):
    if t1 == t2:
        return True
    return normalize(t1, fuel) == normalize(t2, fuel)


def redex_paths(t, path=()):
    """Paths (tuples of child slots) of every redex in ``t``.

    Slots: 0/1 for App fn/arg, Lam ann/body and Pi dom/cod.
    """
    out = []
    if root_step(t) is not None:
        out.append(path)
    if isinstance(t, App):
        out += redex_paths(t.fn, path + (0,))
        out += redex_paths(t.arg, path + (1,))
    elif isinstance(t, Lam):
        out += redex_paths(t.ann, path + (0,))
        out += redex_paths(t.body, path + (1,))
    elif isinstance(t, Pi):
        out += redex_paths(t.dom, path + (0,))
        out += redex_paths(t.cod, path + (1,))
    return out


def contract_at(t, path):
    if not path:
        r = root_step(t)
        if r is None:
            raise ValueError("no redex at path")
        return r
    i, rest = path[0], path[1:]
    if isinstance(t, App):
        return App(contract_at(t.fn, rest), t.arg) if i == 0 else App(t.fn, contract_at(t.arg, rest))
    if isinstance(t, Lam):
        return Lam(contract_at(t.ann, rest), t.body, t.hint) if i == 0 else Lam(t.ann, contract_at(t.body, rest), t.hint)
    if isinstance(t, Pi):
        return Pi(contract_at(t.dom, rest), t.cod, t.hint) if i == 0 else Pi(t.dom, contract_at(t.cod, rest), t.hint)
    raise ValueError("bad path")
