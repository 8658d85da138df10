"""Semantic values.

Every value has a canonical ``key`` used for equality and hashing. Values that
are sets (interpretations of types) also support ``contains`` and ``iterate``.
Iterating a set that is infinite in the intended model (a universe, a Kleene
closure over a nonempty carrier) goes through a finite stand-in and marks the
owning :class:`Tracker` approximate.
"""
import itertools
from functools import cached_property, lru_cache


class UndefinedApplication(RuntimeError):
    """``app`` hit one of its undefined cases."""


class CarrierTooLarge(RuntimeError):
    pass


class Tracker:
    """Shared knobs and the approximation flag for one evaluation run."""

    def __init__(self, universe, list_depth=3, carrier_cap=64, check_domains=True):
        self.universe = universe
        self.list_depth = list_depth
        self.carrier_cap = carrier_cap
        self.check_domains = check_domains
        self.approx = False

    def mark_approx(self):
        self.approx = True

    def guard(self, count, what):
        if count > self.carrier_cap:
            raise CarrierTooLarge(f"{what} has {count} elements, above the cap of {self.carrier_cap}")


class Value:
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, Value) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def rank(self):
        """Least ``i`` with the value in universe ``U_i``."""
        return 0

    def contains(self, v):
        raise UndefinedApplication(f"{self!r} is not a set")

    def iterate(self):
        raise UndefinedApplication(f"{self!r} is not a set")


@lru_cache(maxsize=None)
def canonical_key(k):
    """A string for ``k`` that does not depend on hash order: frozensets are
    written with their members sorted."""
    if isinstance(k, frozenset):
        return "{" + ",".join(sorted(canonical_key(x) for x in k)) + "}"
    if isinstance(k, tuple):
        return "(" + ",".join(canonical_key(x) for x in k) + ")"
    return repr(k)


def sort_values(vals):
    """Smaller values first, then by canonical key; stable across processes."""
    def key(v):
        c = canonical_key(v.key)
        return len(c), c
    return sorted(vals, key=key)


class Point(Value):
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    @property
    def key(self):
        return ("pt", self.p)

    def __repr__(self):
        return f"Point({self.p})"


class OpenVal(Value):
    """An open set; as a set its elements are :class:`Point` values."""
    __slots__ = ("mask",)

    def __init__(self, mask):
        self.mask = mask

    @property
    def key(self):
        return ("op", self.mask)

    def contains(self, v):
        return isinstance(v, Point) and bool((self.mask >> v.p) & 1)

    def iterate(self):
        m, p = self.mask, 0
        while m:
            if m & 1:
                yield Point(p)
            m >>= 1
            p += 1

    def __repr__(self):
        return f"OpenVal({self.mask:#x})"


class FinSet(Value):
    __slots__ = ("elems", "_keys", "__dict__")

    def __init__(self, elems=()):
        uniq = {}
        for e in elems:
            uniq.setdefault(e.key, e)
        self._keys = frozenset(uniq)
        self.elems = tuple(sort_values(uniq.values()))

    @property
    def key(self):
        return ("set", self._keys)

    def contains(self, v):
        return v.key in self._keys

    def iterate(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def rank(self):
        return max((e.rank() for e in self.elems), default=0)

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.elems)) + "}"


EMPTY = FinSet()


class ListVal(Value):
    """``(0, .)`` for nil and ``(1, (a, l))`` for cons, stored as a tuple."""
    __slots__ = ("items",)

    def __init__(self, items=()):
        self.items = tuple(items)

    @property
    def key(self):
        return ("lst", tuple(i.key for i in self.items))

    def rank(self):
        return max((i.rank() for i in self.items), default=0)

    def encoded(self):
        out = (0, "·")
        for a in reversed(self.items):
            out = (1, (a, out))
        return out

    def __repr__(self):
        return f"ListVal({list(self.items)!r})"


class UniverseSet(Value):
    """``U_i``; membership is by rank, iteration uses the test universe."""
    __slots__ = ("level", "tracker")

    def __init__(self, level, tracker):
        self.level = level
        self.tracker = tracker

    @property
    def key(self):
        return ("U", self.level)

    def rank(self):
        return self.level + 1

    def contains(self, v):
        return v.rank() <= self.level

    def iterate(self):
        self.tracker.mark_approx()
        return iter(self.tracker.universe.carriers(self.level))

    def __repr__(self):
        return f"U{self.level}"


class ListSet(Value):
    """The Kleene closure ``S*``; iteration is cut at the list depth."""
    __slots__ = ("elem", "tracker")

    def __init__(self, elem, tracker):
        self.elem = elem
        self.tracker = tracker

    @property
    def key(self):
        return ("lst*", self.elem.key)

    def rank(self):
        return self.elem.rank()

    def contains(self, v):
        return isinstance(v, ListVal) and all(self.elem.contains(i) for i in v.items)

    def iterate(self):
        items = list(self.elem.iterate())
        if items:
            self.tracker.mark_approx()
        depth = self.tracker.list_depth
        self.tracker.guard(sum(len(items) ** k for k in range(depth + 1)), "truncated Kleene closure")
        for k in range(depth + 1):
            for combo in itertools.product(items, repeat=k):
                yield ListVal(combo)

    def __repr__(self):
        return f"{self.elem!r}*"


class Fun(Value):
    """A set-theoretic function given by its domain and a rule (or a table)."""
    __slots__ = ("domain", "fn", "cache", "tracker", "__dict__")

    def __init__(self, domain, fn, tracker, table=None):
        self.domain = domain
        self.fn = fn
        self.tracker = tracker
        self.cache = {} if table is None else dict(table)

    @classmethod
    def from_pairs(cls, domain, pairs, tracker):
        table = {a.key: b for a, b in pairs}
        return cls(domain, None, tracker, table)

    def apply(self, a):
        k = a.key
        hit = self.cache.get(k)
        if hit is not None:
            return hit
        if self.fn is None or (self.tracker.check_domains and not self.domain.contains(a)):
            raise UndefinedApplication(f"argument {a!r} is outside the domain {self.domain!r}")
        out = self.fn(a)
        self.cache[k] = out
        return out

    def graph(self):
        return [(a, self.apply(a)) for a in self.domain.iterate()]

    @cached_property
    def key(self):
        return ("fun", frozenset((a.key, b.key) for a, b in self.graph()))

    def rank(self):
        return max([self.domain.rank()] + [b.rank() for _, b in self.graph()])

    def __repr__(self):
        return f"Fun(dom={self.domain!r})"


class ProdSet(Value):
    """Dependent functions over ``domain``; ``const_only`` keeps constant ones."""
    __slots__ = ("domain", "family", "const_only", "tracker", "__dict__")

    def __init__(self, domain, family, tracker, const_only=False):
        self.domain = domain
        self.family = family
        self.const_only = const_only
        self.tracker = tracker
        self._fibers = {}
        self._members = None
        self._approx_members = False

    def fiber(self, a):
        k = a.key
        if k not in self._fibers:
            self._fibers[k] = self.family(a)
        return self._fibers[k]

    def contains(self, f):
        if not isinstance(f, Fun) or f.domain.key != self.domain.key:
            return False
        first = None
        for a in self.domain.iterate():
            b = f.apply(a)
            if not self.fiber(a).contains(b):
                return False
            if self.const_only:
                if first is None:
                    first = b
                elif b != first:
                    return False
        return True

    def iterate(self):
        if self._members is None:
            self._members = list(self._generate())
        elif self._approx_members:
            self.tracker.mark_approx()
        return iter(self._members)

    def _generate(self):
        before = self.tracker.approx
        self.tracker.approx = False
        try:
            yield from self._build()
        finally:
            self._approx_members = self.tracker.approx
            self.tracker.approx = before or self.tracker.approx

    def _build(self):
        dom = list(self.domain.iterate())
        fibers = [list(self.fiber(a).iterate()) for a in dom]
        if self.const_only:
            if not dom:
                yield Fun.from_pairs(self.domain, [], self.tracker)
                return
            common = [v for v in fibers[0] if all(f_.count(v) for f_ in fibers[1:])]
            self.tracker.guard(len(common), "constant function space")
            for v in common:
                yield Fun.from_pairs(self.domain, [(a, v) for a in dom], self.tracker)
            return
        count = 1
        for fb in fibers:
            count *= len(fb)
        self.tracker.guard(count, "dependent function space")
        for choice in itertools.product(*fibers):
            yield Fun.from_pairs(self.domain, zip(dom, choice), self.tracker)

    @cached_property
    def key(self):
        dom = list(self.domain.iterate())
        fibers = [(a, self.fiber(a)) for a in dom]
        try:
            return ("set", frozenset(f.key for f in self.iterate()))
        except CarrierTooLarge:
            return ("prod", self.domain.key, frozenset((a.key, b.key) for a, b in fibers), self.const_only)

    def rank(self):
        return max([self.domain.rank()] + [self.fiber(a).rank() for a in self.domain.iterate()])

    def __repr__(self):
        tag = "const " if self.const_only else ""
        return f"Prod({tag}{self.domain!r})"


class TestUniverse:
    """Finite stand-ins for ``U_i``: one family of carriers per level, each
    level including the previous one."""
    __test__ = False

    def __init__(self, levels=None, max_level=3):
        if levels is None:
            base = default_carriers()
            levels = [base] * (max_level + 1)
        for lo, hi in zip(levels, levels[1:]):
            if not {v.key for v in lo} <= {v.key for v in hi}:
                raise ValueError("test universe levels must be increasing")
        self.levels = [tuple(sort_values(l)) for l in levels]

    def carriers(self, level):
        if level >= len(self.levels):
            return self.levels[-1]
        return self.levels[level]


def default_carriers():
    """``{}``, ``{{}}`` and ``{{}, {{}}}``."""
    e = EMPTY
    one = FinSet([e])
    return [e, one, FinSet([e, one])]


def dump(v, space=None):
    """JSON-friendly structural rendering."""
    if isinstance(v, OpenVal):
        if space is not None:
            return {"open": space.index[v.mask], "points": [space.names[p] for p in space.points(v.mask)]}
        return {"open_mask": v.mask}
    if isinstance(v, Point):
        return {"point": space.names[v.p] if space is not None else v.p}
    if isinstance(v, ListVal):
        return {"list": [dump(i, space) for i in v.items]}
    if isinstance(v, FinSet):
        return {"set": [dump(e, space) for e in v.elems]}
    if isinstance(v, UniverseSet):
        return {"universe": v.level}
    if isinstance(v, Fun):
        return {"function": [[dump(a, space), dump(b, space)] for a, b in v.graph()]}
    if isinstance(v, ListSet):
        return {"lists_over": dump(v.elem, space)}
    if isinstance(v, ProdSet):
        return {"product": [dump(f, space) for f in v.iterate()]}
    return repr(v)
