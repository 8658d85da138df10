"""Finite Alexandroff spaces and their Heyting algebras of opens.

Points are ``0..n-1``. ``le[a][b]`` means every open containing ``b`` also
contains ``a``, so opens are exactly the down-closed sets and ``down[x]`` is
the minimal neighbourhood of ``x``. Opens are int bit-masks, kept sorted
ascending; that order is also the canonical numbering of opens.
"""
import itertools
import random
import re
from dataclasses import dataclass, field
from functools import cached_property

from . import kernels

LAW_NAMES = {
    1: "exp_of_exp", 2: "double_exp_meet", 3: "exp_of_join", 4: "meet_of_exps",
    5: "empty_meet", 6: "exp_top", 7: "below_exp", 8: "le_gives_top",
    9: "strict_below", 10: "modus_ponens", 11: "mutual_top", 12: "meet_top",
    13: "exp_distributes", 14: "adjunction",
}

LAW_TEXT = {
    1: "(x^b)^a = x^(a/\\b)", 2: "meet{t^(t^a)} = a", 3: "x^a /\\ x^b = x^(a\\/b)",
    4: "meet{a^t | t in S} = a^(join S)", 5: "meet{} = 1", 6: "x^1 = x",
    7: "y <= y^x", 8: "x <= y => y^x = 1", 9: "y <= x, not x <= y => y^x = y",
    10: "x /\\ y^x <= y", 11: "x^y /\\ y^x = 1 => x = y",
    12: "meet S = 1 => all a in S are 1", 13: "(meet S)^x = meet{s^x | s in S}",
    14: "x <= z^y <=> x /\\ y <= z",
}

EXHAUSTIVE_SUBSETS = 12


class TopologyError(ValueError):
    pass


class ForeignOpen(ValueError):
    pass


@dataclass
class WellBehavedReport:
    ok: bool
    reason: str = ""
    pair: tuple = None

    def __bool__(self):
        return self.ok


@dataclass
class HeytingReport:
    failures: dict = field(default_factory=dict)  # law id -> witness
    exhaustive: bool = True

    @property
    def ok(self):
        return not self.failures

    def failed_laws(self):
        return sorted(self.failures)


def _closure(n, pairs):
    le = [[a == b for b in range(n)] for a in range(n)]
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"point out of range in pair {(a, b)}")
        le[a][b] = True
    for k in range(n):
        for i in range(n):
            if le[i][k]:
                row_k = le[k]
                row_i = le[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return tuple(tuple(r) for r in le)


class Space:
    """A finite Alexandroff space presented by its specialisation preorder."""

    def __init__(self, le, names=None):
        n = len(le)
        if n < 1:
            raise ValueError("a space needs at least one point")
        if n > 64:
            raise ValueError("at most 64 points are supported")
        self.n = n
        self.le = tuple(tuple(bool(x) for x in row) for row in le)
        self.names = tuple(names) if names else tuple(str(i) for i in range(n))
        self.full = (1 << n) - 1
        self.down = tuple(sum(1 << a for a in range(n) if self.le[a][x]) for x in range(n))

    # construction ---------------------------------------------------------

    @classmethod
    def from_poset(cls, n, pairs=(), names=None, strict=False):
        if names is not None:
            idx = {nm: i for i, nm in enumerate(names)}
            pairs = [(idx.get(a, a), idx.get(b, b)) for a, b in pairs]
        sp = cls(_closure(n, pairs), names)
        if strict and not sp.is_t0:
            raise TopologyError("the preorder is not antisymmetric (space is not T0)")
        return sp

    @classmethod
    def from_opens(cls, n, opens, names=None):
        """Build from an explicit open family after verifying it is a topology."""
        fam = set(opens)
        full = (1 << n) - 1
        if 0 not in fam or full not in fam:
            raise TopologyError("open family must contain the empty set and the whole space")
        for a in fam:
            if a & ~full:
                raise TopologyError(f"open {a:#x} mentions points outside the space")
            for b in fam:
                if a | b not in fam:
                    raise TopologyError(f"union of {a:#x} and {b:#x} is missing")
                if a & b not in fam:
                    raise TopologyError(f"intersection of {a:#x} and {b:#x} is missing")
        # a <= b iff every open containing b contains a
        le = [[all((o >> a) & 1 for o in fam if (o >> b) & 1) for b in range(n)] for a in range(n)]
        sp = cls(le, names)
        if set(sp.opens) != fam:
            raise TopologyError("open family is not the down-set topology of its preorder")
        return sp

    # derived structure ---------------------------------------------------------

    @cached_property
    def opens(self):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for o in frontier:
                for d in self.down:
                    u = o | d
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def index(self):
        return {o: i for i, o in enumerate(self.opens)}

    @cached_property
    def is_t0(self):
        return all(not (self.le[a][b] and self.le[b][a]) for a in range(self.n) for b in range(a))

    @cached_property
    def bottom(self):
        for b in range(self.n):
            if all(self.le[b][x] for x in range(self.n)):
                return b
        return None

    @cached_property
    def top(self):
        for t in range(self.n):
            if self.down[t] == self.full:
                return t
        return None

    def min_nbhd(self, x):
        return self.down[x]

    def points(self, mask):
        return [x for x in range(self.n) if (mask >> x) & 1]

    @cached_property
    def _principal(self):
        out = {}
        for x in range(self.n):
            out.setdefault(self.down[x], x)
        return out

    def well_behaved(self):
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if (self.down[a] & self.down[b]) not in self._principal:
                    return WellBehavedReport(False, "intersection of minimal neighbourhoods is not principal", (a, b))
        if self.bottom is None:
            return WellBehavedReport(False, "no bottom point")
        if self.top is None:
            return WellBehavedReport(False, "no top point")
        return WellBehavedReport(True)

    @cached_property
    def is_well_behaved(self):
        return self.well_behaved().ok

    @cached_property
    def inf_table(self):
        """``inf_table[a][b]`` is the point whose minimal neighbourhood is
        ``down[a] & down[b]``; needs a well-behaved space."""
        if not self.is_well_behaved:
            raise TopologyError(f"space is not well behaved: {self.well_behaved().reason}")
        p = self._principal
        return tuple(tuple(p[self.down[a] & self.down[b]] for b in range(self.n)) for a in range(self.n))

    def inf_points(self, pts):
        t = self.inf_table  # validates
        acc = self.top
        for p in pts:
            acc = t[acc][p]
        return acc

    # lattice operations ------------------------------------------------------

    def _own(self, *masks):
        for m in masks:
            if m not in self.index:
                raise ForeignOpen(f"{m:#x} is not an open of this space")

    def interior(self, mask):
        return kernels.interior(mask & self.full, self.down)

    def meet(self, a, b):
        self._own(a, b)
        return a & b

    def join(self, a, b):
        self._own(a, b)
        return a | b

    def big_meet(self, family):
        acc = self.full
        for o in family:
            self._own(o)
            acc &= o
        return self.interior(acc)

    def big_join(self, family):
        acc = 0
        for o in family:
            self._own(o)
            acc |= o
        return acc

    def exp(self, b, a):
        """``b^a``, the relative pseudo-complement."""
        self._own(a, b)
        return kernels.exp_mask(b, a, self.down, self.full)

    def neg(self, a):
        return self.exp(0, a)

    def le_open(self, a, b):
        return a & b == a

    @cached_property
    def exp_index_table(self):
        """Flat ``t[y*m + x]`` = index of ``opens[y]^opens[x]``."""
        return kernels.exp_table(list(self.opens), list(self.down), self.full)

    @cached_property
    def meet_join_index_tables(self):
        return kernels.meet_join_tables(list(self.opens))

    def exponent_rows(self):
        m = len(self.opens)
        t = self.exp_index_table
        return [[t[y * m + x] for x in range(m)] for y in range(m)]

    def __repr__(self):
        return f"Space(n={self.n}, opens={len(self.opens)})"

    def __eq__(self, other):
        return isinstance(other, Space) and self.le == other.le

    def __hash__(self):
        return hash(self.le)


# -- named spaces ----------------------------------------------------------------

def one_point():
    return Space.from_poset(1, names=["p"])


def sierpinski():
    return Space.from_poset(2, [(0, 1)])


def diamond():
    return Space.from_poset(4, [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")], names=["b", "l", "r", "t"])


# -- identity suite ----------------------------------------------------------------

def _subsets(m, samples, rng, limit):
    if m <= limit:
        for bits in range(1 << m):
            yield [i for i in range(m) if (bits >> i) & 1], True
    else:
        yield [], False
        for _ in range(samples):
            yield [i for i in range(m) if rng.random() < 0.5], False


def check_heyting_identities(space, samples=256, seed=0, exhaustive_limit=EXHAUSTIVE_SUBSETS):
    """Evaluate the fourteen identities over the opens of ``space``.

    Identities quantified over single opens are always exhaustive; those
    quantified over subsets of opens are exhaustive up to
    ``exhaustive_limit`` opens and sampled beyond. Witnesses are tuples of
    open indices (subsets as nested tuples).
    """
    opens = list(space.opens)
    m = len(opens)
    ex = space.exp_index_table
    meet, join = space.meet_join_index_tables
    found = dict(kernels.scan_laws(opens, ex, meet, join))
    top = m - 1
    rng = random.Random(seed)
    exhaustive = True

    def big_meet(idx):
        acc = top
        for i in idx:
            acc = meet[acc * m + i]
        return acc

    if space.big_meet([]) != space.full:
        found[5] = ()
    for sub, exh in _subsets(m, samples, rng, exhaustive_limit):
        exhaustive &= exh
        jn = 0
        for i in sub:
            jn = join[jn * m + i]
        ms = big_meet(sub)
        if 12 not in found and ms == top and any(i != top for i in sub):
            found[12] = (tuple(sub),)
        for a in range(m):
            if 4 not in found and big_meet(ex[a * m + t] for t in sub) != ex[a * m + jn]:
                found[4] = (a, tuple(sub))
            # a plays x here
            if 13 not in found and ex[ms * m + a] != big_meet(ex[s * m + a] for s in sub):
                found[13] = (a, tuple(sub))
    return HeytingReport(dict(sorted(found.items())), exhaustive)


# -- file formats ----------------------------------------------------------------

def parse_space(text):
    """``points N`` then ``le a b`` and ``name i IDENT`` lines; ``#`` comments."""
    n = None
    names = {}
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "points" and len(parts) == 2 and n is None:
            n = int(parts[1])
        elif n is None:
            raise ValueError(f"line {lineno}: the first directive must be 'points N'")
        elif head == "name" and len(parts) == 3:
            i = int(parts[1])
            if not 0 <= i < n or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", parts[2]):
                raise ValueError(f"line {lineno}: bad name directive")
            names[i] = parts[2]
        elif head == "le" and len(parts) == 3:
            pairs.append((parts[1], parts[2], lineno))
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    if n is None:
        raise ValueError("missing 'points N'")
    label = [names.get(i, str(i)) for i in range(n)]
    lookup = {nm: i for i, nm in enumerate(label)}
    resolved = []
    for a, b, lineno in pairs:
        try:
            resolved.append(tuple(lookup[x] if x in lookup else int(x) for x in (a, b)))
        except ValueError:
            raise ValueError(f"line {lineno}: unknown point") from None
    return Space.from_poset(n, resolved, names=label)


def format_space(space):
    lines = [f"points {space.n}"]
    for i, nm in enumerate(space.names):
        if nm != str(i):
            lines.append(f"name {i} {nm}")
    # covering pairs only
    n = space.n
    for a, b in itertools.product(range(n), repeat=2):
        if a != b and space.le[a][b]:
            between = any(c not in (a, b) and space.le[a][c] and space.le[c][b] for c in range(n))
            if not between:
                lines.append(f"le {space.names[a]} {space.names[b]}")
    return "\n".join(lines) + "\n"


def load_space(path):
    with open(path, encoding="utf-8") as fh:
        return parse_space(fh.read())


def exponent_csv(space):
    rows = space.exponent_rows()
    m = len(rows)
    out = ["y^x," + ",".join(str(x) for x in range(m))]
    for y, row in enumerate(rows):
        out.append(f"{y}," + ",".join(str(v) for v in row))
    return "\n".join(out) + "\n"


def exponent_text(space, labels=None):
    rows = space.exponent_rows()
    m = len(rows)
    labels = list(labels) if labels else [str(i) for i in range(m)]
    w = max(len(s) for s in labels + ["y^x"])
    head = "y^x".ljust(w) + " | " + " ".join(s.rjust(w) for s in labels)
    out = [head, "-" * len(head)]
    for y, row in enumerate(rows):
        out.append(labels[y].ljust(w) + " | " + " ".join(labels[v].rjust(w) for v in row))
    return "\n".join(out) + "\n"
