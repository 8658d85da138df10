"""Enumeration of finite T0 Alexandroff spaces up to isomorphism.

A poset on n points arises from one on n-1 points by adding a new maximal
element above some down-set. Candidates are reduced to a canonical form: the
row-major order matrix that is lexicographically largest over all natural
labelings (labelings where ``a < b`` implies ``label(a) < label(b)``).
"""
from functools import lru_cache

from .heyting import Space

MAX_POINTS = 6


def _linear_extensions(n, le):
    order = []
    placed = [False] * n

    def rec():
        if len(order) == n:
            yield tuple(order)
            return
        for x in range(n):
            if not placed[x] and all(placed[y] or y == x or not le[y][x] for y in range(n)):
                placed[x] = True
                order.append(x)
                yield from rec()
                order.pop()
                placed[x] = False

    yield from rec()


def canonical(le):
    """Canonical order matrix (tuple of row tuples) of a poset."""
    n = len(le)
    best = None
    for ext in _linear_extensions(n, le):
        m = tuple(tuple(le[ext[i]][ext[j]] for j in range(n)) for i in range(n))
        if best is None or m > best:
            best = m
    return best


def _down_sets(le):
    n = len(le)
    out = []
    for bits in range(1 << n):
        if all(not ((bits >> b) & 1) or all((bits >> a) & 1 for a in range(n) if le[a][b]) for b in range(n)):
            out.append(bits)
    return out


@lru_cache(maxsize=None)
def posets(n):
    """Canonical order matrices of all posets on ``n`` points, sorted."""
    if n == 1:
        return ((( True,),),)
    found = set()
    for small in posets(n - 1):
        for d in _down_sets(small):
            le = [list(row) + [bool((d >> a) & 1)] for a, row in enumerate(small)]
            le.append([False] * (n - 1) + [True])
            found.add(canonical(le))
    return tuple(sorted(found))


def enumerate_spaces(max_points, require_well_behaved=True):
    """Spaces by point count, then ascending canonical matrix."""
    if not 1 <= max_points <= MAX_POINTS:
        raise ValueError(f"max_points must be between 1 and {MAX_POINTS}")
    for n in range(1, max_points + 1):
        for le in posets(n):
            sp = Space(le)
            if require_well_behaved and not sp.is_well_behaved:
                continue
            yield sp
