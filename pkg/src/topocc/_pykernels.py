"""Pure-Python lattice kernels over bit-mask opens.

Points are indices ``0..n-1``; an open is an int bit-mask. ``down[x]`` is the
mask of the minimal neighbourhood of point ``x``. Opens passed as a family
are sorted ascending, so an open is also addressed by its position.

This module is the reference for ``_ckernels.pyx``; both expose the same
functions and must agree bit for bit.
"""
from bisect import bisect_left

# law ids scanned here; the subset-quantified ones (4, 5, 12, 13) live in
# topocc.heyting because they need a subset sampler
SCANNED_LAWS = (1, 2, 3, 6, 7, 8, 9, 10, 11, 14)


def interior(mask, down):
    out = 0
    m = mask
    x = 0
    while m:
        if m & 1:
            d = down[x]
            if d & mask == d:
                out |= d
        m >>= 1
        x += 1
    return out


def exp_mask(b, a, down, full):
    """Relative pseudo-complement ``b^a``: the interior of ``(X \\ a) | b``."""
    return interior(((~a) & full) | b, down)


def _index(opens, mask):
    i = bisect_left(opens, mask)
    if i == len(opens) or opens[i] != mask:
        raise ValueError(f"mask {mask:#x} is not open")
    return i


def exp_table(opens, down, full):
    """Flat row-major table ``t[y*m + x] = index(opens[y] ^ opens[x])``."""
    m = len(opens)
    out = [0] * (m * m)
    for y in range(m):
        oy = opens[y]
        for x in range(m):
            out[y * m + x] = _index(opens, exp_mask(oy, opens[x], down, full))
    return out


def meet_join_tables(opens):
    m = len(opens)
    meet = [0] * (m * m)
    join = [0] * (m * m)
    for i in range(m):
        for j in range(m):
            meet[i * m + j] = _index(opens, opens[i] & opens[j])
            join[i * m + j] = _index(opens, opens[i] | opens[j])
    return meet, join


def scan_laws(opens, ex, meet, join):
    """First counterexample per scanned law, as ``{law_id: witness}``.

    ``ex``, ``meet`` and ``join`` are the flat index tables above. Witnesses
    are tuples of open indices in the variable order of the law.
    """
    m = len(opens)
    top = m - 1
    found = {}

    def le(i, j):
        return opens[i] & opens[j] == opens[i]

    for a in range(m):
        acc = top
        for t in range(m):
            acc = meet[acc * m + ex[t * m + ex[t * m + a]]]
        if acc != a and 2 not in found:
            found[2] = (a,)
    for x in range(m):
        if ex[x * m + top] != x and 6 not in found:
            found[6] = (x,)
        for y in range(m):
            yx = ex[y * m + x]
            if 7 not in found and not le(y, yx):
                found[7] = (x, y)
            if 8 not in found and le(x, y) and yx != top:
                found[8] = (x, y)
            if 9 not in found and le(y, x) and not le(x, y) and yx != y:
                found[9] = (x, y)
            if 10 not in found and not le(meet[x * m + yx], y):
                found[10] = (x, y)
            if 11 not in found and meet[ex[x * m + y] * m + yx] == top and x != y:
                found[11] = (x, y)
            for z in range(m):
                # (x^b)^a with b=y, a=z
                if 1 not in found and ex[ex[x * m + y] * m + z] != ex[x * m + meet[z * m + y]]:
                    found[1] = (x, z, y)
                if 3 not in found and meet[ex[x * m + y] * m + ex[x * m + z]] != ex[x * m + join[y * m + z]]:
                    found[3] = (x, y, z)
                if 14 not in found and le(x, ex[z * m + y]) != le(meet[x * m + y], z):
                    found[14] = (x, y, z)
    return found
