# cython: language_level=3
"""Compiled lattice kernels; same contract as topocc._pykernels."""
from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64

SCANNED_LAWS = (1, 2, 3, 6, 7, 8, 9, 10, 11, 14)


cdef inline u64 _interior(u64 mask, const u64* down, int n) nogil:
    cdef u64 out = 0
    cdef u64 d
    cdef int x
    for x in range(n):
        if (mask >> x) & 1:
            d = down[x]
            if d & mask == d:
                out |= d
    return out


cdef u64* _copy(seq, int k) except NULL:
    cdef u64* buf = <u64*> malloc(max(k, 1) * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef int i
    for i in range(k):
        buf[i] = seq[i]
    return buf


cdef int _index(const u64* opens, int m, u64 mask) nogil:
    cdef int lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if opens[mid] < mask:
            lo = mid + 1
        else:
            hi = mid
    if lo < m and opens[lo] == mask:
        return lo
    return -1


def interior(mask, down):
    cdef int n = len(down)
    cdef u64* d = _copy(down, n)
    try:
        return _interior(<u64> mask, d, n)
    finally:
        free(d)


def exp_mask(b, a, down, full):
    cdef int n = len(down)
    cdef u64* d = _copy(down, n)
    try:
        return _interior(((~(<u64> a)) & (<u64> full)) | (<u64> b), d, n)
    finally:
        free(d)


def exp_table(opens, down, full):
    cdef int m = len(opens), n = len(down)
    cdef u64* o = _copy(opens, m)
    cdef u64* d = _copy(down, n)
    cdef u64 f = full
    cdef int y, x, k
    out = [0] * (m * m)
    try:
        for y in range(m):
            for x in range(m):
                k = _index(o, m, _interior(((~o[x]) & f) | o[y], d, n))
                if k < 0:
                    raise ValueError("exponent left the open family")
                out[y * m + x] = k
        return out
    finally:
        free(o)
        free(d)


def meet_join_tables(opens):
    cdef int m = len(opens)
    cdef u64* o = _copy(opens, m)
    cdef int i, j, a, b
    meet = [0] * (m * m)
    join = [0] * (m * m)
    try:
        for i in range(m):
            for j in range(m):
                a = _index(o, m, o[i] & o[j])
                b = _index(o, m, o[i] | o[j])
                if a < 0 or b < 0:
                    raise ValueError("family not closed under meet/join")
                meet[i * m + j] = a
                join[i * m + j] = b
        return meet, join
    finally:
        free(o)


cdef inline bint _le(const u64* o, int i, int j) nogil:
    return o[i] & o[j] == o[i]


def scan_laws(opens, ex_t, meet_t, join_t):
    cdef int m = len(opens)
    cdef u64* o = _copy(opens, m)
    cdef int* ex = <int*> malloc(m * m * sizeof(int))
    cdef int* mt = <int*> malloc(m * m * sizeof(int))
    cdef int* jn = <int*> malloc(m * m * sizeof(int))
    cdef int i, a, t, x, y, z, acc, yx, top = m - 1
    # witnesses, -1 means no counterexample yet
    cdef int w[15][3]
    for i in range(15):
        w[i][0] = -1
    try:
        for i in range(m * m):
            ex[i] = ex_t[i]
            mt[i] = meet_t[i]
            jn[i] = join_t[i]
        with nogil:
            for a in range(m):
                acc = top
                for t in range(m):
                    acc = mt[acc * m + ex[t * m + ex[t * m + a]]]
                if acc != a and w[2][0] < 0:
                    w[2][0] = a
            for x in range(m):
                if ex[x * m + top] != x and w[6][0] < 0:
                    w[6][0] = x
                for y in range(m):
                    yx = ex[y * m + x]
                    if w[7][0] < 0 and not _le(o, y, yx):
                        w[7][0] = x; w[7][1] = y
                    if w[8][0] < 0 and _le(o, x, y) and yx != top:
                        w[8][0] = x; w[8][1] = y
                    if w[9][0] < 0 and _le(o, y, x) and not _le(o, x, y) and yx != y:
                        w[9][0] = x; w[9][1] = y
                    if w[10][0] < 0 and not _le(o, mt[x * m + yx], y):
                        w[10][0] = x; w[10][1] = y
                    if w[11][0] < 0 and mt[ex[x * m + y] * m + yx] == top and x != y:
                        w[11][0] = x; w[11][1] = y
                    for z in range(m):
                        if w[1][0] < 0 and ex[ex[x * m + y] * m + z] != ex[x * m + mt[z * m + y]]:
                            w[1][0] = x; w[1][1] = z; w[1][2] = y
                        if w[3][0] < 0 and mt[ex[x * m + y] * m + ex[x * m + z]] != ex[x * m + jn[y * m + z]]:
                            w[3][0] = x; w[3][1] = y; w[3][2] = z
                        if w[14][0] < 0 and _le(o, x, ex[z * m + y]) != _le(o, mt[x * m + y], z):
                            w[14][0] = x; w[14][1] = y; w[14][2] = z
        found = {}
        arity = {1: 3, 2: 1, 3: 3, 6: 1, 7: 2, 8: 2, 9: 2, 10: 2, 11: 2, 14: 3}
        for law, k in arity.items():
            if w[law][0] >= 0:
                found[law] = tuple(w[law][i] for i in range(k))
        return found
    finally:
        free(o)
        free(ex)
        free(mt)
        free(jn)
