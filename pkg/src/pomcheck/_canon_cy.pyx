# cython: boundscheck=False, wraparound=False
"""Compiled canonical labeling kernel; same algorithm as ``_canon_py``.

Limited to 64 events (bitmask width); the pure-Python twin has no limit
and is selected automatically for larger inputs.
"""

BACKEND = "cython"

cdef int _popcount(unsigned long long m):
    cdef int c = 0
    while m:
        m &= m - 1
        c += 1
    return c


def _refine(labels, above, below, int n):
    cdef int i, j
    keys = [
        (labels[i], _popcount(above[i]), _popcount(below[i])) for i in range(n)
    ]
    colors = _rank(keys)
    while True:
        keys = []
        for i in range(n):
            succ = sorted(colors[j] for j in range(n) if (above[i] >> j) & 1)
            pred = sorted(colors[j] for j in range(n) if (below[i] >> j) & 1)
            keys.append((colors[i], tuple(succ), tuple(pred)))
        new = _rank(keys)
        if new == colors:
            return colors
        colors = new


def _rank(keys):
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def canonical_order(labels, above):
    """Canonical event ordering; see the pure twin for the contract."""
    cdef int n = len(labels)
    cdef int i, j, k
    if n == 0:
        return ()
    if n > 64:
        from . import _canon_py

        return _canon_py.canonical_order(labels, above)

    cdef unsigned long long ab[64]
    cdef unsigned long long be[64]
    for i in range(n):
        ab[i] = above[i]
        be[i] = 0
    for i in range(n):
        for j in range(n):
            if (ab[i] >> j) & 1:
                be[j] |= 1ULL << i

    colors_list = _refine(labels, [ab[i] for i in range(n)],
                          [be[i] for i in range(n)], n)
    cdef int colors[64]
    for i in range(n):
        colors[i] = colors_list[i]

    by_color = sorted(range(n), key=lambda e: (colors_list[e], e))
    cdef int class_of_pos[64]
    for k in range(n):
        class_of_pos[k] = colors_list[by_color[k]]

    best = {"enc": None, "perm": None}

    def row_bits(int e, placed):
        cdef int p
        bits = []
        for p in placed:
            bits.append(2 if (ab[p] >> e) & 1 else (1 if (ab[e] >> p) & 1 else 0))
        return bits

    def twins(int u, int v):
        cdef unsigned long long mask
        if colors[u] != colors[v]:
            return False
        if (ab[u] >> v) & 1 or (ab[v] >> u) & 1:
            return False
        mask = ~((1ULL << u) | (1ULL << v))
        return (ab[u] & mask) == (ab[v] & mask) and (be[u] & mask) == (be[v] & mask)

    def search(placed, remaining, enc):
        cdef int kk = len(placed)
        cdef int cls
        if best["enc"] is not None and enc > best["enc"][: len(enc)]:
            return
        if kk == n:
            if best["enc"] is None or enc < best["enc"]:
                best["enc"] = list(enc)
                best["perm"] = list(placed)
            return
        cls = class_of_pos[kk]
        cands = [e for e in remaining if colors[e] == cls]
        rows = {e: row_bits(e, placed) for e in cands}
        lo = min(rows.values())
        tied = [e for e in cands if rows[e] == lo]
        reps = []
        for e in tied:
            if not any(twins(e, r) for r in reps):
                reps.append(e)
        for e in reps:
            search(placed + [e], [x for x in remaining if x != e], enc + rows[e])

    search([], by_color, [])
    return tuple(best["perm"])
