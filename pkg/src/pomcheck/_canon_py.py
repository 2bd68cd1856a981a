"""Pure-Python canonical labeling kernel for small labelled strict orders.

The compiled twin in ``_canon_cy`` implements the same algorithm; the
backend is picked in ``_kernel``.  Inputs are integer-coded: event ``i``
carries label code ``labels[i]`` and ``above[i]`` is a bitmask of the
events strictly above ``i`` (the order must already be transitively
closed).  The result is a permutation ``perm`` such that listing events
in the order ``perm[0], perm[1], ...`` yields the canonical form:
isomorphic inputs produce identical (label sequence, relation matrix)
encodings.

Algorithm: iterated colour refinement on (label, successor/predecessor
colour multisets), then backtracking over colour-class ties minimising
the prefix-determined relation encoding.  Models are small (<= ~20
events), so clarity wins over asymptotics.
"""

BACKEND = "python"


def _refine(labels, above, below, n):
    """Return a stable colouring (list of ints) of the n events."""
    keys = [
        (labels[i], bin(above[i]).count("1"), bin(below[i]).count("1"))
        for i in range(n)
    ]
    colors = _rank(keys)
    while True:
        keys = []
        for i in range(n):
            succ = sorted(colors[j] for j in range(n) if above[i] >> j & 1)
            pred = sorted(colors[j] for j in range(n) if below[i] >> j & 1)
            keys.append((colors[i], tuple(succ), tuple(pred)))
        new = _rank(keys)
        if new == colors:
            return colors
        colors = new


def _rank(keys):
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def canonical_order(labels, above):
    """Canonical event ordering for a transitively closed strict order.

    ``labels``: sequence of ints; ``above``: sequence of int bitmasks.
    Returns a tuple of event indices.
    """
    n = len(labels)
    if n == 0:
        return ()
    below = [0] * n
    for i in range(n):
        m = above[i]
        j = 0
        while m:
            if m & 1:
                below[j] |= 1 << i
            m >>= 1
            j += 1
    colors = _refine(labels, above, below, n)

    # Events are placed colour class by colour class (classes in colour
    # order); within a class, ties are broken by minimising the relation
    # bits against already-placed events, position by position.
    by_color = sorted(range(n), key=lambda i: (colors[i], i))
    class_of_pos = [colors[i] for i in by_color]

    best = [None]  # best full row-encoding list found so far

    def row_bits(e, placed):
        bits = []
        for p in placed:
            bits.append(2 if above[p] >> e & 1 else (1 if above[e] >> p & 1 else 0))
        return bits

    def twins(u, v):
        if colors[u] != colors[v]:
            return False
        if above[u] >> v & 1 or above[v] >> u & 1:
            return False
        mask = ~((1 << u) | (1 << v))
        return (above[u] & mask) == (above[v] & mask) and (
            below[u] & mask
        ) == (below[v] & mask)

    def search(placed, remaining, enc):
        if best[0] is not None and enc > best[0][: len(enc)]:
            return
        k = len(placed)
        if k == n:
            if best[0] is None or enc < best[0]:
                best[0] = list(enc)
                best_perm[0] = list(placed)
            return
        cls = class_of_pos[k]
        cands = [e for e in remaining if colors[e] == cls]
        rows = {e: row_bits(e, placed) for e in cands}
        lo = min(rows.values())
        tied = [e for e in cands if rows[e] == lo]
        # interchangeable twins: exploring one representative suffices
        reps = []
        for e in tied:
            if not any(twins(e, r) for r in reps):
                reps.append(e)
        for e in reps:
            search(placed + [e], [x for x in remaining if x != e], enc + rows[e])

    best_perm = [None]
    search([], by_color, [])
    return tuple(best_perm[0])
