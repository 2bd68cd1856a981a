"""Shared machinery for the fixpoint algorithms.

States are either :class:`ProcessState` (event-structure semantics) or
:class:`SyncTree` (tree-native semantics, pomset/step kinds only).  The
history-preserving relations additionally work over posetal triples
``(C, f, D)`` with ``f`` an isomorphism of history posets, materialized
lazily per structure pair and memoized.
"""

from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Tuple

from . import estructure as es_mod
from . import synctree as st_mod
from .estructure import Config, PrimeEventStructure, ProcessState
from .synctree import SyncTree

# ---------------------------------------------------------------------------
# uniform state interface (pomset / step kinds)
# ---------------------------------------------------------------------------


def successors(state, step_only: bool) -> frozenset:
    """Outgoing (Pomset, state) transitions under the chosen semantics."""
    if isinstance(state, SyncTree):
        trans = st_mod.tree_transitions(state)
        if step_only:
            trans = frozenset((u, t) for u, t in trans if u.is_step())
        return trans
    if step_only:
        return es_mod.step_transitions(state)
    return es_mod.pomset_transitions(state)


def diverges(state) -> bool:
    if isinstance(state, SyncTree):
        return state.divergent
    return es_mod.divergent(state)


@lru_cache(maxsize=None)
def state_space(state) -> frozenset:
    """All states sharing ``state``'s underlying system."""
    if isinstance(state, SyncTree):
        return st_mod.subtrees(state)
    return frozenset(
        ProcessState(state.structure, c)
        for c in es_mod.configurations(state.structure)
    )


def pair_space(p, q) -> frozenset:
    return frozenset(
        (x, y) for x in state_space(p) for y in state_space(q)
    )


# ---------------------------------------------------------------------------
# posetal triples
# ---------------------------------------------------------------------------

Iso = FrozenSet[Tuple[int, int]]
Triple = Tuple[Config, Iso, Config]

ROOT_TRIPLE: Triple = (frozenset(), frozenset(), frozenset())


def _history_isos(es1: PrimeEventStructure, c: Config,
                  es2: PrimeEventStructure, d: Config):
    """All label- and order-preserving bijections between two histories."""
    if len(c) != len(d):
        return []
    left = sorted(c)
    right = sorted(d)
    isos = []

    def caus1(e):
        return es1.causes[e] & c

    def caus2(e):
        return es2.causes[e] & d

    def extend(i, mapping, used):
        if i == len(left):
            isos.append(frozenset(mapping.items()))
            return
        e = left[i]
        for f in right:
            if f in used or es1.labels[e] != es2.labels[f]:
                continue
            # order-preserving both ways over already-mapped events
            ok = True
            for a, b in mapping.items():
                if (a in caus1(e)) != (b in caus2(f)):
                    ok = False
                    break
                if (e in caus1(a)) != (f in caus2(b)):
                    ok = False
                    break
            if ok:
                mapping[e] = f
                extend(i + 1, mapping, used | {f})
                del mapping[e]

    extend(0, {}, frozenset())
    return isos


@lru_cache(maxsize=None)
def triple_space(es1: PrimeEventStructure, es2: PrimeEventStructure) -> frozenset:
    """The posetal product of the two structures' configuration spaces."""
    triples = set()
    for c in es_mod.configurations(es1):
        for d in es_mod.configurations(es2):
            for f in _history_isos(es1, c, es2, d):
                triples.add((c, f, d))
    return frozenset(triples)


@lru_cache(maxsize=None)
def sub_triples(es1: PrimeEventStructure, es2: PrimeEventStructure):
    """Immediate pointwise-sub-triple table for downward-closure pruning.

    Removing one pair (e, f(e)) with e maximal in C keeps us inside the
    posetal product (isomorphisms preserve maximality), and iterating
    one-pair removals reaches every pointwise-smaller triple.
    """
    space = triple_space(es1, es2)
    table = {}
    for (c, f, d) in space:
        subs = []
        fmap = dict(f)
        for e, g in fmap.items():
            if any(e in es1.causes[x] for x in c):
                continue  # e not maximal in c
            c0 = c - {e}
            d0 = d - {g}
            f0 = frozenset((a, b) for a, b in f if a != e)
            sub = (c0, f0, d0)
            if sub in space:
                subs.append(sub)
        table[(c, f, d)] = tuple(subs)
    return table


@lru_cache(maxsize=None)
def triple_transitions(es1: PrimeEventStructure, es2: PrimeEventStructure):
    """Per-triple action-transfer candidate tables.

    For each triple T = (C, f, D) and each single-event extension
    C -a-> C', the table lists the triples (C', f[e -> e'], D') in the
    posetal product with D -a-> D' matching the same action; and the
    symmetric table for extensions of D.
    """
    space = triple_space(es1, es2)
    tab1 = es_mod._action_transition_table(es1)
    tab2 = es_mod._action_transition_table(es2)
    fwd = {}
    bwd = {}
    for (c, f, d) in space:
        fw = []
        for lab, e, c2 in tab1[c]:
            cands = []
            for lab2, g, d2 in tab2[d]:
                if lab2 != lab:
                    continue
                f2 = f | {(e, g)}
                if (c2, f2, d2) in space:
                    cands.append((c2, f2, d2))
            fw.append((lab, tuple(cands)))
        bw = []
        for lab, g, d2 in tab2[d]:
            cands = []
            for lab2, e, c2 in tab1[c]:
                if lab2 != lab:
                    continue
                f2 = f | {(e, g)}
                if (c2, f2, d2) in space:
                    cands.append((c2, f2, d2))
            bw.append((lab, tuple(cands)))
        fwd[(c, f, d)] = tuple(fw)
        bwd[(c, f, d)] = tuple(bw)
    return fwd, bwd
