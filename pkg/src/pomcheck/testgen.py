"""Finite test-tree enumeration, characteristic/distinguishing trees,
and random model generation for the property suites."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Optional

from . import estructure as es_mod
from ._engine import diverges, successors
from .equiv import RelationKind
from .errors import InternalInconsistencyError
from .estructure import ProcessState
from .pomset import Pomset, singleton, step_of, chain_of
from .synctree import NIL, OMEGA, SyncTree, tree_depth


def compiled_tree_state(t: SyncTree) -> ProcessState:
    """Root state of the (memoized) compiled tree."""
    return es_mod.compiled(t)


def tree_as_process(t: SyncTree, kind: RelationKind):
    """A test tree as a process of the appropriate semantics.

    Trees form a transition system through their summands, so for the
    pomset/step kinds the tree itself is the process: the prefix of a
    deep summand must not acquire extra causal structure (compiling
    ``b:(b:0)`` would add a two-event chain transition that no summand
    carries).  The posetal kinds need configurations and are evaluated on
    the compiled structure.
    """
    return compiled_tree_state(t) if kind.posetal else t


def enumerate_trees(
    alphabet: Iterable[Pomset], depth: int, width: int
) -> Iterator[SyncTree]:
    """Exhaustively stream every tree over ``alphabet`` within the bounds.

    Prefixes come from ``alphabet``, paths are at most ``depth`` long and
    every node has at most ``width`` summands; both divergence flags are
    produced.  No duplicates up to summand-list normalization; shallow
    trees are yielded first.
    """
    alphabet = sorted(set(alphabet))
    pool = [NIL, OMEGA]
    yield from pool
    for d in range(1, depth + 1):
        cands = [(u, t) for u in alphabet for t in pool]
        cands.sort(key=lambda s: (s[0].sort_key, s[1].sort_key))
        fresh = []
        for k in range(1, width + 1):
            for combo in combinations_with_replacement(cands, k):
                for div in (False, True):
                    t = SyncTree(combo, div)
                    if tree_depth(t) == d:
                        fresh.append(t)
                        yield t
        pool = pool + fresh


def _kind_successors(state, kind: RelationKind):
    """(prefix pomset, successor state) pairs for the given relation kind."""
    if kind is RelationKind.POMSET:
        return successors(state, step_only=False)
    if kind is RelationKind.STEP:
        return successors(state, step_only=True)
    # hp/hhp observe single actions
    return frozenset(
        (singleton(lab), s2) for lab, s2 in es_mod.action_transitions(state)
    )


def characteristic_tree(
    state, restriction, n: int, kind: RelationKind
) -> SyncTree:
    """Finite tree characterizing the level-``n`` stratified approximant.

    A summand ``U : characteristic_tree(state', n-1)`` is emitted for
    every restricted transition; a divergence summand is added when the
    state diverges or has an initial outside the restriction set, so the
    tree never over-constrains convergence.  Level 0 is the fully
    unspecified tree.  The contract (the tree lies below ``state`` and
    tests exactly the level-``n`` approximant) is verified by the test
    suite, not assumed.
    """
    restriction = frozenset(restriction)
    if n <= 0:
        return OMEGA
    succs = _kind_successors(state, kind)
    summands = [
        (u, characteristic_tree(s2, restriction, n - 1, kind))
        for u, s2 in succs
        if u in restriction
    ]
    div = diverges(state) or any(u not in restriction for u, _ in succs)
    return SyncTree(summands, div)


def distinguishing_tree(p, q, kind: RelationKind) -> Optional[SyncTree]:
    """A verified tree below ``p`` but not below ``q``, if one exists.

    Returns ``None`` when the finitary preorder holds.  The extracted
    tree is re-verified against both processes before being returned; a
    verification failure raises, signalling a bug.
    """
    from . import prebisim as pb

    pmax = pb.dominating_restriction(p, q, kind)
    n = pb.first_failing_level(p, q, kind, pmax)
    if n is None:
        return None
    candidates = [characteristic_tree(p, pmax, n, kind)]
    if kind.posetal:
        # action-prefixed trees linearize histories and often fail the
        # posetal check against concurrent processes; pomset-prefixed
        # trees built from the pomset stratification are a second shot
        pmax_pom = pb.dominating_restriction(p, q, RelationKind.POMSET)
        m = pb.first_failing_level(p, q, RelationKind.POMSET, pmax_pom)
        if m is not None:
            candidates.append(
                characteristic_tree(p, pmax_pom, m, RelationKind.POMSET)
            )
    for chi in candidates:
        ts = tree_as_process(chi, kind)
        if pb.prebisim(ts, p, kind).related and not pb.prebisim(ts, q, kind).related:
            return chi
    raise InternalInconsistencyError(
        f"no extracted tree distinguishes the processes under {kind.value}"
    )


def random_pomset(rng: random.Random, alphabet, max_events: int = 2) -> Pomset:
    """A small random nonempty pomset: singleton, step or chain."""
    k = rng.randint(1, max(1, max_events))
    labels = [rng.choice(alphabet) for _ in range(k)]
    if k == 1:
        return singleton(labels[0])
    return step_of(labels) if rng.random() < 0.5 else chain_of(labels)


def random_tree(
    seed,
    size_budget: int,
    alphabet=("a", "b"),
    divergence_probability: float = 0.15,
    max_prefix_events: int = 2,
) -> SyncTree:
    """Deterministic random tree with at most ``size_budget`` nodes."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    alphabet = list(alphabet)

    def build(budget: int) -> SyncTree:
        div = rng.random() < divergence_probability
        if budget <= 1:
            return OMEGA if div else NIL
        n_summands = rng.randint(0, 2)
        remaining = budget - 1
        summands = []
        for _ in range(n_summands):
            if remaining <= 0:
                break
            child_budget = rng.randint(1, remaining)
            remaining -= child_budget
            prefix = random_pomset(rng, alphabet, max_prefix_events)
            summands.append((prefix, build(child_budget)))
        return SyncTree(summands, div)

    return build(size_budget)


def random_state(seed, size_budget: int, alphabet=("a", "b"),
                 divergence_probability: float = 0.15) -> ProcessState:
    """Compiled root state of a random tree."""
    return compiled_tree_state(
        random_tree(seed, size_budget, alphabet, divergence_probability)
    )
