"""Divergence-sensitive prebisimulation preorders and their finitary parts.

The functional behind the preorders keeps forward simulation
unconditional and demands backward simulation (plus convergence of the
right-hand process) only from convergent left-hand states.  On top of it
this module builds: greatest prebisimulations, level-n approximants and
their omega limits, the restriction-indexed stratification, the finitary
preorder computed over a dominating finite restriction set, the
tree-test characterization, and the induced kernel equivalences.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Optional, Union

from . import _engine
from ._engine import (
    ROOT_TRIPLE,
    diverges,
    pair_space,
    state_space,
    sub_triples,
    successors,
    triple_space,
    triple_transitions,
)
from .equiv import RelationKind, Verdict, Witness
from .errors import StructuralError
from .estructure import ProcessState
from .pomset import Pomset
from .synctree import SyncTree

OMEGA = "omega"

Level = Union[int, str]


@dataclass(frozen=True)
class StratParams:
    """A restriction set of (canonical) pomsets and an approximant level."""

    restriction: FrozenSet[Pomset]
    level: Level = OMEGA

    def __post_init__(self):
        object.__setattr__(self, "restriction", frozenset(self.restriction))
        if self.level != OMEGA and (
            not isinstance(self.level, int) or self.level < 0
        ):
            raise StructuralError(f"level must be a natural number or {OMEGA!r}")


# ---------------------------------------------------------------------------
# the functional over state pairs (pomset / step kinds)
# ---------------------------------------------------------------------------


def _pre_pair_ok(x, y, rel, step_only, restriction):
    succ_x = successors(x, step_only)
    succ_y = successors(y, step_only)
    if restriction is None:
        sx, sy = succ_x, succ_y
    else:
        sx = [(u, x2) for u, x2 in succ_x if u in restriction]
        sy = [(v, y2) for v, y2 in succ_y if v in restriction]
    for u, x2 in sx:
        if not any(u == v and (x2, y2) in rel for v, y2 in succ_y):
            return False
    guard = not diverges(x)
    if guard and restriction is not None:
        guard = all(u in restriction for u, _ in succ_x)
    if guard:
        if diverges(y):
            return False
        if restriction is not None and not all(v in restriction for v, _ in succ_y):
            return False
        for v, y2 in sy:
            if not any(v == u and (x2, y2) in rel for u, x2 in succ_x):
                return False
    return True


def apply_F(relation, space, kind: RelationKind, restriction=None):
    """One application of the prebisimulation functional over ``space``.

    Returns the pairs of ``space`` whose forward transfer holds w.r.t.
    ``relation`` and whose backward transfer and convergence requirement
    hold when the left state converges (guarded additionally by
    ``initials <= restriction`` when a restriction set is given).
    """
    if kind.posetal:
        raise StructuralError("apply_F is for the pomset/step kinds; see apply_F_hp")
    step_only = kind is RelationKind.STEP
    relation = frozenset(relation)
    return frozenset(
        (x, y)
        for (x, y) in space
        if _pre_pair_ok(x, y, relation, step_only, restriction)
    )


# ---------------------------------------------------------------------------
# the functional over posetal triples (hp / hhp kinds)
# ---------------------------------------------------------------------------


def _pre_triple_ok(t, rel, fwd, bwd, es1, es2, acts):
    c, _f, d = t
    for lab, cands in fwd[t]:
        if acts is not None and lab not in acts:
            continue
        if not any(s in rel for s in cands):
            return False
    guard = c not in es1.divergent_configs
    if guard and acts is not None:
        guard = all(lab in acts for lab, _ in fwd[t])
    if guard:
        if d in es2.divergent_configs:
            return False
        if acts is not None and not all(lab in acts for lab, _ in bwd[t]):
            return False
        for lab, cands in bwd[t]:
            if acts is not None and lab not in acts:
                continue
            if not any(s in rel for s in cands):
                return False
    return True


def _prune_downward(rel, subs):
    while True:
        keep = frozenset(t for t in rel if all(s in rel for s in subs[t]))
        if keep == rel:
            return rel
        rel = keep


def apply_F_hp(relation, es1, es2, hereditary=False, acts=None):
    """One application of the posetal prebisimulation functional.

    Works over the full posetal product of ``es1`` and ``es2``; with
    ``hereditary`` the result is intersected with its downward-closure-
    stable subset.
    """
    space = triple_space(es1, es2)
    fwd, bwd = triple_transitions(es1, es2)
    relation = frozenset(relation)
    out = frozenset(
        t for t in space if _pre_triple_ok(t, relation, fwd, bwd, es1, es2, acts)
    )
    if hereditary:
        out = _prune_downward(out, sub_triples(es1, es2))
    return out


# ---------------------------------------------------------------------------
# level sequences (memoized per system pair / kind / restriction)
# ---------------------------------------------------------------------------


def _acts_of_restriction(restriction):
    """Action labels named by the singleton pomsets of a restriction set."""
    acts = set()
    dropped = 0
    for u in restriction:
        if len(u) == 1:
            acts.add(u.label_multiset()[0])
        else:
            dropped += 1
    if dropped:
        warnings.warn(
            f"{dropped} non-singleton pomset(s) in the restriction set are "
            "ignored for the hp/hhp stratification",
            stacklevel=3,
        )
    return frozenset(acts)


@lru_cache(maxsize=None)
def _pair_levels(space, kind, restriction):
    step_only = kind is RelationKind.STEP
    levels = [space]
    while True:
        cur = levels[-1]
        nxt = frozenset(
            (x, y)
            for (x, y) in cur
            if _pre_pair_ok(x, y, cur, step_only, restriction)
        )
        if nxt == cur:
            return tuple(levels)
        levels.append(nxt)


@lru_cache(maxsize=None)
def _triple_levels(es1, es2, hereditary, acts):
    space = triple_space(es1, es2)
    fwd, bwd = triple_transitions(es1, es2)
    subs = sub_triples(es1, es2) if hereditary else None
    levels = [space]
    while True:
        cur = levels[-1]
        nxt = frozenset(
            t for t in cur if _pre_triple_ok(t, cur, fwd, bwd, es1, es2, acts)
        )
        if hereditary:
            nxt = _prune_downward(nxt, subs)
        if nxt == cur:
            return tuple(levels)
        levels.append(nxt)


def _require_root_states(p, q, kind):
    if not isinstance(p, ProcessState) or not isinstance(q, ProcessState):
        raise StructuralError(
            f"the {kind.value} relations require the event-structure semantics"
        )
    if p.config or q.config:
        raise StructuralError(
            f"the {kind.value} relations are rooted at the empty configuration"
        )


def _levels_and_member(p, q, kind, restriction):
    """Stabilizing level sequence plus the membership probe for (p, q)."""
    if kind.posetal:
        _require_root_states(p, q, kind)
        acts = None if restriction is None else _acts_of_restriction(restriction)
        levels = _triple_levels(
            p.structure, q.structure, kind is RelationKind.HHP, acts
        )
        return levels, ROOT_TRIPLE
    levels = _pair_levels(pair_space(p, q), kind, restriction)
    return levels, (p, q)


def _member_at(levels, probe, n):
    if n == OMEGA:
        return probe in levels[-1]
    return probe in levels[min(n, len(levels) - 1)]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def prebisim(p, q, kind: RelationKind, want_witness: bool = False) -> Verdict:
    """Greatest prebisimulation of the given kind; left ≲ right."""
    levels, probe = _levels_and_member(p, q, kind, None)
    if probe in levels[-1]:
        return Verdict(True)
    if want_witness:
        return Verdict(False, witness=_failure_witness(p, q, kind, None, levels))
    return Verdict(False)


def level_approx(p, q, kind: RelationKind, n: Level) -> bool:
    """Membership in the n-th approximant of the unrestricted functional."""
    levels, probe = _levels_and_member(p, q, kind, None)
    return _member_at(levels, probe, n)


def strat(p, q, kind: RelationKind, params: StratParams) -> bool:
    """Membership in the restriction-indexed stratified approximant."""
    levels, probe = _levels_and_member(p, q, kind, params.restriction)
    return _member_at(levels, probe, params.level)


def strat_omega(p, q, kind: RelationKind, restriction) -> bool:
    """Limit of the stratified approximants (stabilizes on finite models)."""
    return strat(p, q, kind, StratParams(frozenset(restriction), OMEGA))


def first_failing_level(p, q, kind: RelationKind, restriction=None) -> Optional[int]:
    """Least n at which (p, q) falls out of the approximant chain, if any."""
    levels, probe = _levels_and_member(p, q, kind, restriction)
    for n, rel in enumerate(levels):
        if probe not in rel:
            return n
    return None


def _sort_pomsets(state, kind: RelationKind) -> frozenset:
    """All transition labels reachable in ``state``'s system."""
    step_only = kind is RelationKind.STEP
    acc = set()
    for s in state_space(state):
        acc.update(u for u, _ in successors(s, step_only))
    return frozenset(acc)


def dominating_restriction(p, q, kind: RelationKind) -> frozenset:
    """The finite restriction set that decides the finitary preorder.

    Pomsets outside the sorts of both processes label no transition and
    cannot flip the ``initials <= restriction`` guards, so this set
    dominates every finite restriction by antitonicity.
    """
    if kind.posetal:
        from .pomset import singleton

        labels = {
            singleton(lab)
            for es in (p.structure, q.structure)
            for lab in es.labels.values()
        }
        return frozenset(labels)
    return _sort_pomsets(p, kind) | _sort_pomsets(q, kind)


def fin_preorder(p, q, kind: RelationKind, want_witness: bool = False) -> Verdict:
    """The finitary preorder: stratified limit over the dominating set."""
    pmax = dominating_restriction(p, q, kind)
    levels, probe = _levels_and_member(p, q, kind, pmax)
    if probe in levels[-1]:
        return Verdict(True, level=OMEGA)
    n = next(i for i, rel in enumerate(levels) if probe not in rel)
    w = None
    if want_witness:
        w = _failure_witness(p, q, kind, pmax, levels)
    return Verdict(False, witness=w, level=n)


def finitary_via_trees(
    p,
    q,
    kind: RelationKind,
    max_depth: Optional[int] = None,
    max_width: int = 2,
    max_trees: int = 2000,
) -> Verdict:
    """The tree-test characterization of the finitary preorder.

    Related means no finite synchronization tree ``t`` with
    ``t`` ≲ ``p`` but not ``t`` ≲ ``q`` was found.  Negative answers are
    exact: the distinguishing tree is constructed from the failing
    stratification level and re-verified.  Positive answers are
    definitive when the bounded enumeration finished within budget,
    bound-exhausted otherwise.
    """
    from . import testgen

    fin = fin_preorder(p, q, kind)
    if not fin.related:
        t = testgen.distinguishing_tree(p, q, kind)
        return Verdict(False, witness=Witness("tree", t), level=fin.level)
    pmax = dominating_restriction(p, q, kind)
    if max_depth is None:
        levels, _ = _levels_and_member(p, q, kind, pmax)
        max_depth = len(levels)
    checked = 0
    exhausted = False
    for t in testgen.enumerate_trees(pmax, max_depth, max_width):
        if checked >= max_trees:
            exhausted = True
            break
        checked += 1
        ts = testgen.tree_as_process(t, kind)
        if prebisim(ts, p, kind).related and not prebisim(ts, q, kind).related:
            from .errors import InternalInconsistencyError

            raise InternalInconsistencyError(
                "tree test contradicts the finitary preorder; this is a bug"
            )
    return Verdict(True, definitive=not exhausted)


def kernel(p, q, kind: RelationKind) -> bool:
    """Kernel equivalence: the preorder in both directions."""
    return prebisim(p, q, kind).related and prebisim(q, p, kind).related


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


def _failure_witness(p, q, kind, restriction, levels):
    """First transfer violation of the root at the level it falls out."""
    idx = next(i for i, rel in enumerate(levels) if _probe(p, q, kind) not in rel)
    prev = levels[idx - 1] if idx else levels[0]
    if kind.posetal:
        fwd, bwd = triple_transitions(p.structure, q.structure)
        acts = None if restriction is None else _acts_of_restriction(restriction)
        from .pomset import singleton

        for lab, cands in list(fwd[ROOT_TRIPLE]) + list(bwd[ROOT_TRIPLE]):
            if acts is not None and lab not in acts:
                continue
            if not any(s in prev for s in cands):
                return Witness("pomset", singleton(lab))
        return Witness("level", idx)
    step_only = kind is RelationKind.STEP
    for u, p2 in sorted(successors(p, step_only), key=lambda t: t[0].sort_key):
        if restriction is not None and u not in restriction:
            continue
        if not any(u == v and (p2, q2) in prev for v, q2 in successors(q, step_only)):
            return Witness("pomset", u)
    for v, q2 in sorted(successors(q, step_only), key=lambda t: t[0].sort_key):
        if restriction is not None and v not in restriction:
            continue
        if not any(v == u and (p2, q2) in prev for u, p2 in successors(p, step_only)):
            return Witness("pomset", v)
    return Witness("level", idx)


def _probe(p, q, kind):
    return ROOT_TRIPLE if kind.posetal else (p, q)
