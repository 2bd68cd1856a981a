"""Greatest-fixpoint decision procedures for the four truly concurrent
bisimulations: pomset, step, history-preserving (hp) and hereditary
history-preserving (hhp).

Pomset/step bisimilarity is computed over state pairs; hp/hhp over
posetal triples (configuration, history isomorphism, configuration),
with hhp additionally pruned to a downward-closed relation.  All models
are finite, so the fixpoints terminate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ._engine import (
    ROOT_TRIPLE,
    pair_space,
    successors,
    sub_triples,
    triple_space,
    triple_transitions,
)
from .errors import StructuralError


class RelationKind(enum.Enum):
    POMSET = "pomset"
    STEP = "step"
    HP = "hp"
    HHP = "hhp"

    @property
    def posetal(self) -> bool:
        return self in (RelationKind.HP, RelationKind.HHP)


@dataclass(frozen=True)
class Witness:
    """Diagnostic attached to a negative verdict.

    ``kind`` is one of ``"pomset"`` (an unmatched transition label),
    ``"tree"`` (a distinguishing synchronization tree) or ``"level"``
    (the approximant level at which the pair falls out).
    """

    kind: str
    value: object


@dataclass(frozen=True)
class Verdict:
    related: bool
    witness: Optional[Witness] = None
    level: Optional[object] = None  # int or "omega"
    definitive: bool = True

    def __bool__(self):
        return self.related


def extend_iso(f, e_left, e_right, label_left, label_right):
    """Extend a history isomorphism with one pair of equally labelled events.

    The caller remains responsible for checking that the extension is an
    isomorphism of the extended histories.
    """
    f = frozenset(f)
    if label_left != label_right:
        raise StructuralError(
            f"label mismatch: {label_left!r} vs {label_right!r}"
        )
    if any(a == e_left for a, _ in f):
        raise StructuralError(f"event {e_left!r} already in the domain")
    if any(b == e_right for _, b in f):
        raise StructuralError(f"event {e_right!r} already in the range")
    return f | {(e_left, e_right)}


# ---------------------------------------------------------------------------
# pomset / step bisimulation over state pairs
# ---------------------------------------------------------------------------


def _pair_transfer_ok(x, y, rel, step_only):
    for u, x2 in successors(x, step_only):
        if not any(
            u == v and (x2, y2) in rel for v, y2 in successors(y, step_only)
        ):
            return False
    for v, y2 in successors(y, step_only):
        if not any(
            v == u and (x2, y2) in rel for u, x2 in successors(x, step_only)
        ):
            return False
    return True


@lru_cache(maxsize=None)
def _pair_gfp(p, q, step_only):
    rel = pair_space(p, q)
    while True:
        keep = frozenset(
            (x, y) for (x, y) in rel if _pair_transfer_ok(x, y, rel, step_only)
        )
        if keep == rel:
            return rel
        rel = keep


def _pair_failure_witness(p, q, step_only):
    """First transfer violation of the root pair, with its level."""
    rel = set(pair_space(p, q))
    level = 0
    while (p, q) in rel:
        level += 1
        rel = {
            (x, y) for (x, y) in rel if _pair_transfer_ok(x, y, rel, step_only)
        }
    # find the unmatched label one level earlier
    prev = set(pair_space(p, q))
    for _ in range(level - 1):
        prev = {
            (x, y) for (x, y) in prev if _pair_transfer_ok(x, y, prev, step_only)
        }
    for u, p2 in sorted(successors(p, step_only), key=lambda t: t[0].sort_key):
        if not any(
            u == v and (p2, q2) in prev for v, q2 in successors(q, step_only)
        ):
            return Witness("pomset", u), level
    for v, q2 in sorted(successors(q, step_only), key=lambda t: t[0].sort_key):
        if not any(
            v == u and (p2, q2) in prev for u, p2 in successors(p, step_only)
        ):
            return Witness("pomset", v), level
    return Witness("level", level), level


# ---------------------------------------------------------------------------
# hp / hhp bisimulation over posetal triples
# ---------------------------------------------------------------------------


def _triple_transfer_ok(t, rel, fwd, bwd):
    for _lab, cands in fwd[t]:
        if not any(c in rel for c in cands):
            return False
    for _lab, cands in bwd[t]:
        if not any(c in rel for c in cands):
            return False
    return True


@lru_cache(maxsize=None)
def _triple_gfp(es1, es2, hereditary):
    rel = triple_space(es1, es2)
    fwd, bwd = triple_transitions(es1, es2)
    subs = sub_triples(es1, es2) if hereditary else None
    while True:
        keep = frozenset(t for t in rel if _triple_transfer_ok(t, rel, fwd, bwd))
        if hereditary:
            # downward closure: drop triples with a pruned sub-triple
            while True:
                keep2 = frozenset(
                    t for t in keep if all(s in keep for s in subs[t])
                )
                if keep2 == keep:
                    break
                keep = keep2
        if keep == rel:
            return rel
        rel = keep


def _triple_failure_witness(es1, es2, hereditary):
    fwd, bwd = triple_transitions(es1, es2)
    subs = sub_triples(es1, es2) if hereditary else None
    rel = set(triple_space(es1, es2))
    level = 0
    prev = rel
    while ROOT_TRIPLE in rel:
        level += 1
        prev = rel
        keep = {t for t in rel if _triple_transfer_ok(t, rel, fwd, bwd)}
        if hereditary:
            keep = {t for t in keep if all(s in keep for s in subs[t])}
        rel = keep
    for lab, cands in fwd[ROOT_TRIPLE]:
        if not any(c in prev for c in cands):
            return Witness("pomset", _action_pomset(lab)), level
    for lab, cands in bwd[ROOT_TRIPLE]:
        if not any(c in prev for c in cands):
            return Witness("pomset", _action_pomset(lab)), level
    return Witness("level", level), level


def _action_pomset(label):
    from .pomset import singleton

    return singleton(label)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def bisim(p, q, kind: RelationKind, want_witness: bool = False) -> Verdict:
    """Decide whether ``p`` and ``q`` are ``kind``-bisimilar.

    ``p`` and ``q`` are :class:`ProcessState` values (or, for the
    pomset/step kinds only, :class:`SyncTree` values under the
    tree-native semantics).
    """
    if kind.posetal:
        from .estructure import ProcessState

        if not isinstance(p, ProcessState) or not isinstance(q, ProcessState):
            raise StructuralError(
                f"{kind.value} bisimulation requires the event-structure semantics"
            )
        if p.config or q.config:
            raise StructuralError(
                f"{kind.value} bisimilarity is rooted at the empty configuration"
            )
        rel = _triple_gfp(
            p.structure, q.structure, kind is RelationKind.HHP
        )
        if ROOT_TRIPLE in rel:
            return Verdict(True)
        if want_witness:
            w, level = _triple_failure_witness(
                p.structure, q.structure, kind is RelationKind.HHP
            )
            return Verdict(False, witness=w, level=level)
        return Verdict(False)

    step_only = kind is RelationKind.STEP
    rel = _pair_gfp(p, q, step_only)
    if (p, q) in rel:
        return Verdict(True)
    if want_witness:
        w, level = _pair_failure_witness(p, q, step_only)
        return Verdict(False, witness=w, level=level)
    return Verdict(False)
