"""Finite labelled strict partial orders and their isomorphism classes.

A :class:`LabelledPoset` is a concrete finite carrier with a strict,
transitively closed order and a total labelling.  A :class:`Pomset` is
the isomorphism class of such a poset, represented by a canonical
relabelling (events renamed ``e0, e1, ...`` in canonical order), so two
pomsets compare equal exactly when their underlying posets are
isomorphic.  Labels are plain strings.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Tuple

from .errors import StructuralError
from ._kernel import canonical_order

Label = str


def _transitive_closure(pairs, events):
    succ = {e: set() for e in events}
    for a, b in pairs:
        succ[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in events:
            extra = set()
            for b in succ[a]:
                extra |= succ[b] - succ[a]
            if extra:
                succ[a] |= extra
                changed = True
    return {(a, b) for a in events for b in succ[a]}


class LabelledPoset:
    """Immutable finite labelled strict partial order.

    The order is stored transitively closed; input pairs may be covering
    ("Hasse") edges and are closed on construction.  Construction rejects
    reflexive pairs, cycles, labels on unknown events and unlabelled
    events with :class:`StructuralError`.
    """

    __slots__ = ("_events", "_order", "_labels", "_hash")

    def __init__(self, events: Iterable, order: Iterable[Tuple], labels: Mapping):
        events = frozenset(events)
        labels = dict(labels)
        if set(labels) != events:
            raise StructuralError("labels must be total on events")
        order = set(order)
        for a, b in order:
            if a not in events or b not in events:
                raise StructuralError(f"order pair ({a!r}, {b!r}) off the carrier")
        order = _transitive_closure(order, events)
        for a, b in order:
            if a == b:
                raise StructuralError(f"order is cyclic or reflexive at {a!r}")
        object.__setattr__(self, "_events", events)
        object.__setattr__(self, "_order", frozenset(order))
        object.__setattr__(self, "_labels", labels)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LabelledPoset is immutable")

    @property
    def events(self) -> frozenset:
        return self._events

    @property
    def order(self) -> frozenset:
        return self._order

    @property
    def labels(self) -> Mapping:
        return dict(self._labels)

    def label(self, event) -> Label:
        return self._labels[event]

    def __len__(self):
        return len(self._events)

    def __eq__(self, other):
        if not isinstance(other, LabelledPoset):
            return NotImplemented
        return (
            self._events == other._events
            and self._order == other._order
            and self._labels == other._labels
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(
                (self._events, self._order, frozenset(self._labels.items()))
            )
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        evs = ", ".join(
            f"{e!r}:{self._labels[e]}" for e in sorted(self._events, key=repr)
        )
        rel = ", ".join(f"{a!r}<{b!r}" for a, b in sorted(self._order, key=repr))
        return f"LabelledPoset({{{evs}}}, {{{rel}}})"


EMPTY_POSET = LabelledPoset((), (), {})


class Pomset:
    """Isomorphism class of labelled posets, keyed by its canonical form."""

    __slots__ = ("_canon", "_key")

    def __init__(self, canon: LabelledPoset, _key=None):
        object.__setattr__(self, "_canon", canon)
        if _key is None:
            n = len(canon)
            names = [f"e{i}" for i in range(n)]
            idx = {e: i for i, e in enumerate(names)}
            _key = (
                tuple(canon.label(e) for e in names),
                tuple(sorted((idx[a], idx[b]) for a, b in canon.order)),
            )
        object.__setattr__(self, "_key", _key)

    def __setattr__(self, name, value):
        raise AttributeError("Pomset is immutable")

    @property
    def canon(self) -> LabelledPoset:
        return self._canon

    @property
    def sort_key(self):
        return (len(self._canon),) + self._key

    def __len__(self):
        return len(self._canon)

    def is_step(self) -> bool:
        return not self._canon.order

    def label_multiset(self) -> Tuple[Label, ...]:
        return self._key[0]

    def __eq__(self, other):
        if not isinstance(other, Pomset):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Pomset({self._key[0]}, {self._key[1]})"


def canonicalize(lp: LabelledPoset) -> Pomset:
    """Canonical representative of ``lp``'s isomorphism class."""
    events = sorted(lp.events, key=repr)
    idx = {e: i for i, e in enumerate(events)}
    label_code = {s: c for c, s in enumerate(sorted({lp.label(e) for e in events}))}
    labels = tuple(label_code[lp.label(e)] for e in events)
    above = [0] * len(events)
    for a, b in lp.order:
        above[idx[a]] |= 1 << idx[b]
    perm = canonical_order(labels, tuple(above))
    rename = {events[orig]: f"e{pos}" for pos, orig in enumerate(perm)}
    canon = LabelledPoset(
        rename.values(),
        ((rename[a], rename[b]) for a, b in lp.order),
        {rename[e]: lp.label(e) for e in events},
    )
    return Pomset(canon)


def is_isomorphic(u: LabelledPoset, v: LabelledPoset) -> bool:
    """True iff there is a label-preserving order-isomorphism u -> v."""
    if len(u) != len(v):
        return False
    return canonicalize(u) == canonicalize(v)


def is_step(u: Pomset) -> bool:
    """True iff the pomset's order relation is empty."""
    return u.is_step()


def series_compose(u: LabelledPoset, v: LabelledPoset) -> LabelledPoset:
    """Sequential composition: everything in ``u`` below everything in ``v``.

    Event identifiers are renamed on collision (``v``'s side gets fresh
    names).
    """
    clash = u.events & v.events
    ren = {}
    if clash:
        used = set(u.events) | set(v.events)
        for e in v.events:
            if e in clash:
                i = 0
                while f"{e}_{i}" in used:
                    i += 1
                ren[e] = f"{e}_{i}"
                used.add(ren[e])
            else:
                ren[e] = e
    else:
        ren = {e: e for e in v.events}
    events = set(u.events) | set(ren.values())
    order = set(u.order)
    order |= {(ren[a], ren[b]) for a, b in v.order}
    order |= {(a, ren[b]) for a in u.events for b in v.events}
    labels = dict(u.labels)
    labels.update({ren[e]: v.label(e) for e in v.events})
    return LabelledPoset(events, order, labels)


def restrict(lp: LabelledPoset, subset: Iterable) -> LabelledPoset:
    """Induced sub-poset on ``subset`` with inherited order and labels."""
    subset = frozenset(subset)
    unknown = subset - lp.events
    if unknown:
        raise StructuralError(f"unknown events: {sorted(map(repr, unknown))}")
    return LabelledPoset(
        subset,
        ((a, b) for a, b in lp.order if a in subset and b in subset),
        {e: lp.label(e) for e in subset},
    )


EMPTY_POMSET = canonicalize(EMPTY_POSET)


@lru_cache(maxsize=None)
def singleton(label: Label) -> Pomset:
    """The one-event pomset carrying ``label``."""
    return canonicalize(LabelledPoset(("e0",), (), {"e0": label}))


def step_of(labels: Iterable[Label]) -> Pomset:
    """The step (empty order) pomset with the given label multiset."""
    labels = list(labels)
    names = [f"e{i}" for i in range(len(labels))]
    return canonicalize(LabelledPoset(names, (), dict(zip(names, labels))))


def chain_of(labels: Iterable[Label]) -> Pomset:
    """The totally ordered pomset with the given label sequence."""
    labels = list(labels)
    names = [f"e{i}" for i in range(len(labels))]
    order = [(names[i], names[i + 1]) for i in range(len(labels) - 1)]
    return canonicalize(LabelledPoset(names, order, dict(zip(names, labels))))
