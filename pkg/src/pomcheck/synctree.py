"""Finite pomset synchronization trees.

A tree is a finite sum of pomset-prefixed subtrees plus an optional
divergence summand (written ``W`` in the textual grammar).  The
empty-summand convergent tree is the inactive process ``NIL``; the
empty-summand divergent tree is ``OMEGA``.  Prefix pomsets are nonempty.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Tuple

from .errors import StructuralError
from .pomset import Pomset


class SyncTree:
    """Immutable synchronization tree.

    ``summands`` is normalized: sorted by (prefix, child) sort key;
    duplicate summands are kept (they are semantically idempotent but
    syntactically preserved).
    """

    __slots__ = ("_summands", "_divergent", "_key", "_hash")

    def __init__(self, summands: Iterable[Tuple[Pomset, "SyncTree"]] = (),
                 divergent: bool = False):
        summands = tuple(summands)
        for prefix, child in summands:
            if len(prefix) == 0:
                raise StructuralError("empty pomset prefixes are not allowed")
            if not isinstance(child, SyncTree):
                raise StructuralError("summand child must be a SyncTree")
        summands = tuple(
            sorted(summands, key=lambda s: (s[0].sort_key, s[1].sort_key))
        )
        object.__setattr__(self, "_summands", summands)
        object.__setattr__(self, "_divergent", bool(divergent))
        key = (
            self._divergent,
            tuple((p.sort_key, c.sort_key) for p, c in summands),
        )
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("SyncTree is immutable")

    @property
    def summands(self) -> Tuple[Tuple[Pomset, "SyncTree"], ...]:
        return self._summands

    @property
    def divergent(self) -> bool:
        return self._divergent

    @property
    def sort_key(self):
        return self._key

    def with_omega(self) -> "SyncTree":
        """This tree with a divergence summand added at the root."""
        return SyncTree(self._summands, True)

    def __eq__(self, other):
        if not isinstance(other, SyncTree):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .grammar import format_tree

        return f"SyncTree({format_tree(self)!r})"


NIL = SyncTree((), False)
OMEGA = SyncTree((), True)


def prefix(p: Pomset, child: SyncTree = NIL) -> SyncTree:
    """The single-summand tree ``p : child``."""
    return SyncTree(((p, child),))


def tree_transitions(t: SyncTree) -> frozenset:
    """Tree-native transition relation: one (prefix, child) pair per summand."""
    return frozenset(t.summands)


def tree_divergent(t: SyncTree) -> bool:
    """Whether a divergence summand is present at the root."""
    return t.divergent


@lru_cache(maxsize=None)
def tree_size(t: SyncTree) -> int:
    """Node count (each subtree node counts once, prefixes do not)."""
    return 1 + sum(tree_size(c) for _, c in t.summands)


@lru_cache(maxsize=None)
def tree_depth(t: SyncTree) -> int:
    """Longest prefix-path length from the root."""
    return max((1 + tree_depth(c) for _, c in t.summands), default=0)


@lru_cache(maxsize=None)
def tree_event_count(t: SyncTree) -> int:
    """Total number of pomset events along all paths (compile size)."""
    return sum(len(p) + tree_event_count(c) for p, c in t.summands)


def subtrees(t: SyncTree) -> frozenset:
    """All distinct subtrees of ``t``, including ``t`` itself."""
    acc = {t}
    for _, c in t.summands:
        acc |= subtrees(c)
    return frozenset(acc)
