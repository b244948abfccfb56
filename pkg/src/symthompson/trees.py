"""Complete finite rooted subtrees of the infinite d-ary tree.

A vertex of the d-ary tree is addressed by the word of child indices on the
path from the root, stored as a string of ASCII digits (so ``d <= 10``); the
root is the empty string.  A complete finite subtree is stored by its leaves
only.  The leaves of such a tree are exactly a maximal prefix-free code, which
is what :class:`CompleteTree` validates.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .errors import (
    ArityMismatchError,
    DepthLimitError,
    InputError,
    InvalidArityError,
    NotALeafError,
    UnderspecifiedPointError,
)

DEFAULT_MAX_DEPTH = 64
MAX_ARITY = 10

_max_depth = contextvars.ContextVar("max_depth", default=DEFAULT_MAX_DEPTH)


def max_depth() -> int:
    return _max_depth.get()


@contextlib.contextmanager
def depth_limit(limit: int):
    """Temporarily change the maximal leaf depth for the current context."""
    if limit < 1:
        raise ValueError("depth limit must be positive")
    token = _max_depth.set(limit)
    try:
        yield
    finally:
        _max_depth.reset(token)


def check_depth(address: str) -> None:
    if len(address) > _max_depth.get():
        raise DepthLimitError(
            f"address of length {len(address)} exceeds depth limit {_max_depth.get()}"
        )


def check_arity(d: int) -> None:
    if not isinstance(d, int) or d < 2 or d > MAX_ARITY:
        raise InvalidArityError(f"arity must be an integer in [2, {MAX_ARITY}], got {d!r}")


def children(address: str, d: int) -> list[str]:
    return [address + str(j) for j in range(d)]


@dataclass(frozen=True)
class CompleteTree:
    """A complete finite rooted d-ary tree, as its sorted tuple of leaves."""

    arity: int
    leaves: tuple[str, ...]

    def __post_init__(self):
        check_arity(self.arity)
        leaves = tuple(sorted(set(self.leaves)))
        if len(leaves) != len(self.leaves) or leaves != self.leaves:
            object.__setattr__(self, "leaves", leaves)
        _validate_code(self.arity, leaves)

    @classmethod
    def from_leaves(cls, d: int, leaves: Iterable[str]) -> "CompleteTree":
        return cls(d, tuple(leaves))

    @property
    def carets(self) -> int:
        return (len(self.leaves) - 1) // (self.arity - 1)

    @property
    def leaf_set(self) -> frozenset[str]:
        return frozenset(self.leaves)

    @property
    def depth(self) -> int:
        return max(len(leaf) for leaf in self.leaves)

    def __len__(self):
        return len(self.leaves)

    def __contains__(self, address):
        return address in self.leaf_set

    def internal_vertices(self) -> list[str]:
        """Internal vertices (caret roots), sorted."""
        internal = {leaf[:k] for leaf in self.leaves for k in range(len(leaf))}
        return sorted(internal)

    def leftmost_leaf(self) -> str:
        return self.leaves[0]

    def __str__(self):
        return format_tree(self)


def _validate_code(d: int, leaves: tuple[str, ...]) -> None:
    if not leaves:
        raise InputError("a tree needs at least one leaf")
    digits = {str(j) for j in range(d)}
    for leaf in leaves:
        if any(ch not in digits for ch in leaf):
            raise InputError(f"leaf {leaf!r} has a digit outside 0..{d - 1}")
        check_depth(leaf)
    # Sorted strings: a prefix of x that precedes x in order also precedes
    # every word between them, so adjacent pairs suffice.
    for a, b in zip(leaves, leaves[1:]):
        if b.startswith(a):
            raise InputError(f"leaf {a!r} is a prefix of leaf {b!r}")
    # Kraft equality: a prefix-free code is maximal iff sum d^-|l| == 1.
    top = max(len(leaf) for leaf in leaves)
    if sum(d ** (top - len(leaf)) for leaf in leaves) != d**top:
        raise InputError("leaf set is not a complete prefix code")


def trivial_tree(d: int) -> CompleteTree:
    check_arity(d)
    return CompleteTree(d, ("",))


def expand_leaf(tree: CompleteTree, leaf: str) -> CompleteTree:
    if leaf not in tree.leaf_set:
        raise NotALeafError(f"{leaf or 'e'!r} is not a leaf of the tree")
    check_depth(leaf + "0")
    leaves = [x for x in tree.leaves if x != leaf] + children(leaf, tree.arity)
    return CompleteTree(tree.arity, tuple(sorted(leaves)))


def _same_arity(t1: CompleteTree, t2: CompleteTree) -> None:
    if t1.arity != t2.arity:
        raise ArityMismatchError(f"arity {t1.arity} vs arity {t2.arity}")


def leaf_prefix(leaves, word: str) -> str | None:
    """The element of the prefix code ``leaves`` that is a prefix of ``word``."""
    for k in range(len(word) + 1):
        if word[:k] in leaves:
            return word[:k]
    return None


def refines(t1: CompleteTree, t2: CompleteTree) -> bool:
    """True iff ``t1`` is obtained from ``t2`` by adding carets."""
    _same_arity(t1, t2)
    coarse = t2.leaf_set
    return all(leaf_prefix(coarse, leaf) is not None for leaf in t1.leaves)


def common_refinement(t1: CompleteTree, t2: CompleteTree) -> CompleteTree:
    """The smallest tree refining both arguments."""
    _same_arity(t1, t2)
    union = sorted(t1.leaf_set | t2.leaf_set)
    # drop every word that is a proper prefix of its successor
    leaves = [a for a, b in zip(union, union[1:]) if not b.startswith(a)]
    leaves.append(union[-1])
    return CompleteTree(t1.arity, tuple(leaves))


def nearest_leaf(tree: CompleteTree, point) -> str:
    """The leaf of ``tree`` lying on the path to ``point``.

    ``point`` is either a finite address (which must be at least as deep as
    the matching leaf) or anything with a ``digits(n)`` method, such as a
    :class:`~symthompson.element.CantorPoint`.
    """
    leaves = tree.leaf_set
    if isinstance(point, str):
        found = leaf_prefix(leaves, point)
        if found is None:
            raise UnderspecifiedPointError(
                f"address {point or 'e'!r} is shallower than the leaf it lies under"
            )
        return found
    word = point.digits(tree.depth)
    found = leaf_prefix(leaves, word)
    assert found is not None
    return found


def subtrees_containing(big: CompleteTree, small: CompleteTree) -> list[CompleteTree]:
    """All complete trees ``S`` with ``big`` refining ``S`` refining ``small``."""
    _same_arity(big, small)
    small_internal = set(small.internal_vertices())
    extra = [v for v in big.internal_vertices() if v not in small_internal]
    d = big.arity
    out = []
    for mask in range(1 << len(extra)):
        chosen = small_internal | {v for i, v in enumerate(extra) if mask >> i & 1}
        # a caret set is a rooted subtree iff every non-root caret's parent is in it
        if any(v and v[:-1] not in chosen for v in chosen):
            continue
        if not chosen:
            out.append(trivial_tree(d))
            continue
        leaves = [c for v in chosen for c in children(v, d) if c not in chosen]
        out.append(CompleteTree(d, tuple(sorted(leaves))))
    return sorted(out, key=lambda t: (t.carets, t.leaves))


def all_trees(d: int, carets: int) -> list[CompleteTree]:
    """Every complete tree with exactly ``carets`` carets, in a fixed order."""
    check_arity(d)
    level = {trivial_tree(d)}
    for _ in range(carets):
        level = {expand_leaf(t, leaf) for t in level for leaf in t.leaves}
    return sorted(level, key=lambda t: t.leaves)


def trees_up_to(d: int, carets: int) -> list[CompleteTree]:
    return [t for c in range(carets + 1) for t in all_trees(d, c)]


def comb_tree(d: int, n_leaves: int) -> CompleteTree:
    """Right comb: repeatedly expand the last leaf until there are ``n_leaves``."""
    check_arity(d)
    if (n_leaves - 1) % (d - 1) != 0 or n_leaves < 1:
        raise InputError(f"no {d}-ary tree has {n_leaves} leaves")
    tree = trivial_tree(d)
    while len(tree) < n_leaves:
        tree = expand_leaf(tree, tree.leaves[-1])
    return tree


def words(d: int, length: int) -> Iterator[str]:
    for digits in product(range(d), repeat=length):
        yield "".join(map(str, digits))


def format_tree(tree: CompleteTree) -> str:
    return " ".join(leaf or "e" for leaf in tree.leaves)


def parse_tree(d: int, text: str) -> CompleteTree:
    tokens = text.split()
    if not tokens:
        raise InputError("empty tree text")
    leaves = ["" if tok == "e" else tok for tok in tokens]
    if len(set(leaves)) != len(leaves):
        raise InputError("repeated leaf in tree text")
    return CompleteTree(d, tuple(leaves))
