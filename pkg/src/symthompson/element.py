"""Labeled tree-pair calculus for the groups V_d(H, q).

An element is a triple (F-, (b, h), F+): two complete trees with the same
number of leaves, a bijection b from the leaves of F- to the leaves of F+, and
a label h_l in the local group H on every domain leaf.  It acts on the Cantor
set of infinite words by

    l . c_{m+1} c_{m+2} ...  |->  b(l) . q(h_l)(c_{m+1}) q(h_l)(c_{m+2}) ...

where l is the domain leaf on the path to the point.  Adding a caret at a
domain leaf l sends the child l.j to b(l).q(h_l)(j) with the same label, which
keeps the action unchanged; removing such carets until none is left gives the
canonical (reduced) representative used for equality and hashing.

Labels are stored as integer indices into the local group's closure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Mapping

from .errors import BallSizeLimitError, GroupMismatchError, InputError, NotALeafError
from .localgroup import LocalElement, LocalGroup
from .trees import (
    CompleteTree,
    all_trees,
    check_depth,
    common_refinement,
    expand_leaf,
    leaf_prefix,
    max_depth,
    refines,
    trivial_tree,
)

DEFAULT_BALL_LIMIT = 200_000


class SymTreePair:
    """A representative (F-, (b, h), F+) of an element of V_d(H, q).

    ``mapping`` sends each domain leaf to ``(range_leaf, label_index)``.
    Instances are immutable.  ``==`` and ``hash`` compare group elements, i.e.
    reduced forms; use :meth:`same_representative` for structural equality.
    """

    __slots__ = ("group", "_map", "_pairs", "_canon", "_domain", "_range")

    def __init__(self, group: LocalGroup, mapping: Mapping[str, tuple[str, int]]):
        self.group = group
        self._map = dict(mapping)
        _validate(group, self._map)
        self._pairs = None
        self._canon = None
        self._domain = None
        self._range = None

    @classmethod
    def _trusted(cls, group, mapping, reduced=False):
        obj = cls.__new__(cls)
        obj.group = group
        obj._map = mapping
        obj._pairs = None
        obj._canon = None
        obj._domain = None
        obj._range = None
        if reduced:
            obj._canon = obj
        return obj

    @classmethod
    def from_pairs(cls, group: LocalGroup, pairs: Iterable) -> "SymTreePair":
        """Build from ``(domain_leaf, range_leaf, label)`` triples.

        ``label`` may be a :class:`LocalElement`, an index or a word string.
        """
        mapping = {}
        for dom, rng, label in pairs:
            if dom in mapping:
                raise InputError(f"domain leaf {dom or 'e'!r} listed twice")
            mapping[dom] = (rng, _label_index(group, label))
        return cls(group, mapping)

    @property
    def arity(self) -> int:
        return self.group.arity

    @property
    def mapping(self) -> dict[str, tuple[str, int]]:
        return dict(self._map)

    @property
    def pairs(self) -> tuple[tuple[str, str, int], ...]:
        if self._pairs is None:
            self._pairs = tuple(sorted((dom, rng, lab) for dom, (rng, lab) in self._map.items()))
        return self._pairs

    @property
    def domain(self) -> CompleteTree:
        if self._domain is None:
            self._domain = CompleteTree(self.arity, tuple(self._map))
        return self._domain

    @property
    def range(self) -> CompleteTree:
        if self._range is None:
            self._range = CompleteTree(self.arity, tuple(r for r, _ in self._map.values()))
        return self._range

    def target(self, leaf: str) -> str:
        return self._map[leaf][0]

    def label(self, leaf: str) -> LocalElement:
        return LocalElement(self.group, self._map[leaf][1])

    def canonical(self) -> "SymTreePair":
        if self._canon is None:
            self._canon = reduce(self)
        return self._canon

    def key(self) -> tuple:
        return self.canonical().pairs

    def same_representative(self, other: "SymTreePair") -> bool:
        return self.group is other.group and self.pairs == other.pairs

    def is_identity(self) -> bool:
        return self.key() == (("", "", 0),)

    def is_unlabeled(self) -> bool:
        return all(lab == 0 for _, lab in self._map.values())

    def __eq__(self, other):
        if not isinstance(other, SymTreePair):
            return NotImplemented
        return self.group is other.group and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other: "SymTreePair") -> "SymTreePair":
        return compose(self, other)

    def __call__(self, point: "CantorPoint") -> "CantorPoint":
        return act(self, point)

    def __repr__(self):
        g = self.group
        body = ", ".join(f"{d or 'e'}->{r or 'e'}:{g.word_of(lab)}" for d, r, lab in self.pairs)
        return f"SymTreePair({body})"


def _label_index(group: LocalGroup, label) -> int:
    if isinstance(label, LocalElement):
        if label.group is not group:
            raise GroupMismatchError("label from a different local group")
        return label.index
    if isinstance(label, str):
        return group.parse_word(label)
    if not 0 <= label < group.order:
        raise InputError(f"label index {label} out of range")
    return int(label)


def _validate(group: LocalGroup, mapping: dict) -> None:
    if not mapping:
        raise InputError("element needs at least one leaf")
    d = group.arity
    dom = CompleteTree(d, tuple(mapping))
    targets = [r for r, _ in mapping.values()]
    if len(set(targets)) != len(targets):
        raise InputError("leaf map is not injective")
    rng = CompleteTree(d, tuple(targets))
    if len(dom) != len(rng):
        raise InputError("domain and range trees have different leaf counts")  # pragma: no cover
    for _, lab in mapping.values():
        if not isinstance(lab, int) or not 0 <= lab < group.order:
            raise InputError(f"bad label {lab!r}")


def _same_group(a: SymTreePair, b: SymTreePair) -> None:
    if a.group is not b.group:
        raise GroupMismatchError("elements are over different local groups")


# ---------------------------------------------------------------------------
# points of the Cantor set

@dataclass(frozen=True)
class CantorPoint:
    """The eventually periodic word ``prefix . period . period . ...``.

    Always stored normalized: primitive period, then the shortest prefix.
    """

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise InputError("period must be non-empty")
        if any(ch not in "0123456789" for ch in self.prefix + self.period):
            raise InputError("points are words over decimal digits")
        prefix, period = _normalize(self.prefix, self.period)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "CantorPoint":
        text = text.strip().replace(" ", "")
        if text.count("(") != 1 or not text.endswith(")"):
            raise InputError(f"expected 'prefix(period)', got {text!r}")
        prefix, period = text[:-1].split("(")
        point = cls(prefix, period)
        if d is not None:
            point.check_arity(d)
        return point

    def check_arity(self, d: int) -> None:
        bad = [c for c in self.prefix + self.period if int(c) >= d]
        if bad:
            raise InputError(f"digit {bad[0]} is not below the arity {d}")

    def digits(self, n: int) -> str:
        """The first ``n`` digits."""
        word = self.prefix
        if len(word) < n:
            reps = (n - len(word)) // len(self.period) + 1
            word += self.period * reps
        return word[:n]

    def shift(self, m: int) -> "CantorPoint":
        """Drop the first ``m`` digits."""
        if m <= len(self.prefix):
            return CantorPoint(self.prefix[m:], self.period)
        k = (m - len(self.prefix)) % len(self.period)
        return CantorPoint("", self.period[k:] + self.period[:k])

    def __str__(self):
        return f"{self.prefix}({self.period})"


def _normalize(prefix: str, period: str) -> tuple[str, str]:
    p = len(period)
    for r in range(1, p + 1):
        if p % r == 0 and period[:r] * (p // r) == period:
            period = period[:r]
            break
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1] + period[:-1]
    return prefix, period


def points(d: int, max_prefix: int, max_period: int) -> list[CantorPoint]:
    """Every distinct normalized point with prefix and period within the bounds."""
    out = set()
    digits = [str(j) for j in range(d)]
    for plen in range(max_prefix + 1):
        for pre in product(digits, repeat=plen):
            for qlen in range(1, max_period + 1):
                for per in product(digits, repeat=qlen):
                    out.add(CantorPoint("".join(pre), "".join(per)))
    return sorted(out, key=lambda c: (len(c.prefix), len(c.period), c.prefix, c.period))


def random_point(d: int, rng: random.Random, max_prefix: int = 6, max_period: int = 4) -> CantorPoint:
    pre = "".join(str(rng.randrange(d)) for _ in range(rng.randint(0, max_prefix)))
    per = "".join(str(rng.randrange(d)) for _ in range(rng.randint(1, max_period)))
    return CantorPoint(pre, per)


# ---------------------------------------------------------------------------
# the calculus

def identity_element(group: LocalGroup) -> SymTreePair:
    return SymTreePair._trusted(group, {"": ("", 0)}, reduced=True)


def expand(e: SymTreePair, leaf: str) -> SymTreePair:
    """Add one caret at the domain leaf ``leaf`` (and at its image)."""
    if leaf not in e._map:
        raise NotALeafError(f"{leaf or 'e'!r} is not a domain leaf")
    target, lab = e._map[leaf]
    check_depth(leaf + "0")
    check_depth(target + "0")
    q = e.group.q_images[lab]
    mapping = dict(e._map)
    del mapping[leaf]
    for j in range(e.arity):
        mapping[leaf + str(j)] = (target + str(q(j)), lab)
    return SymTreePair._trusted(e.group, mapping)


def expand_to_domain(e: SymTreePair, tree: CompleteTree) -> SymTreePair:
    """The representative of ``e`` whose domain tree is exactly ``tree``.

    ``tree`` must refine the domain of ``e``.
    """
    if not refines(tree, e.domain):
        raise InputError("target tree does not refine the domain")
    group, src = e.group, e._map
    limit = max_depth()
    mapping = {}
    for leaf in tree.leaves:
        top = leaf_prefix(src, leaf)
        target, lab = src[top]
        rng = target + leaf[len(top):].translate(group.q_trans[lab])
        if len(rng) > limit:
            check_depth(rng)
        mapping[leaf] = (rng, lab)
    return SymTreePair._trusted(group, mapping)


def expand_to_range(e: SymTreePair, tree: CompleteTree) -> SymTreePair:
    """The representative of ``e`` whose range tree is exactly ``tree``."""
    if not refines(tree, e.range):
        raise InputError("target tree does not refine the range")
    group = e.group
    back = {rng: (dom, lab) for dom, (rng, lab) in e._map.items()}
    limit = max_depth()
    mapping = {}
    for leaf in tree.leaves:
        top = leaf_prefix(back, leaf)
        dom, lab = back[top]
        src = dom + leaf[len(top):].translate(group.q_inv_trans[lab])
        if len(src) > limit:
            check_depth(src)
        mapping[src] = (leaf, lab)
    return SymTreePair._trusted(group, mapping)


def reduce(e: SymTreePair) -> SymTreePair:
    """Contract redundant carets until none is left.

    A domain caret at p is redundant when its children all carry one label h
    and p.j maps to p'.q(h)(j) for a common range vertex p'.
    """
    if e._canon is not None:
        return e._canon
    group, d = e.group, e.arity
    mapping = dict(e._map)
    stack = sorted({leaf[:-1] for leaf in mapping if leaf}, key=len)
    while stack:
        p = stack.pop()
        first = mapping.get(p + "0")
        if first is None or not first[0]:
            continue
        target0, lab = first
        parent = target0[:-1]
        q = group.q_images[lab]
        if target0[-1] != str(q(0)):
            continue
        ok = True
        for j in range(1, d):
            entry = mapping.get(p + str(j))
            if entry is None or entry[1] != lab or entry[0] != parent + str(q(j)):
                ok = False
                break
        if not ok:
            continue
        for j in range(d):
            del mapping[p + str(j)]
        mapping[p] = (parent, lab)
        if p:
            stack.append(p[:-1])
    out = SymTreePair._trusted(group, mapping, reduced=True)
    e._canon = out
    return out


def compose(g: SymTreePair, f: SymTreePair) -> SymTreePair:
    """The element g o f (apply f first)."""
    _same_group(g, f)
    group = g.group
    meet = common_refinement(f.range, g.domain)
    back = {rng: (dom, lab) for dom, (rng, lab) in f._map.items()}
    fwd = g._map
    limit = max_depth()
    mapping = {}
    for leaf in meet.leaves:
        mid = leaf_prefix(back, leaf)
        dom, lab_f = back[mid]
        src = dom + leaf[len(mid):].translate(group.q_inv_trans[lab_f])
        top = leaf_prefix(fwd, leaf)
        tgt, lab_g = fwd[top]
        dst = tgt + leaf[len(top):].translate(group.q_trans[lab_g])
        if len(src) > limit or len(dst) > limit:
            check_depth(max(src, dst, key=len))
        mapping[src] = (dst, group.mul_idx(lab_g, lab_f))
    return reduce(SymTreePair._trusted(group, mapping))


def inverse(e: SymTreePair) -> SymTreePair:
    group = e.group
    mapping = {rng: (dom, group.inv_idx(lab)) for dom, (rng, lab) in e._map.items()}
    return reduce(SymTreePair._trusted(group, mapping))


def act(e: SymTreePair, point: CantorPoint) -> CantorPoint:
    """Image of a point under the homeomorphism represented by ``e``."""
    point.check_arity(e.arity)
    leaf = leaf_prefix(e._map, point.digits(e.domain.depth))
    target, lab = e._map[leaf]
    tail = point.shift(len(leaf))
    trans = e.group.q_trans[lab]
    return CantorPoint(target + tail.prefix.translate(trans), tail.period.translate(trans))


def equals(e1: SymTreePair, e2: SymTreePair) -> bool:
    _same_group(e1, e2)
    return e1.key() == e2.key()


def power(e: SymTreePair, n: int) -> SymTreePair:
    out = identity_element(e.group)
    base = e if n >= 0 else inverse(e)
    for _ in range(abs(n)):
        out = compose(out, base)
    return out


# ---------------------------------------------------------------------------
# the structural maps pi, iota, r

def relabel(e: SymTreePair, group: LocalGroup, table) -> SymTreePair:
    """Same trees and bijection, labels pushed through ``table`` into ``group``."""
    mapping = {dom: (rng, table[lab]) for dom, (rng, lab) in e._map.items()}
    return reduce(SymTreePair._trusted(group, mapping))


def pi(e: SymTreePair) -> SymTreePair:
    """Forget every label except its boundary permutation: V_d(H) -> V_d(q(H))."""
    image = e.group.image()
    table = [image.index_of(q) for q in e.group.q_images]
    return relabel(e, image, table)


def pi_section(v: SymTreePair, group: LocalGroup) -> SymTreePair:
    """Lift an element over q(H) by choosing, label by label, a fixed preimage."""
    image = group.image()
    if v.group is not image:
        raise GroupMismatchError("element is not over the image group of this group")
    return relabel(v, group, group.section_table(image))


def iota(h: LocalElement) -> SymTreePair:
    """One caret; the leftmost leaf carries h and every other leaf the identity."""
    group = h.group
    mapping = {str(j): (str(j), 0) for j in range(group.arity)}
    mapping["0"] = ("0", h.index)
    return reduce(SymTreePair._trusted(group, mapping))


def retract(e: SymTreePair) -> LocalElement:
    """Label of the leftmost domain leaf of the reduced form."""
    canon = e.canonical()
    leaf = canon.domain.leftmost_leaf()
    return LocalElement(e.group, canon._map[leaf][1])


# ---------------------------------------------------------------------------
# enumeration, sampling and generation

def tree_pair_elements(group: LocalGroup, domain: CompleteTree, range_: CompleteTree,
                       labels: bool = True):
    """Every representative with the given domain and range trees.

    Yields unreduced pairs; with ``labels=False`` only the identity label is used.
    """
    dom, rng = domain.leaves, range_.leaves
    if len(dom) != len(rng):
        raise InputError("trees have different leaf counts")
    label_range = range(group.order) if labels else (0,)
    for perm in permutations(rng):
        for labs in product(label_range, repeat=len(dom)):
            mapping = {dl: (rl, lab) for dl, rl, lab in zip(dom, perm, labs)}
            yield SymTreePair._trusted(group, mapping)


def canonical_elements(group: LocalGroup, max_carets: int, labels: bool = True) -> list[SymTreePair]:
    """All elements whose reduced form has at most ``max_carets`` carets.

    Exhaustive: every such element has a representative on trees of exactly
    its reduced size, so enumerating all tree pairs of each size suffices.
    """
    seen = {}
    for c in range(max_carets + 1):
        trees = all_trees(group.arity, c)
        for t1 in trees:
            for t2 in trees:
                for e in tree_pair_elements(group, t1, t2, labels):
                    canon = reduce(e)
                    if canon.domain.carets == c:
                        seen.setdefault(canon.pairs, canon)
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k), k))]


def vd_generating_set(group: LocalGroup) -> list[SymTreePair]:
    """Unlabeled elements of reduced size at most 2 carets, identity excluded."""
    return [e for e in canonical_elements(group, 2, labels=False) if not e.is_identity()]


def random_tree(d: int, carets: int, rng: random.Random) -> CompleteTree:
    tree = trivial_tree(d)
    for _ in range(carets):
        tree = expand_leaf(tree, rng.choice(tree.leaves))
    return tree


def random_element(group: LocalGroup, rng: random.Random, max_carets: int = 4,
                   unlabeled: bool = False) -> SymTreePair:
    """A reduced element built from random trees, bijection and labels."""
    c = rng.randint(0, max_carets)
    d = group.arity
    dom = random_tree(d, c, rng)
    ran = list(random_tree(d, c, rng).leaves)
    rng.shuffle(ran)
    mapping = {}
    for leaf, target in zip(dom.leaves, ran):
        lab = 0 if unlabeled else rng.randrange(group.order)
        mapping[leaf] = (target, lab)
    return reduce(SymTreePair._trusted(group, mapping))


def bfs_ball(gens: list[SymTreePair], radius: int, limit: int = DEFAULT_BALL_LIMIT,
             group: LocalGroup | None = None, stop_when=None,
             truncate: bool = False) -> dict[tuple, tuple[SymTreePair, int]]:
    """All products of at most ``radius`` generators, keyed by canonical form.

    Returns an insertion-ordered dict ``key -> (element, word length)``;
    products are formed as ``x o s`` with ``x`` in the previous sphere and the
    generators in the given order.  ``stop_when(ball)`` may end the search early.
    With ``truncate`` the search stops quietly at ``limit`` elements instead of
    raising; the caller can tell by the size of the result.
    """
    if radius < 0:
        raise InputError("radius must be non-negative")
    if group is None:
        if not gens:
            raise InputError("need a group or at least one generator")
        group = gens[0].group
    for s in gens:
        if s.group is not group:
            raise GroupMismatchError("generators over different local groups")
    one = identity_element(group)
    ball = {one.key(): (one, 0)}
    sphere = [one]
    gens = [s.canonical() for s in gens]
    for r in range(1, radius + 1):
        if stop_when is not None and stop_when(ball):
            break
        nxt = []
        for x in sphere:
            for s in gens:
                y = compose(x, s)
                k = y.key()
                if k not in ball:
                    if len(ball) >= limit:
                        if truncate:
                            return ball
                        raise BallSizeLimitError(f"ball exceeds {limit} elements at radius {r}")
                    ball[k] = (y, r)
                    nxt.append(y)
        sphere = nxt
        if not sphere:
            break
    return ball


def format_element(e: SymTreePair, group_ref: str | None = None) -> str:
    lines = []
    ref = group_ref if group_ref is not None else e.group.name
    if ref:
        lines.append(f"group {ref}")
    g = e.group
    for dom, rng, lab in e.pairs:
        lines.append(f"map {dom or 'e'} -> {rng or 'e'} : {g.word_of(lab)}")
    return "\n".join(lines) + "\n"
