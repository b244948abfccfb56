"""The Stein-Farley poset over the tree model, at bounded height.

A vertex is a class [T, g] of pairs (tree, element) where

    (T1, g1) ~ (T2, g2)  iff  g2^-1 g1 has a representative with domain T1
                              and range T2.

The height of [T, g] is the caret count of T.  Descending links are built for
base vertices [T, id]; the left action g.[T, f] = [T, g f] is transitive on
each height (see :func:`orbit_census`), so nothing is lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .element import (
    SymTreePair,
    compose,
    expand_to_domain,
    identity_element,
    inverse,
    reduce,
    tree_pair_elements,
)
from .homology import SimplicialComplex
from .errors import BoundExceededError, GroupMismatchError, InputError, NotComparableError
from .localgroup import LocalGroup
from .trees import (
    CompleteTree,
    all_trees,
    comb_tree,
    expand_leaf,
    refines,
    subtrees_containing,
)

DEFAULT_INTERVAL_BOUND = 4
DEFAULT_LINK_LEAF_BOUND = 9
DEFAULT_STABILIZER_LIMIT = 1_000_000
DEFAULT_ORBIT_HEIGHT_BOUND = 5


@dataclass(frozen=True, eq=False)
class PosetVertex:
    """A representative pair (T, g); compare classes with :func:`vertex_equals`."""

    tree: CompleteTree
    element: SymTreePair

    def __post_init__(self):
        if self.tree.arity != self.element.arity:
            raise InputError("tree and element have different arities")
        object.__setattr__(self, "element", self.element.canonical())

    @property
    def group(self) -> LocalGroup:
        return self.element.group

    def __repr__(self):
        return f"PosetVertex([{self.tree}], {self.element!r})"


def base_vertex(tree: CompleteTree, group: LocalGroup) -> PosetVertex:
    return PosetVertex(tree, identity_element(group))


def translate(g: SymTreePair, v: PosetVertex) -> PosetVertex:
    """Left action g . [T, f] = [T, g f]."""
    return PosetVertex(v.tree, compose(g, v.element))


def height(v: PosetVertex) -> int:
    return v.tree.carets


def _check(v1: PosetVertex, v2: PosetVertex) -> None:
    if v1.group is not v2.group:
        raise GroupMismatchError("vertices over different local groups")


def _carried(w: SymTreePair, tree: CompleteTree) -> CompleteTree | None:
    """Image of ``tree`` under ``w`` if ``tree`` is a defining tree of ``w``."""
    if not refines(tree, w.domain):
        return None
    return expand_to_domain(w, tree).range


def vertex_equals(v1: PosetVertex, v2: PosetVertex) -> bool:
    _check(v1, v2)
    h = compose(inverse(v2.element), v1.element)
    image = _carried(h, v1.tree)
    return image is not None and image.leaves == v2.tree.leaves


def _lower_image(v1: PosetVertex, v2: PosetVertex) -> CompleteTree | None:
    # With w = g1^-1 g2: v1 <= v2 iff T2 is a defining tree of w and w(T2)
    # refines T1; then [T2, g2] = [w(T2), g1] is a common representative.
    w = compose(inverse(v1.element), v2.element)
    image = _carried(w, v2.tree)
    if image is None or not refines(image, v1.tree):
        return None
    return image


def leq(v1: PosetVertex, v2: PosetVertex) -> bool:
    _check(v1, v2)
    return _lower_image(v1, v2) is not None


def _is_elementary_extension(big: CompleteTree, small: CompleteTree) -> bool:
    """Every caret of ``big`` missing from ``small`` hangs directly on a leaf of ``small``."""
    small_leaves = small.leaf_set
    extra = set(big.internal_vertices()) - set(small.internal_vertices())
    return all(v in small_leaves for v in extra)


def elementary(v1: PosetVertex, v2: PosetVertex) -> bool:
    _check(v1, v2)
    image = _lower_image(v1, v2)
    return image is not None and _is_elementary_extension(image, v1.tree)


# ---------------------------------------------------------------------------
# intervals

@dataclass
class Interval:
    bottom: PosetVertex
    top: PosetVertex
    vertices: list[PosetVertex]
    added_carets: list[str]
    subsets: list[frozenset]
    order: list[list[bool]]
    boolean: bool
    problems: list[str] = field(default_factory=list)

    @property
    def gap(self) -> int:
        return len(self.added_carets)


def interval(v1: PosetVertex, v2: PosetVertex, bound: int = DEFAULT_INTERVAL_BOUND) -> Interval:
    """All z with v1 <= z <= v2, for an elementary pair, with a lattice check.

    The members are [S, g1] for the trees S between T1 and the common
    representative of v2; the Boolean structure is then re-derived from the
    general order test :func:`leq` alone.
    """
    _check(v1, v2)
    image = _lower_image(v1, v2)
    if image is None:
        raise NotComparableError("the vertices are not comparable")
    if not _is_elementary_extension(image, v1.tree):
        raise NotComparableError("the pair is comparable but not elementary")
    m = image.carets - v1.tree.carets
    if m > bound:
        raise BoundExceededError(f"interval gap {m} exceeds bound {bound}")
    g1 = v1.element
    base_internal = set(v1.tree.internal_vertices())
    added = sorted(set(image.internal_vertices()) - base_internal)
    members = [PosetVertex(s, g1) for s in subtrees_containing(image, v1.tree)]
    subsets = [frozenset(set(z.tree.internal_vertices()) - base_internal) for z in members]
    problems = []
    for z in members:
        if not (leq(v1, z) and leq(z, v2)):
            problems.append(f"member {z!r} is not between the endpoints")
    for i, j in combinations(range(len(members)), 2):
        if vertex_equals(members[i], members[j]):
            problems.append(f"members {i} and {j} coincide")
    if len(members) != 2**m:
        problems.append(f"{len(members)} members, expected {2**m}")
    order = [[leq(a, b) for b in members] for a in members]
    for i, j in product(range(len(members)), repeat=2):
        if order[i][j] != (subsets[i] <= subsets[j]):
            problems.append(f"order between members {i} and {j} differs from inclusion")
    problems += _boolean_lattice_problems(order)
    return Interval(v1, v2, members, added, subsets, order, not problems, problems)


def _boolean_lattice_problems(order: list[list[bool]]) -> list[str]:
    """Check, from the order relation alone, for a complemented distributive lattice."""
    n = len(order)
    idx = range(n)
    problems = []

    def bound_of(candidates, above):
        # the unique extremal candidate; above=True picks the least upper bound
        best = [c for c in candidates
                if all((order[c][o] if above else order[o][c]) for o in candidates)]
        return best[0] if len(best) == 1 else None

    meet = [[None] * n for _ in idx]
    join = [[None] * n for _ in idx]
    for a, b in product(idx, repeat=2):
        lower = [c for c in idx if order[c][a] and order[c][b]]
        upper = [c for c in idx if order[a][c] and order[b][c]]
        meet[a][b] = bound_of(lower, above=False)
        join[a][b] = bound_of(upper, above=True)
        if meet[a][b] is None or join[a][b] is None:
            return [f"no meet or join for members {a}, {b}"]
    for a, b, c in product(idx, repeat=3):
        if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
            problems.append(f"distributivity fails at {a}, {b}, {c}")
            break
    bottom = next((c for c in idx if all(order[c][o] for o in idx)), None)
    top = next((c for c in idx if all(order[o][c] for o in idx)), None)
    if bottom is None or top is None:
        return problems + ["missing bottom or top"]
    for a in idx:
        if not any(meet[a][b] == bottom and join[a][b] == top for b in idx):
            problems.append(f"member {a} has no complement")
            break
    return problems


# ---------------------------------------------------------------------------
# stabilizers and orbits

@dataclass
class StabilizerCount:
    count: int
    predicted: int
    all_fix: bool
    ball_checked: int = 0
    ball_outside: int = 0

    @property
    def ok(self) -> bool:
        return self.count == self.predicted and self.all_fix and self.ball_outside == 0


def vertex_stabilizer_order(v: PosetVertex, ball=None,
                            limit: int = DEFAULT_STABILIZER_LIMIT) -> StabilizerCount:
    """Enumerate the stabilizer of [T, id] directly and compare with n! |H|^n.

    Every element mapping T onto T is enumerated (leaf bijection and labels)
    and checked to fix ``v``.  Elements of the optional ``ball`` that fix ``v``
    must all appear among them.
    """
    if not v.element.is_identity():
        raise InputError("stabilizers are computed at base vertices [T, id]")
    group = v.group
    n = len(v.tree)
    predicted = math.factorial(n) * group.order**n
    if predicted > limit:
        raise BoundExceededError(f"stabilizer of size {predicted} exceeds limit {limit}")
    keys = set()
    all_fix = True
    for k in tree_pair_elements(group, v.tree, v.tree):
        k = reduce(k)
        keys.add(k.key())
        if all_fix and not vertex_equals(PosetVertex(v.tree, k), v):
            all_fix = False
    out = StabilizerCount(len(keys), predicted, all_fix)
    if ball is not None:
        for e in ball:
            if vertex_equals(translate(e, v), v):
                out.ball_checked += 1
                if e.key() not in keys:
                    out.ball_outside += 1
    return out


def order_preserving_map(src: CompleteTree, dst: CompleteTree, group: LocalGroup) -> SymTreePair:
    """The unlabeled element sending the i-th leaf of ``src`` to the i-th leaf of ``dst``."""
    if len(src) != len(dst):
        raise InputError("trees have different leaf counts")
    mapping = {a: (b, 0) for a, b in zip(src.leaves, dst.leaves)}
    return SymTreePair(group, mapping)


@dataclass
class OrbitCensus:
    height: int
    vertices: int
    orbits: int
    witnesses_verified: int


def orbit_census(group: LocalGroup, k: int, elements=None,
                 bound: int = DEFAULT_ORBIT_HEIGHT_BOUND) -> OrbitCensus:
    """Count orbits of the left action on sampled vertices of height ``k``.

    Vertices [T, g] run over all trees with ``k`` carets and the given
    elements (identity when omitted).  Two vertices are merged only after an
    explicit element carrying one to the other has been checked.
    """
    if k > bound:
        raise BoundExceededError(f"height {k} exceeds bound {bound}")
    trees = all_trees(group.arity, k)
    elements = [identity_element(group)] if elements is None else list(elements)
    verts = [PosetVertex(t, g) for t in trees for g in elements]
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    base = PosetVertex(trees[0], identity_element(group))
    verified = 0
    for i, v in enumerate(verts):
        # base -> v is g_v o (order-preserving map T0 -> T_v)
        witness = compose(v.element, order_preserving_map(base.tree, v.tree, group))
        if vertex_equals(translate(witness, base), v):
            verified += 1
            parent[find(i)] = find(0)
    orbits = len({find(i) for i in range(len(verts))})
    # vertex 0 is the base itself, so every verified vertex joins its class
    return OrbitCensus(k, len(verts), orbits, verified)


# ---------------------------------------------------------------------------
# simplicial complexes and descending links

@dataclass(frozen=True)
class DownMove:
    """Merge the leaves ``targets`` of T under one new caret.

    ``targets[j]`` is the image of the j-th child of the removed caret and
    ``labels[j]`` the local-group label (as an index) on that child.
    """

    targets: tuple[str, ...]
    labels: tuple[int, ...]

    @property
    def support(self) -> frozenset:
        return frozenset(self.targets)


def _merge_vertex(tree: CompleteTree, group: LocalGroup, moves) -> tuple[CompleteTree, SymTreePair, list[str]]:
    """A representative (Z', g) of [T, id] in which each move is a caret of Z'.

    Returns Z', g and the caret roots used for the moves (in order).
    """
    d, n = tree.arity, len(tree)
    k = len(moves)
    base = comb_tree(d, n - k * (d - 1))
    roots = list(base.leaves[:k])
    big = base
    for r in roots:
        big = expand_leaf(big, r)
    used = set()
    mapping = {}
    for r, mv in zip(roots, moves):
        for j, (t, lab) in enumerate(zip(mv.targets, mv.labels)):
            mapping[r + str(j)] = (t, lab)
            used.add(t)
    rest = [leaf for leaf in tree.leaves if leaf not in used]
    for src, dst in zip(base.leaves[k:], rest):
        mapping[src] = (dst, 0)
    return big, SymTreePair(group, mapping), roots


def lower_vertex(tree: CompleteTree, group: LocalGroup, move: DownMove) -> PosetVertex:
    """The vertex one caret below [T, id] determined by ``move``."""
    big, g, roots = _merge_vertex(tree, group, [move])
    leaves = [leaf for leaf in big.leaves if not leaf.startswith(roots[0])] + [roots[0]]
    return PosetVertex(CompleteTree(tree.arity, tuple(leaves)), g)


@dataclass
class DescendingLink:
    base: PosetVertex
    complex: SimplicialComplex
    projection: dict
    target: SimplicialComplex
    subsets: list[tuple[str, ...]]
    representatives: list[DownMove]
    lower_vertices: list[PosetVertex]
    move_count: int


def subset_complex(leaves, d: int) -> tuple[SimplicialComplex, list[tuple[str, ...]]]:
    """Complex of pairwise disjoint d-subsets of ``leaves``; vertex i is ``subsets[i]``.

    For d = 2 this is the matching complex of the complete graph on the leaves.
    """
    subsets = [tuple(c) for c in combinations(sorted(leaves), d)]
    sets = [frozenset(s) for s in subsets]
    simplices = _disjoint_families(list(range(len(subsets))), sets)
    return SimplicialComplex(range(len(subsets)), simplices, close=False), subsets


def _disjoint_families(ids, supports) -> list[frozenset]:
    """All non-empty families of ids with pairwise disjoint supports."""
    out = []

    def extend(chosen, used, start):
        for pos in range(start, len(ids)):
            i = ids[pos]
            if supports[i] & used:
                continue
            family = chosen + [i]
            out.append(frozenset(family))
            extend(family, used | supports[i], pos + 1)

    extend([], frozenset(), 0)
    return out


def descending_link(v: PosetVertex, leaf_bound: int = DEFAULT_LINK_LEAF_BOUND,
                    move_limit: int = 200_000) -> DescendingLink:
    """Descending link of a base vertex [T, id] and its projection to d-subsets.

    Vertices are the lower vertices reached by single merges, identified by
    :func:`vertex_equals`; a set of them is a simplex when their merged leaf
    sets are pairwise disjoint.  The projection sends a vertex to its merged
    leaf set, a vertex of :func:`subset_complex`.
    """
    if not v.element.is_identity():
        raise InputError("descending links are computed at base vertices [T, id]")
    tree, group = v.tree, v.group
    d, n = tree.arity, len(tree)
    if n > leaf_bound:
        raise BoundExceededError(f"{n} leaves exceeds link leaf bound {leaf_bound}")
    n_moves = math.perm(n, d) * group.order**d
    if n_moves > move_limit:
        raise BoundExceededError(f"{n_moves} merges exceeds limit {move_limit}")
    target, subsets = subset_complex(tree.leaves, d)
    subset_index = {frozenset(s): i for i, s in enumerate(subsets)}

    reps: list[DownMove] = []
    lowers: list[PosetVertex] = []
    by_subset: dict[int, list[int]] = {}
    for targets in permutations(tree.leaves, d):
        key = subset_index[frozenset(targets)]
        bucket = by_subset.setdefault(key, [])
        for labels in product(range(group.order), repeat=d):
            move = DownMove(targets, labels)
            z = lower_vertex(tree, group, move)
            # the projection is well defined, so equal vertices share a subset
            if any(vertex_equals(z, lowers[i]) for i in bucket):
                continue
            bucket.append(len(reps))
            reps.append(move)
            lowers.append(z)
    supports = [m.support for m in reps]
    simplices = _disjoint_families(list(range(len(reps))), supports)
    link = SimplicialComplex(range(len(reps)), simplices, close=False)
    projection = {i: subset_index[supports[i]] for i in range(len(reps))}
    return DescendingLink(v, link, projection, target, subsets, reps, lowers, n_moves)


def realize_simplex(link: DescendingLink, simplex) -> bool:
    """Check a link simplex against the cube it should span.

    Builds one representative (Z'', g) of the base vertex in which all the
    merges of ``simplex`` are disjoint carets, then checks that removing each
    caret alone gives the corresponding link vertex.
    """
    simplex = sorted(simplex)
    tree, group = link.base.tree, link.base.group
    moves = [link.representatives[i] for i in simplex]
    big, g, roots = _merge_vertex(tree, group, moves)
    for i, root in zip(simplex, roots):
        leaves = [leaf for leaf in big.leaves if not leaf.startswith(root)] + [root]
        face = PosetVertex(CompleteTree(tree.arity, tuple(leaves)), g)
        if not vertex_equals(face, link.lower_vertices[i]):
            return False
    return True


@dataclass
class JoinVerdict:
    ok: bool
    condition: str | None = None
    detail: str | None = None


def complete_join_check(K: SimplicialComplex, projection: dict, L: SimplicialComplex) -> JoinVerdict:
    """Test whether ``projection`` is a complete join from K onto L.

    Conditions: simplicial and surjective onto vertices and simplices of L;
    injective on each simplex of K; and over each simplex of L the preimage
    subcomplex is the join of the vertex fibres.
    """
    if not K.is_closed():
        return JoinVerdict(False, "closure", "source complex is not closed under faces")
    for v in K.vertices:
        if projection.get(v) not in set(L.vertices):
            return JoinVerdict(False, "simplicial", f"vertex {v} does not map to a vertex of L")
    fibres: dict = {x: [] for x in L.vertices}
    for v in K.vertices:
        fibres[projection[v]].append(v)
    hit = set()
    for s in K.simplices:
        image = frozenset(projection[v] for v in s)
        if len(image) != len(s):
            return JoinVerdict(False, "injective", f"simplex {sorted(s)} is folded")
        if image not in L.simplices:
            return JoinVerdict(False, "simplicial", f"simplex {sorted(s)} maps outside L")
        hit.add(image)
    for x, fib in fibres.items():
        if not fib:
            return JoinVerdict(False, "surjective", f"vertex {x} of L has an empty fibre")
    for sigma in sorted(L.simplices, key=lambda s: (len(s), sorted(s))):
        if sigma not in hit:
            return JoinVerdict(False, "surjective", f"simplex {sorted(sigma)} of L is not hit")
        verts = sorted(sigma)
        for choice in product(*(fibres[x] for x in verts)):
            if frozenset(choice) not in K.simplices:
                return JoinVerdict(False, "join",
                                   f"over {verts}: {sorted(choice)} is missing from K")
    return JoinVerdict(True)
