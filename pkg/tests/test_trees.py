from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symthompson.element import CantorPoint, points
from symthompson.errors import (
    ArityMismatchError,
    DepthLimitError,
    InputError,
    InvalidArityError,
    NotALeafError,
    UnderspecifiedPointError,
)
from symthompson.trees import (
    CompleteTree,
    all_trees,
    comb_tree,
    common_refinement,
    depth_limit,
    expand_leaf,
    format_tree,
    nearest_leaf,
    parse_tree,
    refines,
    subtrees_containing,
    trees_up_to,
    trivial_tree,
    words,
)


def T(d, *leaves):
    return CompleteTree(d, tuple("" if x == "e" else x for x in leaves))


# oracle: a word w lies below the tree iff some leaf is a prefix of it
def covers(tree, word):
    return sum(word.startswith(leaf) for leaf in tree.leaves)


def test_trivial_tree():
    for d in (2, 3):
        t = trivial_tree(d)
        assert t.leaves == ("",) and t.carets == 0
    assert expand_leaf(trivial_tree(2), "").leaves == ("0", "1")


def test_trivial_tree_bad_arity():
    with pytest.raises(InvalidArityError):
        trivial_tree(1)
    with pytest.raises(InvalidArityError):
        trivial_tree(11)


def test_expand_leaf_examples():
    assert expand_leaf(T(2, "0", "1"), "1").leaves == ("0", "10", "11")
    assert expand_leaf(T(3, "e"), "").leaves == ("0", "1", "2")
    t = expand_leaf(T(2, "0", "10", "11"), "10")
    assert t.leaves == ("0", "100", "101", "11")
    assert len(t) == 1 + t.carets * (2 - 1)


def test_expand_leaf_errors():
    with pytest.raises(NotALeafError):
        expand_leaf(T(2, "0", "1"), "")
    with depth_limit(2):
        t = T(2, "0", "10", "11")
        with pytest.raises(DepthLimitError):
            expand_leaf(t, "10")


def test_invalid_trees_rejected():
    with pytest.raises(InputError):
        T(2, "0")  # not complete
    with pytest.raises(InputError):
        T(2, "0", "01", "1")  # prefix
    with pytest.raises(InputError):
        T(2, "0", "2")  # digit


def test_refines_examples():
    assert refines(T(2, "0", "10", "11"), T(2, "0", "1"))
    t = T(2, "00", "01", "1")
    assert refines(t, t)
    assert not refines(T(2, "0", "1"), T(2, "0", "10", "11"))
    with pytest.raises(ArityMismatchError):
        refines(T(2, "0", "1"), T(3, "0", "1", "2"))


def test_common_refinement_examples():
    a = T(2, "0", "1")
    assert common_refinement(a, a) == a
    got = common_refinement(T(2, "0", "10", "11"), T(2, "00", "01", "1"))
    assert got.leaves == ("00", "01", "10", "11")
    t = T(2, "00", "01", "1")
    assert common_refinement(t, trivial_tree(2)) == t


@pytest.mark.parametrize("d", [2, 3])
def test_common_refinement_is_unique_minimum(d):
    trees = trees_up_to(d, 3)
    for a, b in product(trees, repeat=2):
        c = common_refinement(a, b)
        assert refines(c, a) and refines(c, b)
        uppers = [t for t in trees if refines(t, a) and refines(t, b)]
        assert all(refines(t, c) for t in uppers)
        if c in trees:
            assert c in uppers


@pytest.mark.parametrize("d", [2, 3])
def test_common_refinement_laws(d):
    trees = trees_up_to(d, 3 if d == 2 else 2)
    for a in trees:
        assert common_refinement(a, a) == a
        for b in trees:
            ab = common_refinement(a, b)
            assert ab == common_refinement(b, a)
            for c in trees:
                assert common_refinement(ab, c) == common_refinement(a, common_refinement(b, c))


@pytest.mark.parametrize("d", [2, 3])
def test_refines_partial_order(d):
    trees = trees_up_to(d, 3 if d == 2 else 2)
    for a in trees:
        assert refines(a, a)
        for b in trees:
            if refines(a, b) and refines(b, a):
                assert a == b
            for c in trees:
                if refines(a, b) and refines(b, c):
                    assert refines(a, c)


@pytest.mark.parametrize("d", [2, 3])
def test_trees_are_prefix_codes(d):
    # every word of length = depth is covered by exactly one leaf
    for t in trees_up_to(d, 3):
        assert len(t) == 1 + t.carets * (d - 1)
        for w in words(d, t.depth):
            assert covers(t, w) == 1


def test_nearest_leaf_examples():
    assert nearest_leaf(T(2, "0", "10", "11"), CantorPoint("", "10")) == "10"
    assert nearest_leaf(trivial_tree(2), CantorPoint("0", "1")) == ""
    assert nearest_leaf(T(2, "00", "01", "1"), CantorPoint("0", "1")) == "01"
    assert nearest_leaf(T(2, "0", "10", "11"), "1011") == "10"
    with pytest.raises(UnderspecifiedPointError):
        nearest_leaf(T(2, "0", "10", "11"), "1")


def test_nearest_leaf_exhaustive():
    trees = trees_up_to(2, 4)
    pts = [CantorPoint(p, q) for p in ["".join(w) for k in range(9) for w in product("01", repeat=k)]
           for q in ("0", "1")]
    for t in trees:
        for c in pts:
            leaf = nearest_leaf(t, c)
            assert leaf in t.leaf_set
            assert c.digits(len(leaf)) == leaf


def test_subtrees_containing():
    big = T(2, "00", "01", "10", "11")
    small = trivial_tree(2)
    got = subtrees_containing(big, small)
    assert len(got) == 5
    assert all(refines(big, s) and refines(s, small) for s in got)
    assert len(subtrees_containing(big, T(2, "0", "1"))) == 4


def test_all_trees_counts():
    # Fuss-Catalan numbers
    assert [len(all_trees(2, c)) for c in range(5)] == [1, 1, 2, 5, 14]
    assert [len(all_trees(3, c)) for c in range(4)] == [1, 1, 3, 12]


def test_comb_tree():
    assert comb_tree(2, 4).leaves == ("0", "10", "110", "111")
    with pytest.raises(InputError):
        comb_tree(3, 4)


def test_text_round_trip():
    for t in trees_up_to(3, 2):
        assert parse_tree(3, format_tree(t)) == t
    assert format_tree(trivial_tree(2)) == "e"
    with pytest.raises(InputError):
        parse_tree(2, "0 0 1")
    with pytest.raises(InputError):
        parse_tree(2, "")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 50), max_size=8), st.sampled_from([2, 3, 4]))
def test_random_expansions_stay_complete(choices, d):
    t = trivial_tree(d)
    for k in choices:
        t = expand_leaf(t, t.leaves[k % len(t)])
        assert len(t) == 1 + t.carets * (d - 1)
    # Kraft equality, recomputed with fractions
    from fractions import Fraction
    assert sum(Fraction(1, d ** len(x)) for x in t.leaves) == 1


def test_points_helper_distinct():
    pts = points(2, 2, 2)
    assert len(pts) == len(set(pts))
