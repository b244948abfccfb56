import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import classical, naive_image, probe_words, signature
from symthompson.element import (
    CantorPoint,
    SymTreePair,
    act,
    bfs_ball,
    canonical_elements,
    compose,
    equals,
    expand,
    expand_to_domain,
    identity_element,
    inverse,
    iota,
    pi,
    pi_section,
    points,
    power,
    random_element,
    random_point,
    reduce,
    retract,
    tree_pair_elements,
    vd_generating_set,
)
from symthompson.errors import BallSizeLimitError, GroupMismatchError, InputError, NotALeafError
from symthompson.localgroup import mul, sym3_group, trivial_group, z2_group, z2_kernel_group
from symthompson.trees import CompleteTree, all_trees, trees_up_to

GROUPS = {
    "trivial2": lambda: trivial_group(2),
    "z2_2": lambda: z2_group(2),
    "sym3_2": lambda: sym3_group(2),
    "trivial3": lambda: trivial_group(3),
    "z2_3": lambda: z2_group(3),
    "sym3_3": lambda: sym3_group(3),
}


def el(group, *triples):
    return SymTreePair.from_pairs(group, [("" if a == "e" else a, "" if b == "e" else b, lab)
                                          for a, b, lab in triples])


@pytest.fixture(scope="module")
def z2():
    return z2_group(2)


@pytest.fixture(scope="module")
def ker():
    return z2_kernel_group(2)


# --- points ---------------------------------------------------------------

def test_point_normalization():
    assert str(CantorPoint("0", "10")) == "(01)"
    assert str(CantorPoint("1", "0")) == "1(0)"
    assert str(CantorPoint("", "0101")) == "(01)"
    assert str(CantorPoint("0111", "11")) == "0(1)"
    assert CantorPoint.parse("0(10)") == CantorPoint("", "01")
    with pytest.raises(InputError):
        CantorPoint.parse("0(2)", 2)
    with pytest.raises(InputError):
        CantorPoint("0", "")


@settings(max_examples=200, deadline=None)
@given(st.text("012", max_size=6), st.text("012", min_size=1, max_size=5))
def test_point_normalization_keeps_the_word(prefix, period):
    c = CantorPoint(prefix, period)
    raw = (prefix + period * 40)[:40]
    assert c.digits(40) == raw
    assert len(c.period) <= len(period) and len(c.prefix) <= len(prefix)


# --- expansion and reduction ----------------------------------------------

def test_expand_identity(z2):
    e = expand(identity_element(z2), "")
    assert e.pairs == (("0", "0", 0), ("1", "1", 0))


def test_expand_twisted_label(z2):
    a = z2.generator("a").index
    x = el(z2, ("e", "e", a))
    y = expand(x, "")
    assert y.pairs == (("0", "1", a), ("1", "0", a))
    words = probe_words(2)
    assert signature(x, words) == signature(y, words)
    for c in points(2, 2, 2)[:16]:
        assert act(x, c) == act(y, c)


def test_expand_commutes(z2):
    for e in canonical_elements(z2, 2):
        for l1, l2 in product(e.domain.leaves, repeat=2):
            if l1 == l2:
                continue
            a = expand(expand(e, l1), l2)
            b = expand(expand(e, l2), l1)
            assert a.same_representative(b)


def test_expand_not_a_leaf(z2):
    with pytest.raises(NotALeafError):
        expand(identity_element(z2), "0")


def test_reduce_examples(ker, z2):
    a = ker.generator("a").index
    got = reduce(el(ker, ("0", "0", a), ("1", "1", a)))
    assert got.pairs == (("", "", a),)
    b = z2.generator("a").index
    x = el(z2, ("0", "0", b), ("1", "1", 0))
    assert reduce(x).same_representative(x)
    assert reduce(identity_element(z2)).is_identity()


@pytest.mark.parametrize("name", ["z2_2", "sym3_3"])
def test_reduce_undoes_expand(name):
    g = GROUPS[name]()
    rng = random.Random(5)
    for _ in range(100):
        e = random_element(g, rng, 3)
        leaf = rng.choice(e.domain.leaves)
        assert reduce(expand(e, leaf)).same_representative(e)


def test_reduce_matches_action_oracle():
    # every representative of <= 2 carets reduces to a form with the same action
    for g in (z2_group(2), sym3_group(3)):
        words = probe_words(g.arity, 3)
        for c in range(2 if g.arity == 2 else 1):
            trees = all_trees(g.arity, c + 1)
            for t1, t2 in product(trees, repeat=2):
                for e in tree_pair_elements(g, t1, t2):
                    assert signature(reduce(e), words) == signature(e, words)


# --- composition, inverse, action ------------------------------------------

def test_classical_composition():
    g = trivial_group(2)
    A = el(g, ("0", "00", 0), ("10", "01", 0), ("11", "1", 0))
    B = el(g, ("0", "0", 0), ("10", "100", 0), ("110", "101", 0), ("111", "11", 0))
    C = el(g, ("0", "11", 0), ("10", "0", 0), ("11", "10", 0))
    fA = classical({"0": "00", "10": "01", "11": "1"})
    fB = classical({"0": "0", "10": "100", "110": "101", "111": "11"})
    fC = classical({"0": "11", "10": "0", "11": "10"})
    rng = random.Random(0)
    pts = [random_point(2, rng) for _ in range(32)]
    for (x, fx), (y, fy) in [((A, fA), (B, fB)), ((B, fB), (C, fC)), ((C, fC), (A, fA))]:
        xy = compose(x, y)
        for c in pts:
            assert act(xy, c).digits(30) == fx(fy(c.digits(60)))[:30]


def test_compose_kernel_labels(ker):
    a = ker.generator("a")
    for s, t in product(ker.elements(), repeat=2):
        assert compose(iota(s), iota(t)) == iota(mul(s, t))
    assert compose(iota(a), iota(a)).is_identity()


def test_compose_group_mismatch():
    with pytest.raises(GroupMismatchError):
        compose(identity_element(z2_group(2)), identity_element(z2_group(2)))


def test_inverse_examples(z2):
    a = z2.generator("a").index
    x = el(z2, ("e", "e", a))
    inv = inverse(x)
    assert expand(inv, "").pairs == (("0", "1", z2.inv_idx(a)), ("1", "0", z2.inv_idx(a)))
    assert inverse(identity_element(z2)).is_identity()
    rng = random.Random(1)
    for _ in range(50):
        e = random_element(z2, rng)
        assert inverse(inverse(e)).same_representative(e)
        assert compose(inverse(e), e).is_identity()


def test_act_examples(z2):
    a = z2.generator("a").index
    x = el(z2, ("0", "0", a), ("1", "1", 0))
    assert str(act(x, CantorPoint.parse("0(10)"))) == "0(01)"
    assert str(act(x, CantorPoint.parse("1(1)"))) == "(1)"
    swap = el(z2, ("0", "1", 0), ("1", "0", 0))
    assert str(act(swap, CantorPoint.parse("(0)"))) == "1(0)"
    c = CantorPoint.parse("0(10)")
    assert act(identity_element(z2), c) == c


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_act_matches_naive_evaluation(name):
    g = GROUPS[name]()
    rng = random.Random(7)
    for _ in range(60):
        e = random_element(g, rng, 4)
        for _ in range(5):
            c = random_point(g.arity, rng)
            out = act(e, c)
            assert out.digits(40) == naive_image(e, c.digits(80))[:40]
            assert len(out.period) == len(c.period)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_compose_matches_naive_evaluation(name):
    g = GROUPS[name]()
    rng = random.Random(11)
    words = probe_words(g.arity, 2)
    for _ in range(40):
        f, h = random_element(g, rng), random_element(g, rng)
        gf = compose(h, f)
        assert signature(gf, words) == tuple(naive_image(h, naive_image(f, w))[:24] for w in words)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(sorted(GROUPS)))
def test_group_axioms_property(seed, name):
    g = GROUPS[name]()
    rng = random.Random(seed)
    x, y, z = (random_element(g, rng, 3) for _ in range(3))
    assert compose(compose(x, y), z).same_representative(compose(x, compose(y, z)))
    assert compose(x, inverse(x)).is_identity()
    assert compose(identity_element(g), x).same_representative(x)


def test_equals_examples(z2):
    a = z2.generator("a").index
    rng = random.Random(3)
    e = random_element(z2, rng)
    for leaf in e.domain.leaves:
        assert equals(e, expand(e, leaf))
    gens = vd_generating_set(z2) + [iota(z2.generator("a"))]
    word = [rng.randrange(len(gens)) for _ in range(20)]

    def product_of(word):
        out = identity_element(z2)
        for i in word:
            out = compose(out, gens[i])
        return out

    assert equals(product_of(word), product_of(word))
    x = el(z2, ("0", "0", a), ("1", "1", 0))
    y = el(z2, ("0", "0", 0), ("1", "1", a))
    assert not equals(x, y)
    assert signature(x, probe_words(2)) != signature(y, probe_words(2))


def test_action_faithful_for_faithful_q(z2):
    # distinct canonical forms <=> distinct actions, on prefix <= 4, period 1
    elems = canonical_elements(z2, 2)
    pts = points(2, 4, 1)
    sigs = {tuple(act(e, c) for c in pts) for e in elems}
    assert len(sigs) == len(elems)
    assert len({e.key() for e in elems}) == len(elems)


def test_action_not_faithful_for_kernel(ker):
    a = ker.generator("a")
    x = iota(a)
    assert not x.is_identity()
    assert all(act(x, c) == c for c in points(2, 3, 2))


def test_power(z2):
    swap = el(z2, ("0", "1", 0), ("1", "0", 0))
    assert power(swap, 2).is_identity()
    assert power(swap, -1) == swap


# --- pi, section, iota, retract -------------------------------------------

def test_pi_examples(z2, ker):
    elems = canonical_elements(z2, 2)
    assert len({pi(e).key() for e in elems}) == len(elems)
    assert pi(iota(ker.generator("a"))).is_identity()
    assert pi(identity_element(z2)).is_identity()
    swap = el(ker, ("0", "1", 0), ("1", "0", 0))
    assert pi(swap).pairs == swap.pairs


@pytest.mark.parametrize("name", ["z2_2", "sym3_2", "sym3_3"])
def test_pi_homomorphism_and_section(name):
    g = GROUPS[name]()
    rng = random.Random(2)
    for _ in range(100):
        f, h = random_element(g, rng), random_element(g, rng)
        assert pi(compose(h, f)) == compose(pi(h), pi(f))
        v = random_element(g.image(), rng)
        assert pi(pi_section(v, g)) == v


def test_section_loses_kernel(ker):
    x = iota(ker.generator("a"))
    assert pi_section(pi(x), ker) != x
    assert pi_section(identity_element(ker.image()), ker).is_identity()


def test_pi_section_rejects_wrong_group(z2):
    with pytest.raises(GroupMismatchError):
        pi_section(identity_element(z2), z2)


def test_iota_and_retract():
    g = sym3_group(3)
    assert iota(g.identity()).is_identity()
    pts = points(3, 2, 2)[:32]
    for s, t in product(g.elements(), repeat=2):
        lhs, rhs = iota(mul(s, t)), compose(iota(s), iota(t))
        assert lhs == rhs
        assert all(act(lhs, c) == act(rhs, c) for c in pts)
    for h in g.elements():
        assert retract(iota(h)) == h
    assert retract(identity_element(g)) == g.identity()


def test_retract_stable_under_expansion():
    g = sym3_group(3)
    rng = random.Random(4)
    for _ in range(100):
        e = random_element(g, rng)
        assert retract(e) == retract(expand(e, e.domain.leftmost_leaf()))
        other = expand_to_domain(e, e.domain)
        assert retract(other) == retract(e)


def test_retraction_laws_left_to_right():
    for g in (z2_group(2), sym3_group(2), sym3_group(3)):
        rng = random.Random(9)
        unlabeled = vd_generating_set(g)
        for _ in range(150):
            x = random_element(g, rng)
            s = g.element(rng.randrange(g.order))
            assert retract(compose(iota(s), x)) in (retract(x), mul(s, retract(x)))
            u = rng.choice(unlabeled)
            assert retract(compose(u, x)) == retract(x)


def test_retraction_laws_right_to_left_fail():
    # read as g o iota(s) and g o u the laws have counterexamples
    g = z2_group(2)
    a = g.generator("a")
    swap = el(g, ("0", "1", 0), ("1", "0", 0))
    x = iota(a)
    assert retract(compose(x, swap)) != retract(x)
    s3 = sym3_group(3)
    rng = random.Random(0)
    for _ in range(2000):
        x = random_element(s3, rng, 3)
        s = s3.element(rng.randrange(s3.order))
        if retract(compose(x, iota(s))) not in (retract(x), mul(retract(x), s)):
            break
    else:
        pytest.fail("no counterexample found")


# --- generating set and balls ----------------------------------------------

def test_vd_generating_set_d2():
    g = trivial_group(2)
    gens = vd_generating_set(g)
    keys = {e.key() for e in gens}
    assert len(gens) == 21
    assert all(not e.is_identity() and e.is_unlabeled() for e in gens)
    assert all(inverse(e).key() in keys for e in gens)
    assert all(retract(e) == g.identity() for e in gens)
    swap = el(g, ("0", "1", 0), ("1", "0", 0))
    assert swap.key() in keys
    # independent count: distinct non-identity actions of unlabeled <= 2-caret pairs
    words = probe_words(2, 3)
    ident = signature(identity_element(g), words)
    sigs = set()
    for t1, t2 in product(trees_up_to(2, 2), repeat=2):
        if len(t1) == len(t2):
            for e in tree_pair_elements(g, t1, t2, labels=False):
                sigs.add(signature(e, words))
    sigs.discard(ident)
    assert len(sigs) == 21


def test_bfs_ball_small():
    g = z2_group(2)
    gens = vd_generating_set(g)
    ball0 = bfs_ball(gens, 0)
    assert list(ball0) == [identity_element(g).key()]
    ball1 = bfs_ball(gens, 1)
    assert set(ball1) == {e.key() for e in gens} | {identity_element(g).key()}
    targets = {e.key() for e in canonical_elements(g, 2, labels=False)}
    ball = bfs_ball(gens, 1)
    assert targets <= set(ball)
    with pytest.raises(BallSizeLimitError):
        bfs_ball(gens, 3, limit=100)
    assert len(bfs_ball(gens, 3, limit=100, truncate=True)) == 100


def test_bfs_ball_deterministic():
    g = z2_group(2)
    gens = vd_generating_set(g) + [iota(g.generator("a"))]
    assert list(bfs_ball(gens, 2)) == list(bfs_ball(gens, 2))


def test_generation_radius_z2():
    g = z2_group(2)
    targets = canonical_elements(g, 1)
    assert len(targets) == 8
    gens = [iota(g.generator("a"))] + vd_generating_set(g)
    ball = bfs_ball(gens, 4)
    assert all(t.key() in ball for t in targets)


def test_canonical_elements_counts():
    # reduced forms of <= 1 caret, d = 2: 1 + 1 unlabeled; with Z/2 labels 2 + 6
    assert len(canonical_elements(trivial_group(2), 1)) == 2
    assert len(canonical_elements(z2_group(2), 1)) == 8


def test_invalid_elements():
    g = z2_group(2)
    with pytest.raises(InputError):
        SymTreePair(g, {"0": ("0", 0), "1": ("0", 0)})
    with pytest.raises(InputError):
        SymTreePair(g, {"0": ("0", 0)})
    with pytest.raises(InputError):
        SymTreePair(g, {"0": ("0", 5), "1": ("1", 0)})
    assert CompleteTree(2, ("0", "1")) == el(g, ("0", "0", 0), ("1", "1", 0)).domain
