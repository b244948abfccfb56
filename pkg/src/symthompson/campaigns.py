"""Seeded property campaigns and the JSON reports behind the CLI.

Every report is a plain dict.  Anything that depends on the clock lives under
the ``timing`` key, which :func:`strip_timing` removes before comparing runs.
All randomness comes from one ``random.Random(seed)`` per campaign.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass
from itertools import combinations, product

from .element import (
    DEFAULT_BALL_LIMIT,
    CantorPoint,
    SymTreePair,
    act,
    bfs_ball,
    canonical_elements,
    compose,
    expand,
    format_element,
    identity_element,
    inverse,
    iota,
    pi,
    pi_section,
    points,
    random_element,
    random_point,
    random_tree,
    reduce,
    retract,
    vd_generating_set,
)
from .homology import SimplicialComplex, reduced_homology
from .localgroup import LocalGroup, mul
from .steinfarley import (
    DEFAULT_LINK_LEAF_BOUND,
    PosetVertex,
    base_vertex,
    complete_join_check,
    descending_link,
    elementary,
    interval,
    orbit_census,
    vertex_stabilizer_order,
)
from .trees import CompleteTree, expand_leaf, format_tree, trees_up_to


def strip_timing(report):
    """Copy of ``report`` without any ``timing`` entries, at any depth."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "timing"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


def dumps(report) -> str:
    return json.dumps(report, indent=2) + "\n"


def _text(e: SymTreePair) -> str:
    return format_element(e, "")


# ---------------------------------------------------------------------------
# sampling

class Sampler:
    """Random elements: half from random tree pairs, half as short generator words."""

    def __init__(self, group: LocalGroup, rng: random.Random, max_carets: int = 3, max_word: int = 4):
        self.group = group
        self.rng = rng
        self.max_carets = max_carets
        self.max_word = max_word
        self.unlabeled = vd_generating_set(group)
        self.gens = [iota(h) for h in group.generator_elements()] + self.unlabeled

    def _word(self, gens) -> SymTreePair:
        e = identity_element(self.group)
        for _ in range(self.rng.randint(1, self.max_word)):
            e = compose(e, self.rng.choice(gens))
        return e

    def element(self) -> SymTreePair:
        if self.rng.random() < 0.5:
            return random_element(self.group, self.rng, self.max_carets)
        return self._word(self.gens)

    def unlabeled_element(self) -> SymTreePair:
        if self.rng.random() < 0.5:
            return random_element(self.group, self.rng, self.max_carets, unlabeled=True)
        return self._word(self.unlabeled)

    def local(self):
        return self.group.element(self.rng.randrange(self.group.order))

    def point(self) -> CantorPoint:
        return random_point(self.group.arity, self.rng)


# ---------------------------------------------------------------------------
# the element axioms

@dataclass
class AxiomConfig:
    triples: int = 1000
    confluence: int = 500
    expansions: int = 5
    action_pairs: int = 200
    points_per_pair: int = 16
    pi_pairs: int = 500
    sections: int = 200
    retraction: int = 500
    faithful_carets: int | None = None


class _Property:
    def __init__(self, name: str):
        self.name = name
        self.samples = 0
        self.counterexample = None
        self.note = None
        self.started = time.perf_counter()

    def check(self, ok: bool, witness=None):
        self.samples += 1
        if not ok and self.counterexample is None:
            self.counterexample = witness() if callable(witness) else witness

    def result(self) -> dict:
        out = {"name": self.name, "samples": self.samples,
               "passed": self.counterexample is None}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        out["timing"] = {"seconds": round(time.perf_counter() - self.started, 3)}
        return out


def _elements_witness(**named):
    return lambda: {k: _text(v) if isinstance(v, SymTreePair) else str(v) for k, v in named.items()}


def check_associativity(sampler: Sampler, n: int) -> list[dict]:
    assoc = _Property("associativity")
    inv = _Property("inverse law")
    ident = _Property("identity law")
    one = identity_element(sampler.group)
    for _ in range(n):
        x, y, z = sampler.element(), sampler.element(), sampler.element()
        lhs = compose(compose(x, y), z)
        rhs = compose(x, compose(y, z))
        assoc.check(lhs.same_representative(rhs), _elements_witness(x=x, y=y, z=z))
        xi = inverse(x)
        inv.check(compose(x, xi).same_representative(one) and compose(xi, x).same_representative(one),
                  _elements_witness(x=x))
        ident.check(compose(one, x).same_representative(x.canonical())
                    and compose(x, one).same_representative(x.canonical()), _elements_witness(x=x))
    return [assoc.result(), inv.result(), ident.result()]


def check_confluence(sampler: Sampler, n: int, steps: int = 5) -> list[dict]:
    prop = _Property("reduction confluence")
    rng = sampler.rng
    for _ in range(n):
        e = sampler.element()
        canon = reduce(e)
        results = []
        for _ in range(2):
            f = e
            for _ in range(steps):
                f = expand(f, rng.choice(f.domain.leaves))
            results.append(reduce(f))
        prop.check(all(r.same_representative(canon) for r in results), _elements_witness(e=e))
    return [prop.result()]


def check_action(sampler: Sampler, pairs: int, per_pair: int) -> list[dict]:
    hom = _Property("action homomorphism")
    period = _Property("period length preserved")
    for _ in range(pairs):
        f, g = sampler.element(), sampler.element()
        gf = compose(g, f)
        for _ in range(per_pair):
            c = sampler.point()
            fc = act(f, c)
            hom.check(act(gf, c) == act(g, fc), _elements_witness(f=f, g=g, point=c))
            period.check(len(fc.period) == len(c.period), _elements_witness(f=f, point=c))
    return [hom.result(), period.result()]


def check_faithfulness(group: LocalGroup, max_carets: int | None = None) -> list[dict]:
    """Distinct canonical forms act differently on a finite point set.

    Only meaningful when q is injective; otherwise the property is skipped.
    """
    prop = _Property("action faithfulness")
    if not group.is_faithful():
        prop.note = "skipped: q is not injective, so labels in its kernel act trivially"
        return [prop.result()]
    if max_carets is None:
        max_carets = 2 if group.arity == 2 else 1
    elems = canonical_elements(group, max_carets)
    depth = max(e.domain.depth for e in elems)
    pts = points(group.arity, 2 * depth, 1)
    seen: dict[tuple, SymTreePair] = {}
    for e in elems:
        sig = tuple(act(e, c) for c in pts)
        other = seen.get(sig)
        prop.check(other is None, _elements_witness(first=other, second=e) if other else None)
        seen.setdefault(sig, e)
    prop.note = f"{len(elems)} elements, {len(pts)} points"
    return [prop.result()]


def check_pi(sampler: Sampler, pairs: int, sections: int) -> list[dict]:
    hom = _Property("pi homomorphism")
    sec = _Property("pi after section is identity")
    group = sampler.group
    for _ in range(pairs):
        f, g = sampler.element(), sampler.element()
        hom.check(pi(compose(g, f)).same_representative(compose(pi(g), pi(f))),
                  _elements_witness(f=f, g=g))
    image = group.image()
    for _ in range(sections):
        v = random_element(image, sampler.rng, sampler.max_carets)
        sec.check(pi(pi_section(v, group)).same_representative(v), _elements_witness(v=v))
    return [hom.result(), sec.result()]


def check_iota(group: LocalGroup) -> list[dict]:
    hom = _Property("iota homomorphism")
    ret = _Property("retract after iota is identity")
    pts = points(group.arity, 3, 2)[:32]
    for s, t in product(group.elements(), repeat=2):
        lhs, rhs = iota(mul(s, t)), compose(iota(s), iota(t))
        same = lhs.same_representative(rhs) and all(act(lhs, c) == act(rhs, c) for c in pts)
        hom.check(same, _elements_witness(s=s, t=t))
    for h in group.elements():
        ret.check(retract(iota(h)) == h, _elements_witness(h=h))
    return [hom.result(), ret.result()]


def check_retraction(sampler: Sampler, n: int) -> list[dict]:
    """Both laws with products read left to right: g.x means "g, then x"."""
    law1 = _Property("retraction law for iota")
    law2 = _Property("retraction law for unlabeled")
    for _ in range(n):
        g, s = sampler.element(), sampler.local()
        r = retract(g)
        got = retract(compose(iota(s), g))
        law1.check(got in (r, mul(s, r)), _elements_witness(g=g, s=s))
    for _ in range(n):
        g, u = sampler.element(), sampler.unlabeled_element()
        law2.check(retract(compose(u, g)) == retract(g), _elements_witness(g=g, u=u))
    return [law1.result(), law2.result()]


def axioms_report(group: LocalGroup, seed: int = 0, config: AxiomConfig | None = None) -> dict:
    cfg = config or AxiomConfig()
    start = time.perf_counter()
    rng = random.Random(seed)
    sampler = Sampler(group, rng)
    props = []
    props += check_associativity(sampler, cfg.triples)
    props += check_confluence(sampler, cfg.confluence, cfg.expansions)
    props += check_action(sampler, cfg.action_pairs, cfg.points_per_pair)
    props += check_faithfulness(group, cfg.faithful_carets)
    props += check_pi(sampler, cfg.pi_pairs, cfg.sections)
    props += check_iota(group)
    props += check_retraction(sampler, cfg.retraction)
    return {
        "command": "axioms",
        "group": group.name,
        "d": group.arity,
        "H_order": group.order,
        "seed": seed,
        "config": asdict(cfg),
        "properties": props,
        "ok": all(p["passed"] for p in props),
        "timing": {"wall_time_s": round(time.perf_counter() - start, 3)},
    }


# ---------------------------------------------------------------------------
# generation

def generate_report(group: LocalGroup, radius: int = 4, target_carets: int = 1,
                    limit: int = DEFAULT_BALL_LIMIT, truncate: bool = False) -> dict:
    """Search the ball over iota(generators) and the unlabeled generating set."""
    start = time.perf_counter()
    targets = canonical_elements(group, target_carets)
    wanted = {e.key() for e in targets}
    gens = [iota(h) for h in group.generator_elements()] + vd_generating_set(group)
    ball = bfs_ball(gens, radius, limit=limit, group=group,
                    stop_when=lambda b: wanted <= b.keys(), truncate=truncate)
    truncated = len(ball) >= limit
    found = []
    for e in targets:
        hit = ball.get(e.key())
        found.append({"element": _text(e), "radius": None if hit is None else hit[1]})
    radii = [f["radius"] for f in found if f["radius"] is not None]
    return {
        "command": "generate-check",
        "group": group.name,
        "d": group.arity,
        "H_order": group.order,
        "generators": len(gens),
        "radius_bound": radius,
        "target_carets": target_carets,
        "targets": len(targets),
        "reached": len(radii),
        "max_radius": max(radii) if radii else None,
        "ball_size": len(ball),
        "truncated": truncated,
        "by_target": found,
        "ok": len(radii) == len(targets),
        "timing": {"wall_time_s": round(time.perf_counter() - start, 3)},
    }


# ---------------------------------------------------------------------------
# descending links

def dlk_report(group: LocalGroup, tree: CompleteTree, leaf_bound: int = DEFAULT_LINK_LEAF_BOUND,
               homology: bool = True) -> dict:
    start = time.perf_counter()
    link = descending_link(base_vertex(tree, group), leaf_bound=leaf_bound)
    verdict = complete_join_check(link.complex, link.projection, link.target)
    fibres: dict[int, int] = {}
    for x in link.projection.values():
        fibres[x] = fibres.get(x, 0) + 1
    report = {
        "command": "dlk",
        "group": group.name,
        "d": tree.arity,
        "n": len(tree),
        "tree": format_tree(tree),
        "H_order": group.order,
        "vertex_count": len(link.complex.vertices),
        "simplex_counts": link.complex.counts(),
        "fibre_sizes": sorted(set(fibres.values())),
        "complete_join": {"ok": verdict.ok, "condition": verdict.condition, "detail": verdict.detail},
    }
    ok = verdict.ok
    if homology:
        prof = reduced_homology(link.complex)
        tprof = reduced_homology(link.target)
        report.update({
            "betti": prof.betti,
            "torsion": prof.torsion,
            "euler_characteristic": prof.euler_characteristic,
            "connectivity": prof.connectivity(),
            "rank_paths_agree": prof.rational_ranks_agree,
            "boundary_squares_zero": prof.boundary_squares_zero,
            "target": {
                "vertex_count": len(link.target.vertices),
                "simplex_counts": tprof.simplex_counts,
                "betti": tprof.betti,
                "torsion": tprof.torsion,
                "components": tprof.components,
                "connectivity": tprof.connectivity(),
            },
        })
        ok = ok and prof.rational_ranks_agree and prof.boundary_squares_zero
    report["ok"] = ok
    report["timing"] = {"wall_time_s": round(time.perf_counter() - start, 3)}
    return report


def homology_report(K: SimplicialComplex) -> dict:
    start = time.perf_counter()
    prof = reduced_homology(K)
    out = {"command": "homology"}
    out.update(prof.to_dict())
    out["connectivity"] = prof.connectivity()
    out["timing"] = {"wall_time_s": round(time.perf_counter() - start, 3)}
    return out


# ---------------------------------------------------------------------------
# intervals

def _interval_entry(result) -> dict:
    return {
        "bottom": format_tree(result.bottom.tree),
        "top": format_tree(result.top.tree),
        "gap": result.gap,
        "size": len(result.vertices),
        "boolean": result.boolean,
        "problems": result.problems,
    }


def interval_report(group: LocalGroup, tree: CompleteTree, caret_leaves) -> dict:
    """The interval from [T, id] to [T with a caret on each given leaf, id]."""
    top = tree
    for leaf in caret_leaves:
        top = expand_leaf(top, leaf)
    res = interval(base_vertex(tree, group), base_vertex(top, group))
    entry = _interval_entry(res)
    entry["members"] = [format_tree(z.tree) for z in res.vertices]
    return {"command": "interval", "group": group.name, "d": group.arity,
            "H_order": group.order, "intervals": [entry], "ok": res.boolean}


def _twist(group: LocalGroup, tree: CompleteTree, rng: random.Random) -> SymTreePair:
    """A random representative with domain exactly ``tree``."""
    targets = list(random_tree(group.arity, tree.carets, rng).leaves)
    rng.shuffle(targets)
    mapping = {a: (b, rng.randrange(group.order)) for a, b in zip(tree.leaves, targets)}
    return SymTreePair(group, mapping)


def interval_campaign(group: LocalGroup, max_gap: int = 3, max_base_carets: int = 3,
                      seed: int = 0) -> dict:
    """Every elementary interval up to translation, with base of bounded size.

    Up to the left action an elementary pair is [T, id] <= [S, id] where S adds
    one caret on each of m distinct leaves of T.  Each pair is also checked in
    a translated form [T, g] <= [S, g] with the top written through a different
    representative [k(S), g k^-1].
    """
    start = time.perf_counter()
    rng = random.Random(seed)
    entries = []
    failures = 0
    for tree in trees_up_to(group.arity, max_base_carets):
        for m in range(min(max_gap, len(tree)) + 1):
            for leaves in combinations(tree.leaves, m):
                top = tree
                for leaf in leaves:
                    top = expand_leaf(top, leaf)
                g = random_element(group, rng, 2)
                k = _twist(group, top, rng)
                pairs = [
                    (base_vertex(tree, group), base_vertex(top, group)),
                    (PosetVertex(tree, g), PosetVertex(k.range, compose(g, inverse(k)))),
                ]
                for v1, v2 in pairs:
                    res = interval(v1, v2)
                    ok = res.boolean and len(res.vertices) == 2**m and elementary(v1, v2)
                    failures += not ok
                    entry = _interval_entry(res)
                    entry["translated"] = not v1.element.is_identity()
                    entries.append(entry)
    gaps = {}
    for e in entries:
        gaps[e["gap"]] = gaps.get(e["gap"], 0) + 1
    return {
        "command": "interval",
        "group": group.name,
        "d": group.arity,
        "H_order": group.order,
        "seed": seed,
        "max_gap": max_gap,
        "count": len(entries),
        "count_by_gap": {str(k): gaps[k] for k in sorted(gaps)},
        "failures": failures,
        "intervals": entries,
        "ok": failures == 0,
        "timing": {"wall_time_s": round(time.perf_counter() - start, 3)},
    }


# ---------------------------------------------------------------------------
# stabilizers and orbits

def stabilizer_report(group: LocalGroup, trees, ball_radius: int = 0) -> dict:
    """Stabilizer orders of [T, id] for the given trees, against n! |H|^n.

    With ``ball_radius > 0`` the elements of that ball which fix a vertex are
    also checked to lie in the enumerated stabilizer.
    """
    start = time.perf_counter()
    ball = None
    if ball_radius > 0:
        gens = [iota(h) for h in group.generator_elements()] + vd_generating_set(group)
        ball = [e for e, _ in bfs_ball(gens, ball_radius, group=group).values()]
    rows = []
    for tree in trees:
        res = vertex_stabilizer_order(base_vertex(tree, group), ball)
        row = {"tree": format_tree(tree), "n": len(tree), "count": res.count,
               "predicted": res.predicted, "all_fix": res.all_fix, "ok": res.ok}
        if ball is not None:
            row["ball_fixing"] = res.ball_checked
            row["ball_outside"] = res.ball_outside
        rows.append(row)
    return {
        "command": "stabilizer",
        "group": group.name,
        "d": group.arity,
        "H_order": group.order,
        "ball_radius": ball_radius,
        "vertices": rows,
        "ok": all(r["ok"] for r in rows),
        "timing": {"wall_time_s": round(time.perf_counter() - start, 3)},
    }


def trees_with_leaves(d: int, max_leaves: int) -> list[CompleteTree]:
    return [t for t in trees_up_to(d, (max_leaves - 1) // (d - 1))]


def orbits_report(group: LocalGroup, max_height: int = 3, samples: int = 3, seed: int = 0) -> dict:
    """Orbit counts at each height, over the identity and a few random elements."""
    start = time.perf_counter()
    rng = random.Random(seed)
    elements = [identity_element(group)] + [random_element(group, rng, 2) for _ in range(samples)]
    rows = []
    for k in range(max_height + 1):
        census = orbit_census(group, k, elements)
        rows.append({"height": k, "vertices": census.vertices, "orbits": census.orbits,
                     "witnesses_verified": census.witnesses_verified})
    return {
        "command": "orbits",
        "group": group.name,
        "d": group.arity,
        "H_order": group.order,
        "seed": seed,
        "elements": [_text(e) for e in elements],
        "heights": rows,
        "ok": all(r["orbits"] == 1 for r in rows),
        "timing": {"wall_time_s": round(time.perf_counter() - start, 3)},
    }
