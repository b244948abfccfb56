"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 input error, 3 resource bound
exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import campaigns
from .element import (
    DEFAULT_BALL_LIMIT,
    act,
    compose,
    equals,
    inverse,
    pi,
    pi_section,
    reduce,
    retract,
)
from .errors import BoundExceededError, GroupMismatchError, InputError, SymThompsonError
from .homology import InternalError, parse_complex
from .steinfarley import DEFAULT_LINK_LEAF_BOUND
from .textio import GroupCache, parse_point, print_element, read_element
from .trees import comb_tree, depth_limit, parse_tree

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class Run:
    """Per-invocation state: parsed options, the group cache and the output sink."""

    def __init__(self, args):
        self.args = args
        self.cache = GroupCache()
        self.out_dir = Path(args.out).resolve().parent if args.out else Path.cwd()
        self.chunks: list[str] = []

    def group(self):
        return self.cache.get(self.args.group or "stock:trivial:2")

    def element(self, path, fallback=None):
        if fallback is None and self.args.group:
            fallback = self.group()
        e, ref = read_element(path, fallback, self.cache)
        if ref is None:
            ref = self.args.group
            base = Path.cwd()
        else:
            base = Path(path).resolve().parent
        return e, _relocate(ref, base, self.out_dir)

    def emit(self, text: str):
        self.chunks.append(text)


def _relocate(ref, base: Path, out_dir: Path):
    """Rewrite a group reference read relative to ``base`` so it works from ``out_dir``."""
    if ref is None or ref.startswith("stock:"):
        return ref
    if ref.startswith("image:"):
        return "image:" + _relocate(ref[len("image:"):], base, out_dir)
    path = Path(ref)
    if not path.is_absolute():
        path = base / path
    return os.path.relpath(path.resolve(), out_dir)


def _need_same(items):
    (first, ref1), rest = items[0], items[1:]
    for e, ref in rest:
        if e.group is not first.group:
            raise GroupMismatchError(f"group {ref1} differs from group {ref}")


# element commands

def cmd_compose(run: Run) -> int:
    items = [run.element(p) for p in run.args.elements]
    _need_same(items)
    result = items[-1][0]
    for e, _ in reversed(items[:-1]):
        result = compose(e, result)
    run.emit(print_element(result, items[0][1]))
    return EXIT_OK


def cmd_invert(run: Run) -> int:
    e, ref = run.element(run.args.element)
    run.emit(print_element(inverse(e), ref))
    return EXIT_OK


def cmd_reduce(run: Run) -> int:
    e, ref = run.element(run.args.element)
    run.emit(print_element(reduce(e), ref))
    return EXIT_OK


def cmd_equals(run: Run) -> int:
    items = [run.element(run.args.first), run.element(run.args.second)]
    _need_same(items)
    run.emit("equal\n" if equals(items[0][0], items[1][0]) else "not equal\n")
    return EXIT_OK


def cmd_act(run: Run) -> int:
    e, _ = run.element(run.args.element)
    point = parse_point(run.args.point, e.arity)
    run.emit(f"{act(e, point)}\n")
    return EXIT_OK


def cmd_pi(run: Run) -> int:
    e, ref = run.element(run.args.element)
    run.emit(print_element(pi(e), None if ref is None else f"image:{ref}"))
    return EXIT_OK


def cmd_section(run: Run) -> int:
    fallback = run.group().image() if run.args.group else None
    e, ref = run.element(run.args.element, fallback)
    if ref is not None and ref.startswith("image:"):
        base_ref = ref[len("image:"):]
        group = run.cache.get(base_ref, run.out_dir)
    elif ref is not None and fallback is not None and e.group is fallback:
        base_ref, group = ref, run.group()
    else:
        raise InputError("section needs an element over image:<group> or --group")
    run.emit(print_element(pi_section(e, group), base_ref))
    return EXIT_OK


def cmd_retract(run: Run) -> int:
    e, _ = run.element(run.args.element)
    h = retract(e)
    run.emit(f"{e.group.word_of(h.index)}\n")
    return EXIT_OK


# campaigns

def _report(run: Run, report: dict) -> int:
    run.emit(campaigns.dumps(report))
    return EXIT_OK if report.get("ok", True) else EXIT_FAIL


def cmd_axioms(run: Run) -> int:
    a = run.args
    cfg = campaigns.AxiomConfig(triples=a.triples, confluence=a.confluence,
                                action_pairs=a.action_pairs, pi_pairs=a.pi_pairs,
                                sections=a.sections, retraction=a.retraction)
    return _report(run, campaigns.axioms_report(run.group(), a.seed, cfg))


def cmd_generate_check(run: Run) -> int:
    a = run.args
    report = campaigns.generate_report(run.group(), a.radius, a.target_carets,
                                       limit=a.ball_limit, truncate=a.report_only)
    code = _report(run, report)
    return EXIT_OK if a.report_only else code


def _tree_arg(run: Run, d: int):
    a = run.args
    if a.tree is not None:
        return parse_tree(d, a.tree)
    return comb_tree(d, a.leaves)


def cmd_dlk(run: Run) -> int:
    group = run.group()
    tree = _tree_arg(run, group.arity)
    return _report(run, campaigns.dlk_report(group, tree, run.args.leaf_bound,
                                             homology=not run.args.no_homology))


def cmd_interval(run: Run) -> int:
    a = run.args
    group = run.group()
    if a.tree is not None:
        leaves = [("" if w == "e" else w) for w in (a.carets or "").split()]
        report = campaigns.interval_report(group, parse_tree(group.arity, a.tree), leaves)
    else:
        report = campaigns.interval_campaign(group, a.max_gap, a.max_base_carets, a.seed)
    return _report(run, report)


def cmd_stabilizer(run: Run) -> int:
    a = run.args
    group = run.group()
    if a.tree is not None:
        trees = [parse_tree(group.arity, a.tree)]
    else:
        trees = campaigns.trees_with_leaves(group.arity, a.max_leaves)
    return _report(run, campaigns.stabilizer_report(group, trees, a.ball_radius))


def cmd_orbits(run: Run) -> int:
    a = run.args
    return _report(run, campaigns.orbits_report(run.group(), a.max_height, a.samples, a.seed))


def cmd_homology(run: Run) -> int:
    try:
        text = Path(run.args.complex).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {run.args.complex}: {exc.strerror}") from None
    return _report(run, campaigns.homology_report(parse_complex(text)))


# argument parsing

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--group", metavar="FILE",
                   help="group definition file, or stock:<name>:<d> (trivial, z2, z2ker, sym3)")
    p.add_argument("--seed", type=int, default=0, help="seed for every randomized step")
    p.add_argument("--depth-limit", type=int, default=64, metavar="N")
    p.add_argument("--ball-limit", type=int, default=DEFAULT_BALL_LIMIT, metavar="N")
    p.add_argument("--leaf-bound", type=int, default=DEFAULT_LINK_LEAF_BOUND, metavar="N")
    p.add_argument("--out", metavar="FILE", help="write the result here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="symthompson",
        description="Labeled tree-pair calculus, Stein-Farley links and their homology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("compose", cmd_compose, "compose elements, rightmost applied first")
    p.add_argument("elements", nargs="+")
    p = add("invert", cmd_invert, "inverse element")
    p.add_argument("element")
    p = add("reduce", cmd_reduce, "canonical form")
    p.add_argument("element")
    p = add("equals", cmd_equals, "compare two elements")
    p.add_argument("first")
    p.add_argument("second")
    p = add("act", cmd_act, "image of a point 'prefix(period)'")
    p.add_argument("element")
    p.add_argument("point")
    p = add("pi", cmd_pi, "push labels through q")
    p.add_argument("element")
    p = add("section", cmd_section, "lift an element over q(H) back to H")
    p.add_argument("element")
    p = add("retract", cmd_retract, "label of the leftmost leaf")
    p.add_argument("element")

    p = add("axioms", cmd_axioms, "run the element property campaign")
    defaults = campaigns.AxiomConfig()
    for field_name in ("triples", "confluence", "action_pairs", "pi_pairs", "sections", "retraction"):
        p.add_argument("--" + field_name.replace("_", "-"), type=int,
                       default=getattr(defaults, field_name), metavar="N")

    p = add("generate-check", cmd_generate_check, "ball search for generation")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--target-carets", type=int, default=1)
    p.add_argument("--report-only", action="store_true",
                   help="stop quietly at the ball limit and never fail")

    p = add("dlk", cmd_dlk, "descending link of [T, id]")
    p.add_argument("--leaves", type=int, default=4, help="use the comb tree with this many leaves")
    p.add_argument("--tree", help="leaf words of T, e.g. '00 01 1'")
    p.add_argument("--no-homology", action="store_true")

    p = add("interval", cmd_interval, "Boolean intervals")
    p.add_argument("--tree", help="bottom tree; omit for the exhaustive campaign")
    p.add_argument("--carets", help="leaves of the bottom tree receiving a caret")
    p.add_argument("--max-gap", type=int, default=3)
    p.add_argument("--max-base-carets", type=int, default=3)

    p = add("stabilizer", cmd_stabilizer, "stabilizer orders of [T, id]")
    p.add_argument("--tree")
    p.add_argument("--max-leaves", type=int, default=4)
    p.add_argument("--ball-radius", type=int, default=0)

    p = add("orbits", cmd_orbits, "orbit census by height")
    p.add_argument("--max-height", type=int, default=3)
    p.add_argument("--samples", type=int, default=3)

    p = add("homology", cmd_homology, "reduced homology of a complex file")
    p.add_argument("complex")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth_limit < 1:
        parser.error("--depth-limit must be positive")
    run = Run(args)
    try:
        with depth_limit(args.depth_limit):
            code = args.func(run)
    except BoundExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InputError, SymThompsonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = "".join(run.chunks)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
