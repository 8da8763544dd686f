"""Command-line front end.

Every subcommand is a pure function of its inputs: same flags, same bytes.
Exit codes: 0 success, 1 usage error, 2 operation error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import acceptance
from .engine import (
    fixed_point_prefix,
    resolve_system,
    source,
    theta,
    verify_renormalization,
)
from .errors import SubstreetutionError
from .jacaranda import brother, detect_type, jacaranda_prefix, unsub_pow
from .measures import invariant_measure
from .preimages import p_n, preimages_bruteforce, preimages_classified
from .render import RenderConfig, tiling_svg, tree_svg
from .systems import build_orbit_graph, nomeasure_tree, parse_orbit_graph
from .trees import distinct_subpatches, dump_patch, load_patch, random_patch
from .words import chi_pow, ones_count_line_2n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="substreetution")
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="advisory worker count; results never depend on it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixpoint", help="prefix of a fixed tree")
    p.add_argument("--sub", required=True, help="builtin:<name> or a system file")
    p.add_argument("--root", type=int, choices=(0, 1), required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("line", help="one generation of a patch")
    p.add_argument("--patch", required=True)
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("chi", help="iterate the line-doubling map")
    p.add_argument("--word", required=True)
    p.add_argument("--pow", type=int, default=1)
    p.add_argument("--sub", default="builtin:bbab")

    p = sub.add_parser("theta", help="even sites pulling back to an address")
    p.add_argument("--addr", required=True)
    p.add_argument("--sub", default="builtin:bbab")

    p = sub.add_parser("source", help="half-length source of an even address")
    p.add_argument("--addr", required=True)
    p.add_argument("--sub", default="builtin:bbab")

    p = sub.add_parser("verify-renorm", help="check the renormalization identity")
    p.add_argument("--sub", required=True)
    p.add_argument("--depth", type=int, default=9)
    p.add_argument("--maxlen", type=int, default=4)
    p.add_argument("--patch", help="check on this patch instead of the fixed tree")
    p.add_argument("--random", type=int, default=0, help="also check N random patches")
    p.add_argument("--seed", type=int, default=2024)

    p = sub.add_parser("type", help="dyadic class report for a patch")
    p.add_argument("--patch", required=True)

    p = sub.add_parser("unsub", help="invert the substitution repeatedly")
    p.add_argument("--patch", required=True)
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("brother", help="forced root-1 sibling of a root-0 patch")
    p.add_argument("--patch", required=True)
    p.add_argument("--out")

    p = sub.add_parser("preimages", help="parents of a patch inside a prefix")
    p.add_argument("--patch", required=True)
    p.add_argument("--jprefix", help="prefix file (defaults to a depth-14 prefix)")
    p.add_argument("--n", type=int, default=1, help="iterated ancestor distance")
    p.add_argument("--classified", action="store_true")

    p = sub.add_parser("complexity", help="distinct subtree counts by depth")
    p.add_argument("--patch", required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("proportion", help="exact density of 1s on line 2^n")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("orbit-graph", help="close a tree under both shifts")
    p.add_argument("--example", choices=("nomeasure",))
    p.add_argument("--patch")
    p.add_argument("--root", type=int, choices=(0, 1), default=0)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--out")

    p = sub.add_parser("measure-check", help="invariant probability feasibility")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("render-tree", help="SVG picture of a patch")
    p.add_argument("--patch", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("render-tiling", help="colored disk tiling SVG")
    p.add_argument("--patch", required=True)
    p.add_argument("--depth", type=int, default=2, help="maximal word length")
    p.add_argument("--res", type=int, default=256)
    p.add_argument("--out", required=True)

    sub.add_parser("verify-paper", help="run the full verification table")
    return parser


def _run(args) -> int:
    cmd = args.command
    if cmd == "fixpoint":
        system = resolve_system(args.sub)
        patch = fixed_point_prefix(system, args.root, args.depth)
        _write(dump_patch(patch), args.out)
    elif cmd == "line":
        print(load_patch(args.patch).line(args.level))
    elif cmd == "chi":
        system = resolve_system(args.sub)
        print(chi_pow(system, args.word, args.pow))
    elif cmd == "theta":
        system = resolve_system(args.sub)
        sites = sorted(theta(system, args.addr))
        print(" ".join(sites) if sites else "{}")
    elif cmd == "source":
        system = resolve_system(args.sub)
        print(source(system, args.addr) or "e")
    elif cmd == "verify-renorm":
        system = resolve_system(args.sub)
        reports = []
        if args.patch:
            reports.append(verify_renormalization(system, load_patch(args.patch), args.maxlen))
        else:
            root = 0 if system.fixable_at(0) else 1
            prefix = fixed_point_prefix(system, root, args.depth)
            reports.append(verify_renormalization(system, prefix, args.maxlen))
        rng = random.Random(args.seed)
        for _ in range(args.random):
            reports.append(
                verify_renormalization(system, random_patch(args.maxlen, rng), args.maxlen)
            )
        ok = all(r.ok for r in reports)
        print(f"{'pass' if ok else 'FAIL'} ({sum(r.checked for r in reports)} sites checked)")
        return 0 if ok else 2
    elif cmd == "type":
        print(detect_type(load_patch(args.patch)).serialize())
    elif cmd == "unsub":
        patch = load_patch(args.patch)
        _write(dump_patch(unsub_pow(patch, args.times)), args.out)
    elif cmd == "brother":
        _write(dump_patch(brother(load_patch(args.patch))), args.out)
    elif cmd == "preimages":
        patch = load_patch(args.patch)
        jp = load_patch(args.jprefix) if args.jprefix else jacaranda_prefix(14)
        if args.classified:
            from .jacaranda import concrete

            result = preimages_classified(concrete(patch), jp)
            sys.stdout.write(result.serialize())
        elif args.n == 1:
            sys.stdout.write(preimages_bruteforce(patch, jp).serialize())
        else:
            print(p_n(patch, args.n, jp))
    elif cmd == "complexity":
        patch = load_patch(args.patch)
        for n in range(args.max_n + 1):
            print(f"{n} {len(distinct_subpatches(patch, n))}")
    elif cmd == "proportion":
        print(f"{ones_count_line_2n(args.n)}/{1 << (1 << args.n)}")
    elif cmd == "orbit-graph":
        if args.example == "nomeasure":
            seed = nomeasure_tree(args.root, max(args.depth + 4, 12))
        elif args.patch:
            seed = load_patch(args.patch)
        else:
            raise SubstreetutionError("need --example or --patch")
        graph = build_orbit_graph(seed, args.depth)
        _write(graph.serialize(), args.out)
    elif cmd == "measure-check":
        with open(args.graph, encoding="ascii") as fh:
            graph = parse_orbit_graph(fh.read())
        sys.stdout.write(invariant_measure(graph).serialize())
    elif cmd == "render-tree":
        _write(tree_svg(load_patch(args.patch)), args.out)
    elif cmd == "render-tiling":
        cfg = RenderConfig(resolution=args.res, depth_limit=args.depth)
        _write(tiling_svg(load_patch(args.patch), cfg), args.out)
    elif cmd == "verify-paper":
        results = acceptance.run_all(verbose=True)
        return 0 if all(ok for _, ok, _ in results) else 3
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _run(args)
    except SubstreetutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
