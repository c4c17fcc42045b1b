"""Command-line front end.

Exit codes: 0 = yes / accept, 1 = no / reject, 2 = error or refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from rca.errors import ParseError, RCAError, Refusal
from rca.flow import dump_network, expand
from rca.generators import (
    gen_dp23hc_trail,
    gen_pchc_path,
    gen_pchc_trail,
    gen_setcover,
)
from rca.graph import Graph, Instance, bidirect, format_instance, parse_graph, parse_instance
from rca.oracle import min_shared, parse_set_cover
from rca.routes import format_routes, parse_routes, verify_solution
from rca.solvers import horizon_for, solve

CONSTRUCTIONS = (
    "setcover-dag",
    "setcover-undirected",
    "pchc-path",
    "pchc-path-directed",
    "pchc-trail",
    "dp23hc-trail",
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    result = solve(inst, jobs=args.jobs)
    if args.json:
        print(json.dumps(result.to_json(), sort_keys=True))
    else:
        print("yes" if result.decision else "no")
        if args.witness and result.witness is not None:
            sys.stdout.write(format_routes(result.witness))
    return 0 if result.decision else 1


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    text = _read(args.routes)
    head, _, rest = text.partition("\n")
    if head.strip() == "yes":
        # output of `solve --witness` piped straight in
        text = "#\n" + rest
    try:
        routes = parse_routes(text)
    except ValueError as exc:
        print(f"error: malformed routes file: {exc}", file=sys.stderr)
        return 2
    verdict = verify_solution(inst, routes)
    if verdict:
        print("accept")
        return 0
    print(f"reject {verdict.reason}: {verdict.detail}")
    return 1


def _write_names(names: dict[str, int], path: Path) -> None:
    lines = [f"{role} {vid}" for role, vid in sorted(names.items(), key=lambda kv: (kv[1], kv[0]))]
    path.write_text("\n".join(lines) + "\n")


def cmd_generate(args: argparse.Namespace) -> int:
    text = _read(args.source)
    name = args.construction
    try:
        if name.startswith("setcover"):
            inst = gen_setcover(parse_set_cover(text), name.split("-", 1)[1])
        else:
            g = parse_graph(text)
            if name.startswith("pchc-path"):
                triple = _triple(g, args)
                orientation = "directed" if name.endswith("directed") else "undirected"
                inst = gen_pchc_path(g, triple, orientation, pad=args.pad)
            elif name == "pchc-trail":
                inst = gen_pchc_trail(g, args.x, subdivide=not args.no_subdivide)
            else:
                inst = gen_dp23hc_trail(g, args.x)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        print(f"error: {name}: {exc}", file=sys.stderr)
        return 2
    out = format_instance(inst)
    if args.output:
        target = Path(args.output)
        target.write_text(out)
        names_path = Path(args.names) if args.names else target.with_name(target.name + ".names")
        _write_names(inst.names, names_path)
    else:
        sys.stdout.write(out)
        if args.names:
            _write_names(inst.names, Path(args.names))
    return 0


def _triple(g: Graph, args: argparse.Namespace) -> tuple[int, int, int]:
    x1 = args.x1
    if args.x2 is not None and args.x3 is not None:
        return x1, args.x2, args.x3
    if not 0 <= x1 < g.n:
        raise ValueError(f"x1={x1} is not a vertex")
    nbrs = sorted({w for _, w in g.out[x1]})
    if len(nbrs) < 2:
        raise ValueError(f"x1={x1} has fewer than two neighbors")
    return x1, nbrs[0], nbrs[1]


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    result = min_shared(inst)
    if result.min_shared is None:
        print("minShared none (no routes of this kind within the length cap)")
        return 1
    print(f"minShared {result.min_shared}")
    print(f"decision {'yes' if result.decision else 'no'}")
    if result.witness is not None:
        sys.stdout.write(format_routes(result.witness))
    return 0 if result.decision else 1


def default_horizon(inst: Instance) -> int:
    if inst.graph.directed:
        return horizon_for(inst)
    directed, _ = bidirect(inst.graph)
    return horizon_for(
        Instance(directed, inst.s, inst.t, inst.p, inst.k, inst.kind, inst.alpha)
    )


def cmd_expand(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    tau = args.tau if args.tau is not None else default_horizon(inst)
    sys.stdout.write(dump_network(expand(inst.graph, inst.s, inst.t, tau, inst.p)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rca", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true", help="print witness routes")
    p.add_argument("--json", action="store_true", help="print a JSON record")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the subset loop")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a route file against an instance")
    p.add_argument("instance")
    p.add_argument("routes", help="route file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="build an instance from a source problem")
    p.add_argument("construction", choices=CONSTRUCTIONS)
    p.add_argument("source", help="set cover file or graph file")
    p.add_argument("-o", "--output", help="instance file (default: stdout)")
    p.add_argument("--names", help="name map file (default: <output>.names)")
    p.add_argument("--x1", type=int, default=0, help="outer-face vertex (pchc-path)")
    p.add_argument("--x2", type=int, help="outer neighbor of x1 (pchc-path)")
    p.add_argument("--x3", type=int, help="outer neighbor of x1 (pchc-path)")
    p.add_argument("--x", type=int, default=0, help="outer-face vertex (pchc-trail, dp23hc-trail)")
    p.add_argument("--pad", type=int, default=0, help="k-chain prepended at s (pchc-path)")
    p.add_argument("--no-subdivide", action="store_true", help="keep parallel edges (pchc-trail)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="exhaustive minimum number of shared edges")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("expand", help="dump the time-expanded network")
    p.add_argument("instance")
    p.add_argument("--tau", type=int, help="horizon (default: the solver's horizon rule)")
    p.set_defaults(func=cmd_expand)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Refusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (RCAError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
