"""Command line entry point: ``ugts check``, ``ugts show`` and ``ugts selftest``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from ..backward import GENERAL, RESTRICTED, SearchConfig, backward_search
from ..core import PathBound
from .dot import render_dot
from .parser import ParseError, SpecFile, parse_spec
from .report import Report

EXIT_SAFE = 0
EXIT_INCONCLUSIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _load(path: str) -> SpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_spec(text)


def _config(args: argparse.Namespace) -> SearchConfig:
    bound = PathBound(args.path_bound) if args.path_bound is not None else None
    return SearchConfig(
        mode=args.mode,
        path_bound=bound,
        postcond_lift=not args.no_postcond_lift,
        max_iterations=args.max_iterations,
        coarse_bound=args.coarse_bound,
    )


def cmd_check(args: argparse.Namespace) -> int:
    spec = _load(args.spec)
    cfg = _config(args)

    def progress(state, produced, fresh):
        print(
            f"iteration {state.iteration}: {produced} produced, {fresh} new, basis {len(state.working)}",
            file=sys.stderr,
        )

    state = backward_search(spec.rule_list, spec.error_graphs, cfg, progress=progress if args.verbose else None)
    report = Report.from_search(spec, state, cfg)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    if args.emit_dot:
        out = Path(args.emit_dot)
        out.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(sorted(report.basis, key=lambda h: (h.size, len(h.nodes)))):
            (out / f"basis_{i:03d}.dot").write_text(render_dot(g, f"basis_{i}"), encoding="utf-8")
    if not state.stationary:
        return EXIT_BUDGET
    return EXIT_SAFE if report.all_safe else EXIT_INCONCLUSIVE


def cmd_show(args: argparse.Namespace) -> int:
    spec = _load(args.spec)
    if args.graph not in spec.graphs:
        print(f"error: no graph named {args.graph!r}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render_dot(spec.graphs[args.graph], args.graph))
    return EXIT_SAFE


def cmd_selftest(args: argparse.Namespace) -> int:
    from ..fixtures import fixture_text
    from ..oracle import EnumBounds, GuardError, check_agreement, enumerate_graphs, forward_table

    spec = parse_spec(fixture_text()) if args.spec is None else _load(args.spec)
    n = args.max_size
    try:
        bounds = EnumBounds(n, n, max_elements=n)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    hosts = list(enumerate_graphs(spec.signature, bounds))
    table = forward_table(spec.rule_list, hosts)
    targets = list(spec.error_graphs) + [h for h in hosts if h.size <= max(n - 2, 0)]
    failures = 0
    for g in targets:
        result = check_agreement(spec.rule_list, g, bounds, table)
        if not result.ok:
            failures += 1
            print(f"FAIL {g!r}: {len(result.missing)} missing, {len(result.extra)} unconfirmed")
    print(f"selftest: {len(targets)} graphs over {len(hosts)} hosts, {failures} disagreements")
    return EXIT_SAFE if failures == 0 else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ugts", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the backward search on a spec file")
    check.add_argument("spec")
    check.add_argument("--mode", choices=[GENERAL, RESTRICTED], default=GENERAL)
    check.add_argument("--path-bound", type=int, metavar="K")
    check.add_argument("--max-iterations", type=int, default=1000, metavar="N")
    check.add_argument("--emit-dot", metavar="DIR")
    check.add_argument("--no-postcond-lift", action="store_true")
    check.add_argument("--coarse-bound", action="store_true", help="use |V|+|E| as the instantiation bound")
    check.add_argument("--json", action="store_true")
    check.add_argument("-v", "--verbose", action="store_true")
    check.set_defaults(func=cmd_check)

    show = sub.add_parser("show", help="print a graph of a spec file as DOT")
    show.add_argument("spec")
    show.add_argument("--graph", required=True)
    show.set_defaults(func=cmd_show)

    st = sub.add_parser("selftest", help="compare the backward step with the brute-force oracle")
    st.add_argument("--max-size", type=int, default=4, metavar="N")
    st.add_argument("--spec", help="spec file (default: the bundled dining fixture)")
    st.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
