"""Command-line entry point.

    bdris arch <spec> <N>
    bdris embed <N> [--out DIR]
    bdris simulate --plan PLAN.json [--out DIR]

Exit codes: 0 success, 1 usage error, 2 runtime or verification failure.
The default output directory comes from ``$BDRIS_OUTDIR`` (else ``./bdris_out``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .architectures import (
    ArchitectureError,
    build_graph,
    classify_planarity,
    closed_form_total,
    component_count,
    is_maximal_planar,
    parse_spec,
)
from .embedding import band3_recursive_drawing, count_crossings, drawing_to_json, export_svg
from .experiment import (
    ExperimentPlan,
    default_output_dir,
    plot_summary,
    records_to_csv,
    run_experiment,
    summarize,
    summary_to_csv,
)
from .graph_core import edge_count, is_planar

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def arch_report(spec_text: str, n: int) -> dict:
    spec = parse_spec(spec_text)
    g = build_graph(spec, n)
    verdict = is_planar(g)
    cls = classify_planarity(spec)
    comp = component_count(spec, n)
    report = {
        "arch": str(spec),
        "N": n,
        "edges": edge_count(g),
        "planar": verdict.planar,
        "witness": None,
        "classification": str(cls),
        "planar_connected": cls.planar_connected,
        "maximal_planar": is_maximal_planar(g) if n >= 3 else None,
        "complexity": {
            "interconnection_count": comp.interconnection_count,
            "ground_count": comp.ground_count,
            "total": comp.total,
        },
        "closed_form_total": closed_form_total(spec, n),
    }
    if verdict.witness is not None:
        report["witness"] = {
            "kind": verdict.witness.kind,
            "branch_sets": [sorted(s) for s in verdict.witness.branch_sets],
        }
    return report


def cmd_arch(args) -> int:
    report = arch_report(args.spec, args.N)
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_embed(args) -> int:
    if args.N < 3:
        raise UsageError(f"embed needs N >= 3, got {args.N}")
    out = Path(args.out) if args.out else default_output_dir()
    d = band3_recursive_drawing(args.N)
    crossings = count_crossings(d)
    out.mkdir(parents=True, exist_ok=True)
    svg = out / f"band3_N{args.N}.svg"
    coords = out / f"band3_N{args.N}.json"
    svg.write_text(export_svg(d), encoding="utf-8")
    coords.write_text(drawing_to_json(d) + "\n", encoding="utf-8")
    print(json.dumps({"N": args.N, "edges": len(d.edges), "crossings": crossings,
                      "svg": str(svg), "json": str(coords)}, indent=2))
    return EXIT_OK if crossings == 0 else EXIT_FAIL


def cmd_simulate(args) -> int:
    plan_path = Path(args.plan)
    try:
        text = plan_path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read plan: {exc}") from None
    try:
        plan = ExperimentPlan.from_json(text, base_dir=plan_path.parent)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid plan: {exc}") from None
    out = Path(args.out or plan.output_dir or default_output_dir())
    records, errors = run_experiment(plan)
    for msg in errors:
        print(f"skipped: {msg}", file=sys.stderr)
    rows = summarize(records)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(records_to_csv(records))
    (out / "summary.csv").write_text(summary_to_csv(rows))
    if rows:
        plot_summary(rows, out)
    sys.stdout.write(summary_to_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bdris", description="Planar BD-RIS architecture toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("arch", help="graph, planarity and complexity of one architecture")
    a.add_argument("spec", help="single | group:G | fully | forest:G | tree | stem:Q | band:Q | maxplanar:1|2|3")
    a.add_argument("N", type=int)
    a.set_defaults(func=cmd_arch)

    e = sub.add_parser("embed", help="planar drawing of the 3-band graph")
    e.add_argument("N", type=int)
    e.add_argument("--out", help="output directory")
    e.set_defaults(func=cmd_embed)

    s = sub.add_parser("simulate", help="sum-rate / complexity sweep")
    s.add_argument("--plan", required=True, help="experiment plan (JSON)")
    s.add_argument("--out", help="output directory (overrides the plan)")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ArchitectureError) as exc:
        parser.print_usage(sys.stderr)
        print(f"bdris: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bdris: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
