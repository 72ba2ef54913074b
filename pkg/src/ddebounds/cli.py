"""Command-line front end.

Subcommands:
  analyze   <config>             map classification, fixed point, 2-cycle
  bounds    <config> [--csv F]   every applicable bound pipeline
  simulate  <config> --out DIR   trajectory CSVs for the history battery
  stability --a --b --tau        critical delay and unstable-pair count
  certify   <config> [--out DIR] theory vs simulation; exit 1 on violation
  reproduce --example exN --out DIR   regenerate a worked example's data

Exit codes: 0 success, 1 containment failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds as bounds_mod
from . import certify as certify_mod
from . import ddesim, linstab, maps, onedim
from .certify import RunConfig
from .errors import DdeBoundsError

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ddebounds",
        description="attractor bounds for delay equations with monotone negative-Schwarzian feedback",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify the map and report its dichotomy data")
    p.add_argument("config", help="YAML run configuration")

    p = sub.add_parser("bounds", help="run every applicable bound pipeline")
    p.add_argument("config")
    p.add_argument("--csv", help="also write pipeline rows to this CSV file")

    p = sub.add_parser("simulate", help="integrate the history battery and write CSVs")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("stability", help="linear stability of the equilibrium")
    p.add_argument("--a", type=float, required=True, help="instantaneous decay rate")
    p.add_argument("--b", type=float, required=True, help="feedback slope f'(K) (< 0)")
    p.add_argument("--tau", type=float, required=True, help="delay")

    p = sub.add_parser("certify", help="bounds + simulations + containment check")
    p.add_argument("config")
    p.add_argument("--out", help="write report.txt / report.csv to this directory")

    p = sub.add_parser("reproduce", help="regenerate a worked example's data files")
    p.add_argument("--example", required=True, choices=("ex1", "ex2", "ex3"))
    p.add_argument("--out", required=True, help="output directory")
    return ap


def _cmd_analyze(args) -> int:
    config = RunConfig.from_yaml(args.config)
    spec = config.feedback
    cls = maps.classify(spec)
    print(f"map: {spec}  domain [{spec.domain[0]:g}, {spec.domain[1]:g}]")
    print(f"class: {cls.kind}", end="")
    if cls.critical_point is not None:
        print(f"  critical point x0 = {cls.critical_point:.10g}", end="")
    if cls.finite_limit is not None:
        print(f"  finite limit = {cls.finite_limit:.10g}", end="")
    if cls.witness is not None:
        print(f"  witness = {cls.witness:.10g}", end="")
    print()
    if cls.kind == maps.MapKind.NEITHER:
        return 0
    a, b = maps.invariant_attracting_interval(spec, cls)
    print(f"invariant attracting interval: [{a:.10g}, {b:.10g}]")
    verdict = onedim.singer_dichotomy(spec, cls)
    fp = verdict.fixed_point
    print(f"fixed point K = {fp.x:.12g}  f'(K) = {fp.slope:.12g}  residual {fp.residual:.3g}")
    print(f"map dichotomy: {verdict.case}")
    if verdict.two_cycle is not None:
        c = verdict.two_cycle
        print(
            f"2-cycle: [{c.lo:.12g}, {c.hi:.12g}]  residuals ({c.residuals[0]:.3g}, {c.residuals[1]:.3g})"
        )
    return 0


def _cmd_bounds(args) -> int:
    config = RunConfig.from_yaml(args.config)
    report = bounds_mod.best_bounds(
        config.feedback,
        config.a,
        tau=config.tau,
        k=config.refine_k,
        pipelines=config.pipelines,
    )
    print(report.text())
    if args.csv:
        rows = [bounds_mod.CSV_HEADER]
        rows.extend(c.csv_row() for c in report.components)
        rows.append(report.csv_row())
        Path(args.csv).write_text("\n".join(rows) + "\n")
        print(f"wrote {args.csv}")
    return 0


def _cmd_simulate(args) -> int:
    config = RunConfig.from_yaml(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    histories = config.histories or certify_mod.default_history_battery(
        config.feedback, config.a
    )
    for i, h in enumerate(histories, start=1):
        traj = certify_mod._simulate(config, h)
        path = out / f"trajectory_{i}.csv"
        traj.to_csv(path)
        st = ddesim.tail_stats(traj, config.tail_fraction)
        print(
            f"history {h:.6g}: tail [{st.lo:.10g}, {st.hi:.10g}]  -> {path}"
        )
    return 0


def _cmd_stability(args) -> int:
    result = linstab.local_stability(args.a, args.b, args.tau)
    if result.tau0 is None:
        print("tau0: none (|b| <= a: stable for every delay)")
    else:
        print(f"tau0 = {result.tau0:.12g}")
    print(f"unstable root pairs N = {result.n_unstable_pairs}")
    print(f"verdict: {'locally stable' if result.locally_stable else 'unstable'}")
    return 0


def _cmd_certify(args) -> int:
    config = RunConfig.from_yaml(args.config)
    cert = certify_mod.certify(config)
    print(cert.text())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(cert.text() + "\n")
        (out / "report.csv").write_text("\n".join(cert.csv_rows()) + "\n")
        print(f"wrote {out / 'report.txt'} and {out / 'report.csv'}")
    return 0 if cert.all_contained else 1


def _cmd_reproduce(args) -> int:
    files = certify_mod.reproduce(args.example, args.out)
    for f in files:
        print(f"wrote {f}")
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "bounds": _cmd_bounds,
    "simulate": _cmd_simulate,
    "stability": _cmd_stability,
    "certify": _cmd_certify,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DdeBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
