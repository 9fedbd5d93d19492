"""Command-line front end.

    nqss figure1 --points 101 --out fig1.csv --plot fig1.png
    nqss scenario --N 3 --n 1 --points 21 --format json
    nqss appendix-b --case ABC+ABD --case 7
    nqss verify-counterexample --alpha 0.955

Tables go to ``--out`` (stdout by default) as CSV with 9 significant digits
or as a JSON list of row objects.  The exit status is 1 when an internal
consistency check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from nqss import reports
from nqss.bell import OptimizerConfig
from nqss.errors import InvalidInputError, ResourceLimitError

log = logging.getLogger("nqss")

COMMANDS = ("figure1", "scenario", "appendix-b", "verify-counterexample")


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def render(columns, rows, fmt: str) -> str:
    if fmt == "json":
        clean = [{c: _jsonable(r[c]) for c in columns} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nqss", description=__doc__.split("\n")[0], allow_abbrev=False)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--N", type=int, default=3, help="number of partners (scenario)")
    p.add_argument("--n", type=int, default=1, help="number of spied channels (scenario)")
    p.add_argument("--phi-start", type=float, default=0.0)
    p.add_argument("--phi-stop", type=float, default=math.pi / 2)
    p.add_argument("--points", type=int, default=None, help="grid size (figure1: 101, scenario: 21)")
    p.add_argument("--alpha", type=float, default=0.955, help="counterexample parameter")
    p.add_argument("--alpha-stop", type=float, default=None, help="sweep alpha from --alpha to this value")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--margin", type=float, default=1e-4)
    p.add_argument("--stable-window", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--plot", default=None, help="also render a figure to this file")
    p.add_argument("--case", action="append", default=None, help="appendix-b case number or label")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _grid(parser, args, default_points):
    points = default_points if args.points is None else args.points
    if points < 2:
        parser.error("--points must be >= 2")
    if not 0.0 <= args.phi_start <= args.phi_stop <= math.pi / 2 + 1e-15:
        parser.error("need 0 <= --phi-start <= --phi-stop <= pi/2")
    phis = np.linspace(args.phi_start, args.phi_stop, points)
    return np.minimum(phis, math.pi / 2)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = OptimizerConfig(
            restarts=args.restarts, tol=args.tol, margin=args.margin, stable_window=args.stable_window, seed=args.seed
        )
    except InvalidInputError as exc:
        parser.error(str(exc))

    from nqss import plotting

    try:
        if args.command == "figure1":
            columns, rows, ok = reports.figure1(_grid(parser, args, 101))
            plot = plotting.plot_figure1
        elif args.command == "scenario":
            columns, rows, ok = reports.scenario(args.N, args.n, _grid(parser, args, 21), cfg)
            plot = plotting.plot_scenario
        elif args.command == "appendix-b":
            progress = (lambda r: log.info("case %s: %.6f (%s)", r["label"], r["max_value"], r["verdict"]))
            columns, rows, ok = reports.overlap_table(cfg, args.case, progress)
            plot = plotting.plot_overlap_table
        else:
            if args.alpha_stop is None:
                alphas = [args.alpha]
            else:
                alphas = np.linspace(args.alpha, args.alpha_stop, args.points or 20)
            columns, rows, ok = reports.counterexample(alphas, cfg)
            plot = plotting.plot_counterexample
    except ResourceLimitError as exc:
        print(f"nqss: {exc}", file=sys.stderr)
        return 3
    except InvalidInputError as exc:
        parser.error(str(exc))

    text = render(columns, rows, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        plot(rows, args.plot)
    if not ok:
        log.error("internal consistency checks failed")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
