"""Command-line entry point: ``rankfeed run|ingest|plotdata|bound``."""

import argparse
import sys

from rankfeed.estimation import EstimationBoundInputs, estimation_error_bound
from rankfeed.harness import (
    ingest_scores,
    load_config,
    plot_from_dir,
    run_experiment,
    write_ingested,
)
from rankfeed.harness.runner import OUTPUT_ENV


def _seeds(text):
    return [int(s) for s in text.replace(",", " ").split()]


def cmd_run(args):
    config = load_config(args.config)
    res = run_experiment(config, output=args.output, workers=args.workers, seeds=args.seeds)
    sel = res["selection"]
    print(f"{len(res['rows'])} runs written to {res['output']}")
    print(f"selected grid point {sel['grid_index']} {sel['point']} "
          f"(mean final average regret {sel['mean_final_avg_regret']:.6g})")


def cmd_ingest(args):
    ds = ingest_scores(args.scores)
    path = write_ingested(ds, args.output)
    print(f"{len(ds.raw)} rows, {len(ds.names)} models + reference -> {path}")
    print(f"offset {ds.offset!r} scale {ds.scale!r}")


def cmd_plotdata(args):
    for path in plot_from_dir(args.run_dir, args.output):
        print(path)


def cmd_bound(args):
    b = estimation_error_bound(
        EstimationBoundInputs(args.tau, args.p, args.m, args.delta, args.actions, args.variation)
    )
    if b.applicable:
        print(repr(b.value))
    else:
        print("not applicable: window too short for the guarantee (m p^4 < 2 log(2/delta))")


def build_parser():
    ap = argparse.ArgumentParser(prog="rankfeed", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("-o", "--output", help=f"output directory (default: config, then ${OUTPUT_ENV})")
    r.add_argument("-j", "--workers", type=int)
    r.add_argument("--seeds", type=_seeds, help="comma-separated seed override")
    r.set_defaults(fn=cmd_run)

    i = sub.add_parser("ingest", help="rescale a model-score CSV into a utility sequence")
    i.add_argument("scores")
    i.add_argument("-o", "--output", required=True)
    i.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("plotdata", help="average-regret curves with confidence half-widths")
    p.add_argument("run_dir")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_plotdata)

    b = sub.add_parser("bound", help="high-probability sup-norm estimation error")
    b.add_argument("--tau", type=float, required=True)
    b.add_argument("--p", type=float, default=1.0, help="per-step proposal probability floor")
    b.add_argument("--m", type=int, required=True, help="window length")
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--actions", type=int, required=True)
    b.add_argument("--variation", type=float, default=0.0, help="utility variation inside the window")
    b.set_defaults(fn=cmd_bound)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"rankfeed: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
