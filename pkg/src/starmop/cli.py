"""Command-line entry point.

Three subcommands share a workspace directory:

    starmop compute --config cfg.toml --out DIR     tables only
    starmop verify  --config cfg.toml --out DIR     tables + limits + report
    starmop plot    --out DIR                       figures from artifacts

`--nmax` and `--precision` override the corresponding config fields.  The
environment variable MOP_THREADS (default 1) sets the number of worker
threads used while building the polynomial tables.

Exit codes: 0 success, 1 at least one verification check failed,
2 unusable configuration or artifacts, 3 numerical non-convergence.
"""

import argparse
import sys
from pathlib import Path

from .config import StarConfig
from .errors import (ArtifactError, ConfigError, HypothesisViolation,
                     NonConvergenceError, SingularityError)
from .report import run_compute, run_verify


def _add_common(p, needs_config=True):
    if needs_config:
        p.add_argument("--config", required=True,
                       help="TOML or JSON configuration file")
        p.add_argument("--nmax", type=int, default=None,
                       help="override the configured top index")
        p.add_argument("--precision", type=int, default=None,
                       help="override the configured precision (bits)")
    p.add_argument("--out", default="starmop-out",
                   help="workspace directory for artifacts (default ./starmop-out)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="starmop",
        description="multiple orthogonal polynomials on a three-ray star: "
                    "tables, limit objects and verification")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="build the polynomial tables and "
                                        "write them as delimited text")
    _add_common(pc)

    pv = sub.add_parser("verify", help="run every advertised check and "
                                       "write the full artifact set")
    _add_common(pv)

    pp = sub.add_parser("plot", help="render figures from the artifacts "
                                     "present in the workspace")
    _add_common(pp, needs_config=False)
    return ap


def _load_config(args):
    cfg = StarConfig.from_file(args.config)
    if args.nmax is not None or args.precision is not None:
        cfg = cfg.with_overrides(n_max=args.nmax,
                                 precision_bits=args.precision)
    cfg.validate()
    return cfg


def cmd_compute(args):
    cfg = _load_config(args)
    out = Path(args.out)
    run_compute(cfg, out)
    for name in ("polys.csv", "recurrence.csv", "second_kind.csv"):
        print(out / name)
    return 0


def cmd_verify(args):
    cfg = _load_config(args)
    out = Path(args.out)
    rep = run_verify(cfg, out)
    for c in rep.checks:
        print(c.line())
    failed = rep.failed()
    print(f"{len(rep.checks) - len(failed)}/{len(rep.checks)} checks passed; "
          f"report at {out / 'report.json'}")
    return 0 if rep.all_passed else 1


def cmd_plot(args):
    from .plots import render_all
    for path in render_all(Path(args.out)):
        print(path)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"compute": cmd_compute, "verify": cmd_verify,
                "plot": cmd_plot}
    try:
        return handlers[args.command](args)
    except (ConfigError, ArtifactError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NonConvergenceError, SingularityError, HypothesisViolation) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
