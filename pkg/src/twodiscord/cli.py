"""Command-line front end.

Subcommands: ``compute`` for a single state file, ``sweep`` for the Werner
and isotropic families, ``verify`` for the worked-example table, ``audit``
for randomized invariant checks. Exit codes: 0 success, 2 input/validation
failure, 3 flagged cross-check violation. All diagnostics are single lines
prefixed "error:".
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .entropic import discord_one_sided, discord_two_sided, mutual_information
from .errors import DiscordError, DomainError
from .geometric import (
    geo_discord_one_sided,
    geo_discord_two_sided,
    isotropic_geo_closed,
    werner_geo_closed,
)
from .optimize import OptimizerConfig
from .serialize import load_state
from .states import isotropic, purity, werner
from .verification import audit_states, run_verify

CHAIN_TOL = 1e-6
BOUND_TOL = 1e-8


@dataclass(frozen=True)
class SweepSpec:
    """A parameter sweep over one closed-form state family."""

    family: str
    m: int
    x_start: float
    x_end: float
    points: int

    def __post_init__(self):
        if self.family not in ("werner", "isotropic"):
            raise DomainError(f"unknown family {self.family!r}")
        if self.m < 2:
            raise DomainError("m must be >= 2")
        if self.points < 2:
            raise DomainError("points must be >= 2")
        lo, hi = (-1.0, 1.0) if self.family == "werner" else (0.0, 1.0)
        if not (lo <= self.x_start <= self.x_end <= hi):
            raise DomainError(
                f"x range [{self.x_start}, {self.x_end}] outside [{lo}, {hi}]"
            )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".9g")


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts, seed=args.seed, value_tolerance=args.tol
    )


def _write(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_report(state, cfg: OptimizerConfig, with_entropic: bool) -> dict:
    """One flat record of discords, bounds, and optimizer diagnostics.

    The one-sided searches are warm-started from the two-sided optimum so
    the reported hierarchy cannot be broken by an unlucky restart draw.
    """
    ab = geo_discord_two_sided(state, cfg)
    da = geo_discord_one_sided(
        state, "A", cfg, extra_warm_starts=[ab.optimal_measurement.basis_a]
    )
    db = geo_discord_one_sided(
        state, "B", cfg, extra_warm_starts=[ab.optimal_measurement.basis_b]
    )
    flagged = (
        ab.value < max(da.value, db.value) - CHAIN_TOL
        or ab.value < ab.lower_bound - BOUND_TOL
    )
    report = {
        "dim_a": state.dim_a,
        "dim_b": state.dim_b,
        "purity": purity(state.rho),
        "mutual_information": mutual_information(state),
        "geo_one_sided_a": da.value,
        "geo_one_sided_b": db.value,
        "geo_two_sided": ab.value,
        "lower_bound_a": da.lower_bound,
        "lower_bound_b": db.lower_bound,
        "lower_bound_two_sided": ab.lower_bound,
        "restarts": ab.optimizer_report.restarts_run,
        "iterations": ab.optimizer_report.iterations_total,
        "converged": ab.optimizer_report.converged,
        "flagged": flagged,
    }
    if with_entropic:
        eab = discord_two_sided(state, cfg)
        m = eab.optimal_measurement
        report["entropic_one_sided_a"] = discord_one_sided(
            state, "A", cfg, extra_warm_starts=[m.basis_a]
        ).value
        report["entropic_one_sided_b"] = discord_one_sided(
            state, "B", cfg, extra_warm_starts=[m.basis_b]
        ).value
        report["entropic_two_sided"] = eab.value
    return report


def cmd_compute(args) -> int:
    state = load_state(args.state_file)
    report = build_report(state, _config(args), args.entropic)
    if args.format == "json":
        text = json.dumps(report, indent=2, default=float) + "\n"
    else:
        keys = list(report)
        text = ",".join(keys) + "\n" + ",".join(_fmt(report[k]) for k in keys) + "\n"
    _write(args, text)
    return 3 if report["flagged"] else 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(args.family, args.m, args.x_start, args.x_end, args.points)
    cfg = _config(args)
    make = werner if spec.family == "werner" else isotropic
    closed = werner_geo_closed if spec.family == "werner" else isotropic_geo_closed
    lines = ["family,m,x,geo_closed,geo_numeric,lower_bound,abs_gap"]
    ok = True
    for x in np.linspace(spec.x_start, spec.x_end, spec.points):
        x = float(x)
        res = geo_discord_two_sided(make(spec.m, x), cfg)
        want = closed(spec.m, x)
        gap = abs(want - res.value)
        ok = ok and gap <= CHAIN_TOL
        lines.append(
            f"{spec.family},{spec.m},{_fmt(x)},{_fmt(want)},{_fmt(res.value)},"
            f"{_fmt(res.lower_bound)},{_fmt(gap)}"
        )
    _write(args, "\n".join(lines) + "\n")
    return 0 if ok else 3


def cmd_verify(args) -> int:
    results = run_verify(quick=args.quick, seed=args.seed, restarts=args.restarts)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def cmd_audit(args) -> int:
    try:
        na, nb = (int(p) for p in args.dims.lower().split("x"))
    except ValueError:
        raise DomainError(f"dims must look like 2x2, got {args.dims!r}")
    rep = audit_states(args.states, args.seed, dims=(na, nb))
    print(f"audited {rep.n_states} random ({na},{nb}) states, seed {rep.seed}: "
          f"{rep.checks} checks, {len(rep.violations)} violations")
    for name in sorted(rep.worst_margins):
        print(f"  {name}: worst margin {_fmt(rep.worst_margins[name])}")
    for v in rep.violations:
        print(f"  violation: {v}")
    return 0 if not rep.violations else 1


def _add_common(p):
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12,
                   help="optimizer value tolerance")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twodiscord",
        description="Entropic and geometric quantum discord of bipartite states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="discord report for a JSON state file")
    p.add_argument("state_file")
    p.add_argument("--entropic", action="store_true",
                   help="also run the (slower) entropic optimizations")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="CSV sweep of a closed-form family")
    p.add_argument("--family", choices=("werner", "isotropic"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x-start", type=float, required=True)
    p.add_argument("--x-end", type=float, required=True)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the worked-example and property table")
    p.add_argument("--quick", action="store_true",
                   help="trimmed table without the m=4 sweeps")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="randomized invariant audit")
    p.add_argument("--states", type=int, default=100)
    p.add_argument("--dims", default="2x2")
    _add_common(p)
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: state file not found: {exc.filename}", file=sys.stderr)
        return 2
    except DiscordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
