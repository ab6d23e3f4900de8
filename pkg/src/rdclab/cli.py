"""Command-line front end: curve emission, discrepancy report, region runs.

Subcommands
  gauss-curves        printed/oracle tradeoff curves per rate plus the
                      universal decoder sweep at the largest rate (CSV).
  discrepancy-report  printed-vs-oracle D(C, R) table over a (C, R) grid
                      (JSON), branch-by-branch agreement counts included.
  discrete-region     frontier, extreme points and outer-bound verdicts for a
                      finite-alphabet source (CSV + JSON).
  bounds              corner-bound harness instances (JSON).

Outputs are deterministic given the flags (and seed): reruns are
byte-identical.  CSV columns are ``curve_id,model,rate_nats,c_nats,d,branch``
with '.' decimals, 17 significant digits, and the literals ``inf``/``-inf``
for infinities.  Exit codes: 0 success, 2 infeasible configuration or size
guard, 3 flag/schema error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import bounds_eval, discrete_region, gaussian_tradeoff, universal_gaussian
from .errors import InfeasibleBudgetError, ParameterError, RdcError, SizeGuardError
from .gaussian_model import GaussianPairSource, differential_entropy

CURVE_HEADER = "curve_id,model,rate_nats,c_nats,d,branch"

MODEL_VOCAB = ("printed", "oracle", "universal", "discrete")
BRANCH_VOCAB = (
    "case1",
    "case2",
    "case3",
    "sweep",
    "frontier",
    "extreme_a",
    "extreme_b",
    "infeasible",
)


@dataclass(frozen=True)
class CurveRecord:
    curve_id: str
    model: str
    rate_nats: float
    c_nats: float
    d: float
    branch: str

    def __post_init__(self) -> None:
        if self.model not in MODEL_VOCAB:
            raise ParameterError(f"unknown model {self.model!r}")
        if self.branch not in BRANCH_VOCAB:
            raise ParameterError(f"unknown branch {self.branch!r}")


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(float(value), ".17g")


def write_curve_csv(path: str | Path, records: list[CurveRecord]) -> None:
    lines = [CURVE_HEADER]
    for r in records:
        lines.append(
            f"{r.curve_id},{r.model},{_fmt(r.rate_nats)},{_fmt(r.c_nats)},"
            f"{_fmt(r.d)},{r.branch}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_curve_csv(path: str | Path) -> list[CurveRecord]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CURVE_HEADER:
        raise ParameterError(f"bad curve CSV header in {path}")
    records = []
    for line in lines[1:]:
        curve_id, model, rate, c, d, branch = line.split(",")
        records.append(
            CurveRecord(curve_id, model, float(rate), float(c), float(d), branch)
        )
    return records


def _json_safe(obj):
    """Replace non-finite floats with their string literals for strict JSON."""
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_json_safe(v) for v in obj.tolist()]
    return obj


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n")


def bundled_source_path(name: str = "flip01_source") -> Path:
    """Filesystem path of a data file shipped with the package."""
    return Path(resources.files("rdclab").joinpath(f"data/{name}.json"))


def load_discrete_source(path: str | Path):
    """Read the discrete-source JSON schema; returns (source, encoder).

    Schema: {"x_values": [...], "s_size": k, "pmf": [[...]], "encoder": [[...]]}
    with pmf rows indexed by x and columns by s.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read source file {path}: {exc}") from exc
    required = {"x_values", "s_size", "pmf", "encoder"}
    missing = required - set(payload)
    if missing:
        raise ParameterError(f"source file missing keys: {sorted(missing)}")
    src = discrete_region.DiscreteSource(
        x_values=np.asarray(payload["x_values"], dtype=np.float64),
        s_size=int(payload["s_size"]),
        pmf=np.asarray(payload["pmf"], dtype=np.float64),
    )
    encoder = discrete_region.Channel(np.asarray(payload["encoder"], dtype=np.float64))
    if encoder.n_in != src.x_values.size:
        raise ParameterError("encoder row count must match x_values length")
    return src, encoder


def _gaussian_source(args) -> GaussianPairSource:
    if args.sigma_x <= 0.0 or args.sigma_s <= 0.0:
        raise ParameterError("--sigma-x and --sigma-s must be positive")
    return GaussianPairSource(
        mu_x=0.0,
        var_x=args.sigma_x**2,
        mu_s=0.0,
        var_s=args.sigma_s**2,
        cov_xs=args.rho * args.sigma_x * args.sigma_s,
    )


def cmd_gauss_curves(args) -> int:
    if abs(args.rho) >= 1.0:
        print(f"infeasible configuration: |rho| = {abs(args.rho)} >= 1", file=sys.stderr)
        return 2
    rates = [float(tok) for tok in args.rates.split(",") if tok.strip() != ""]
    if not rates or any(r < 0.0 for r in rates):
        raise ParameterError("--rates must be a comma list of nonnegative numbers")
    if args.points < 2:
        raise ParameterError("--points must be >= 2")
    src = _gaussian_source(args)
    h_s = differential_entropy(src.var_s)
    records: list[CurveRecord] = []

    for rate in rates:
        for pt in gaussian_tradeoff.boundary_curve(src, rate, args.points):
            records.append(
                CurveRecord(
                    f"printed_R{rate:g}", "printed", rate, pt.closs, pt.distortion,
                    "case2",
                )
            )
    for rate in rates:
        thr = gaussian_tradeoff.c_threshold(src, rate)
        cs = np.unique(np.linspace(thr, h_s, args.points))
        for c in cs:
            verdict = gaussian_tradeoff.dcr_distortion_oracle(src, float(c), rate)
            records.append(
                CurveRecord(
                    f"oracle_R{rate:g}", "oracle", rate, float(c),
                    verdict.value if verdict.status == "feasible" else math.inf,
                    verdict.branch,
                )
            )
    r_star = max(rates)
    rep = universal_gaussian.encoder_for_rate(src, r_star)
    gammas = np.union1d(
        np.linspace(0.0, 2.5 * args.sigma_x, args.points),
        [universal_gaussian.mmse_gain(rep)],
    )
    for d, c in universal_gaussian.region_sweep(src, rep, gammas):
        records.append(
            CurveRecord(f"universal_R{r_star:g}", "universal", r_star, c, d, "sweep")
        )

    write_curve_csv(args.out, records)
    print(
        f"wrote {len(records)} records to {args.out}; "
        f"max useful rate = {gaussian_tradeoff.max_useful_rate(src):.6f} nats"
    )
    return 0


def cmd_discrepancy_report(args) -> int:
    if abs(args.rho) >= 1.0:
        print(f"infeasible configuration: |rho| = {abs(args.rho)} >= 1", file=sys.stderr)
        return 2
    if args.grid_c < 2 or args.grid_r < 2:
        raise ParameterError("--grid-c and --grid-r must be >= 2")
    src = _gaussian_source(args)
    h_s = differential_entropy(src.var_s)
    cmin = gaussian_tradeoff.c_min(src)
    span = max(h_s - cmin, 0.25)
    c_grid = np.linspace(cmin - 0.1 * span, h_s + 0.1 * span, args.grid_c)
    r_grid = np.linspace(0.02, 0.5, args.grid_r)
    cells = []
    summary: dict[str, dict[str, int]] = {}
    for r in r_grid:
        for c in c_grid:
            printed = gaussian_tradeoff.dcr_distortion_printed(src, float(c), float(r))
            oracle = gaussian_tradeoff.dcr_distortion_oracle(src, float(c), float(r))
            if printed.status == "feasible" and oracle.status == "feasible":
                agree = abs(printed.value - oracle.value) <= 1e-9
            else:
                agree = printed.status == oracle.status
            branch = printed.branch
            bucket = summary.setdefault(branch, {"cells": 0, "agree": 0})
            bucket["cells"] += 1
            bucket["agree"] += int(agree)
            cells.append(
                {
                    "c": float(c),
                    "r": float(r),
                    "printed": printed.value
                    if printed.status == "feasible"
                    else printed.status,
                    "oracle": oracle.value
                    if oracle.status == "feasible"
                    else oracle.status,
                    "printed_branch": branch,
                    "agree": bool(agree),
                }
            )
    report = {
        "source": {"rho": args.rho, "sigma_x": args.sigma_x, "sigma_s": args.sigma_s},
        "c_grid": c_grid,
        "r_grid": r_grid,
        "cells": cells,
        "summary": summary,
        "total_cells": len(cells),
    }
    write_json(args.out, report)
    print(f"wrote discrepancy report ({len(cells)} cells) to {args.out}")
    return 0


def cmd_discrete_region(args) -> int:
    src, encoder = load_discrete_source(args.source)
    levels = args.levels
    d_budget = args.d_budget if args.d_budget is not None else src.var_x()

    frontier = discrete_region.region_approx(src, encoder, levels)
    ext_a = discrete_region.extreme_point_a(src, encoder)
    sol = discrete_region.c_min_solver(src, encoder, d_budget, levels)
    if not sol.feasible:
        raise InfeasibleBudgetError(
            f"no decoder on the grid meets the distortion budget {d_budget}"
        )
    ext_b = discrete_region.extreme_point_b(src, encoder, d_budget, levels)
    violations, min_slack, checked = discrete_region.outer_bound_sweep(
        src, encoder, levels
    )
    rate = discrete_region.mutual_info_xz(src, encoder)

    records = [
        CurveRecord("frontier", "discrete", rate, c, d, "frontier")
        for d, c in frontier
    ]
    records.append(
        CurveRecord("extreme_a", "discrete", rate, ext_a[1], ext_a[0], "extreme_a")
    )
    records.append(
        CurveRecord("extreme_b", "discrete", rate, ext_b[1], ext_b[0], "extreme_b")
    )
    write_curve_csv(f"{args.out}.csv", records)

    verdict = {
        "encoder_rate_nats": rate,
        "levels": levels,
        "d_budget": d_budget,
        "frontier_size": len(frontier),
        "extreme_a": {"d": ext_a[0], "c": ext_a[1]},
        "extreme_b": {"d": ext_b[0], "c": ext_b[1]},
        "c_min": sol.c_min,
        "p_xhat_at_c_min": {
            "support": sol.p_xhat.support,
            "probs": sol.p_xhat.probs,
        },
        "outer_bound": {
            "decoders_checked": checked,
            "violations": violations,
            "min_slack": min_slack,
        },
    }
    write_json(f"{args.out}.json", verdict)
    print(
        f"wrote {len(records)} curve records to {args.out}.csv and the verdict "
        f"to {args.out}.json ({violations} outer-bound violations in {checked})"
    )
    return 0


def cmd_bounds(args) -> int:
    if abs(args.rho) >= 1.0:
        print(f"infeasible configuration: |rho| = {abs(args.rho)} >= 1", file=sys.stderr)
        return 2
    if args.rate is not None and args.instances != 1:
        raise ParameterError("use either --rate or --instances, not both")
    src = _gaussian_source(args)
    records = bounds_eval.theorem5_gaussian_harness(
        src, rate=args.rate, seed=args.seed, n=args.instances
    )
    payload = {
        "n": len(records),
        "seed": args.seed,
        "all_sandwich": all(r.sandwich_holds for r in records),
        "all_gap": all(r.gap_holds for r in records),
        "all_ratio": all(r.ratio_holds for r in records),
        "instances": [
            {
                "rate": r.rate,
                "d1": r.instance.d1,
                "d3": r.instance.d3,
                "c3": r.c3,
                "d_b": r.instance.d_b,
                "sigma_xhat3": r.instance.sigma_xhat3,
                "gap_lower_bound": r.gap_lb,
                "ratio_lower_bound": r.ratio_lb,
                "gap_holds": r.gap_holds,
                "ratio_holds": r.ratio_holds,
                "sandwich_holds": r.sandwich_holds,
                "upper_left_gap_bound": r.gap_ub,
                "upper_left_ratio_bound": r.ratio_ub,
                "degenerate": r.degenerate,
            }
            for r in records
        ],
    }
    write_json(args.out, payload)
    print(f"wrote {len(records)} bound instances to {args.out}")
    return 0


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 3 on flag errors, not argparse's default 2
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdclab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gauss-curves", help="emit Gaussian tradeoff curves as CSV")
    p.add_argument("--rho", type=float, default=0.7)
    p.add_argument("--sigma-x", type=float, default=1.0)
    p.add_argument("--sigma-s", type=float, default=1.0)
    p.add_argument("--rates", type=str, default="0.05,0.1,0.15,0.2,0.34")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=cmd_gauss_curves)

    p = sub.add_parser(
        "discrepancy-report", help="tabulate printed vs oracle D(C, R) as JSON"
    )
    p.add_argument("--grid-c", type=int, default=50)
    p.add_argument("--grid-r", type=int, default=50)
    p.add_argument("--rho", type=float, default=0.7)
    p.add_argument("--sigma-x", type=float, default=1.0)
    p.add_argument("--sigma-s", type=float, default=1.0)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=cmd_discrepancy_report)

    p = sub.add_parser(
        "discrete-region", help="finite-alphabet frontier and verdicts (CSV + JSON)"
    )
    p.add_argument("--source", type=str, required=True)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--d-budget", type=float, default=None)
    p.add_argument("--out", type=str, required=True, help="output path prefix")
    p.set_defaults(func=cmd_discrete_region)

    p = sub.add_parser("bounds", help="corner-bound harness instances (JSON)")
    p.add_argument("--rho", type=float, default=0.7)
    p.add_argument("--sigma-x", type=float, default=1.0)
    p.add_argument("--sigma-s", type=float, default=1.0)
    p.add_argument("--rate", type=float, default=None)
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        return args.func(args)
    except (SizeGuardError, InfeasibleBudgetError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, RdcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
