"""Command-line front end.

Subcommands: ``compute`` evaluates a measure or residual on a state,
``verify`` runs the verification suites, ``sweep`` regenerates one
figure grid as CSV, ``roots`` locates the two critical orders, and
``report`` writes every grid as CSV plus a rendered PNG.

Exit codes: 0 success, 1 a verification check failed, 2 malformed input
(state file, preset, figure id, grid spec, parameter out of range),
3 unsupported dimensions or rank.  GWC_THREADS caps internal
parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import urllib.parse
from dataclasses import dataclass
from pathlib import Path

from .analysis import find_convexity_threshold, find_monogamy_threshold
from .measures import (
    concurrence_mixed,
    concurrence_of_assistance,
    concurrence_pure,
    gwc_mixed_two_qubit,
    gwc_pure,
    gwcoa_bound,
)
from .multiqubit import (
    indicator_tau,
    indicator_tau_mixed,
    monogamy_residual,
    polygamy_residual,
    residual_422,
    three_tangle_pure3q,
)
from .roof import OptimizerBudget
from .states import (
    DensityOperator,
    DimensionError,
    PureState,
    StateFormatError,
    load_state,
)
from .sweeps import FIGURE_IDS, canonical_name, sweep_rows, write_sweep
from .util import fmt12, parse_grid
from .verify import run_suites

__all__ = ["RunConfig", "main", "cmd_compute", "cmd_verify", "cmd_sweep"]

_MEASURES = (
    "gwc",
    "concurrence",
    "coa",
    "gwcoa",
    "tau",
    "tau-mixed",
    "monogamy",
    "polygamy",
    "tangle3",
    "residual422",
)


@dataclass
class RunConfig:
    """Parsed invocation; fields not used by a subcommand stay None."""

    command: str
    state_source: str | None = None
    measure: str | None = None
    omega: object = None  # ndarray of orders from --omega
    power: float | None = None
    alpha: float | None = None
    beta: float | None = None
    focus: int = 0
    budget: OptimizerBudget | None = None
    trials: int | None = None
    seed: int | None = None
    tol: float | None = None
    restarts: int | None = None
    exponent: str = "omega"
    fig_id: str | None = None
    suites: tuple = ()
    out: str | None = None
    format: str = "table"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        get = lambda name, default=None: getattr(args, name, default)
        budget = None
        if get("restarts") is not None or get("m_max") is not None:
            budget = OptimizerBudget(
                restarts=get("restarts") or 3,
                max_iters=25,
                seed=get("seed") or 0,
                m_max=get("m_max") or 8,
            )
        omega = get("omega")
        return cls(
            command=args.command,
            state_source=get("state"),
            measure=get("measure"),
            omega=parse_grid(omega) if omega is not None else None,
            power=get("power"),
            alpha=get("alpha"),
            beta=get("beta"),
            focus=get("focus", 0) or 0,
            budget=budget,
            trials=get("trials"),
            seed=get("seed"),
            tol=get("tol"),
            restarts=get("restarts"),
            exponent=get("mc5_exponent", "omega") or "omega",
            fig_id=get("id"),
            suites=tuple(get("suites") or ()),
            out=get("out"),
            format=get("format", "table") or "table",
        )


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return fmt12(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_cell(v) for v in value)
    return str(value)


def _render_table(docs) -> str:
    keys = []
    for doc in docs:
        for key in doc:
            if key not in keys:
                keys.append(key)
    rows = [[_cell(doc.get(k, "")) for k in keys] for doc in docs]
    widths = [max(len(k), max(len(r[i]) for r in rows)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(widths[i]) for i, k in enumerate(keys)).rstrip()]
    for row in rows:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(len(keys))).rstrip())
    return "\n".join(lines)


def _emit(docs, cfg: RunConfig) -> None:
    if cfg.format == "json":
        text = json.dumps(docs if len(docs) != 1 else docs[0], indent=2)
    else:
        text = _render_table(docs)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
        print(f"wrote {cfg.out}")
    else:
        print(text)


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

def _measure_doc(mv) -> dict:
    doc = {"measure": mv.measure, "value": mv.value}
    if mv.omega is not None:
        doc["omega"] = mv.omega
    if mv.unverified:
        doc["unverified"] = True
    return doc


def _residual_doc(rep) -> dict:
    return {
        "kind": rep.kind,
        "omega": rep.omega,
        "power": rep.power,
        "lhs": rep.lhs,
        "rhs_terms": list(rep.rhs_terms),
        "slack": rep.slack,
        "satisfied": rep.satisfied,
        "unverified": rep.unverified,
    }


def _need_pure(state, measure):
    if not isinstance(state, PureState):
        raise StateFormatError(
            f"measure {measure!r} needs a pure state"
            + ("; use tau-mixed for density operators" if measure == "tau" else "")
        )
    return state


def _as_density(state) -> DensityOperator:
    return state.density() if isinstance(state, PureState) else state


def _p422_gamma(source: str) -> float:
    if not source.startswith("preset:"):
        raise StateFormatError(
            "measure 'residual422' needs a preset:p422 state source so the "
            "family parameter gamma is known"
        )
    parsed = urllib.parse.urlparse(source)
    if parsed.path != "p422":
        raise StateFormatError(
            f"measure 'residual422' needs the p422 preset family, got {parsed.path!r}"
        )
    params = urllib.parse.parse_qs(parsed.query)
    return float(params["gamma"][-1]) if "gamma" in params else math.pi / 4.0


def _compute_one(cfg: RunConfig, state, w: float) -> dict:
    m = cfg.measure
    if m == "gwc":
        if isinstance(state, PureState):
            return _measure_doc(gwc_pure(state, (cfg.focus,), w))
        return _measure_doc(gwc_mixed_two_qubit(state, w))
    if m == "gwcoa":
        return _measure_doc(gwcoa_bound(_as_density(state), w))
    if m == "tau":
        val = indicator_tau(_need_pure(state, m), cfg.focus, w)
        return {
            "measure": "tau",
            "value": val.value,
            "focus": val.focus,
            "omega": val.omega,
            "exact": val.exact,
        }
    if m == "tau-mixed":
        val = indicator_tau_mixed(_as_density(state), cfg.focus, w, budget=cfg.budget)
        return {
            "measure": "tau-mixed",
            "value": val.value,
            "focus": val.focus,
            "omega": val.omega,
            "exact": val.exact,
        }
    if m == "monogamy":
        beta = cfg.beta if cfg.beta is not None else (cfg.power or 2.0)
        return _residual_doc(monogamy_residual(_need_pure(state, m), cfg.focus, w, beta=beta))
    if m == "polygamy":
        alpha = cfg.alpha if cfg.alpha is not None else (cfg.power or 1.0)
        return _residual_doc(polygamy_residual(_need_pure(state, m), cfg.focus, w, alpha=alpha))
    if m == "residual422":
        gamma = _p422_gamma(cfg.state_source)
        r_c, r_w = residual_422(gamma, w, exponent=cfg.exponent)
        return {
            "measure": "residual422",
            "gamma": gamma,
            "omega": float(w),
            "exponent": cfg.exponent,
            "r_c": r_c,
            "r_omega": r_w,
        }
    raise StateFormatError(f"unknown measure {m!r}")


def cmd_compute(cfg: RunConfig) -> int:
    state = load_state(cfg.state_source)
    if cfg.measure == "concurrence":
        mv = (
            concurrence_pure(state, (cfg.focus,))
            if isinstance(state, PureState)
            else concurrence_mixed(state)
        )
        docs = [_measure_doc(mv)]
    elif cfg.measure == "coa":
        docs = [_measure_doc(concurrence_of_assistance(_as_density(state)))]
    elif cfg.measure == "tangle3":
        docs = [{"measure": "tangle3", "value": three_tangle_pure3q(_need_pure(state, "tangle3"))}]
    else:
        docs = [_compute_one(cfg, state, float(w)) for w in cfg.omega]
    _emit(docs, cfg)
    return 0


# ---------------------------------------------------------------------------
# verify / sweep / roots / report
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    results = run_suites(
        list(cfg.suites) or ["all"],
        trials=cfg.trials,
        seed=cfg.seed,
        tol=cfg.tol,
        restarts=cfg.restarts,
    )
    if cfg.format == "json":
        docs = [
            {
                "suite": r.suite,
                "passed": r.passed,
                "elapsed": round(r.elapsed, 3),
                "checks": [
                    {"name": c.name, "passed": c.passed, "worst": c.worst, "detail": c.detail}
                    for c in r.checks
                ],
            }
            for r in results
        ]
        print(json.dumps(docs, indent=2))
    else:
        for r in results:
            for c in r.checks:
                flag = "PASS" if c.passed else "FAIL"
                print(f"{r.suite:12s} {c.name:40s} {flag}  worst {c.worst:+.3e}  {c.detail}")
            print(f"{r.suite:12s} {'-- suite ' + ('passed' if r.passed else 'FAILED'):40s} "
                  f"      ({r.elapsed:.2f} s)")
    failed = sum(1 for r in results for c in r.checks if not c.passed)
    total = sum(len(r.checks) for r in results)
    print(f"{total - failed}/{total} checks passed")
    return 0 if failed == 0 else 1


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.fig_id:
        raise StateFormatError("sweep needs --id (fig1..fig15)")
    raw = cfg.out or canonical_name(cfg.fig_id)
    out = Path(raw)
    if raw.endswith(("/", "\\")) or out.is_dir():
        out = out / canonical_name(cfg.fig_id)
    out.parent.mkdir(parents=True, exist_ok=True)
    path = write_sweep(cfg.fig_id, out, exponent=cfg.exponent)
    print(f"wrote {path}")
    return 0


def cmd_roots(cfg: RunConfig) -> int:
    docs = []
    for name, result in (
        ("convexity-threshold", find_convexity_threshold()),
        ("monogamy-threshold", find_monogamy_threshold()),
    ):
        docs.append(
            {
                "name": name,
                "root": result.root,
                "bracket": list(result.bracket),
                "residual": result.residual,
                "iterations": result.iterations,
            }
        )
    _emit(docs, cfg)
    return 0


def cmd_report(cfg: RunConfig) -> int:
    from .plotting import render_figure

    ids = FIGURE_IDS if cfg.fig_id in (None, "all") else (cfg.fig_id,)
    outdir = Path(cfg.out or "report")
    outdir.mkdir(parents=True, exist_ok=True)
    for fig_id in ids:
        header, rows = sweep_rows(fig_id, exponent=cfg.exponent)
        csv_path = outdir / canonical_name(fig_id)
        write_sweep(fig_id, csv_path, exponent=cfg.exponent)
        png_path = csv_path.with_suffix(".png")
        render_figure(fig_id, header, rows, png_path)
        print(f"wrote {csv_path} and {png_path} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwc",
        description="Numerical toolkit for an order-parameterized concurrence "
        "family: measures, monogamy/polygamy residuals, indicators, "
        "verification suites, and figure grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="evaluate a measure or residual on a state")
    pc.add_argument("--state", required=True, help="JSON file path or preset:name?k=v")
    pc.add_argument("--measure", required=True, choices=_MEASURES)
    pc.add_argument("--omega", default="0.9", help="order: a value or lo:hi:step grid")
    pc.add_argument("--power", type=float, help="generic power (beta or alpha)")
    pc.add_argument("--alpha", type=float, help="polygamy power in (0, 1]")
    pc.add_argument("--beta", type=float, help="monogamy power >= 2")
    pc.add_argument("--focus", type=int, default=0, help="focus subsystem index")
    pc.add_argument("--restarts", type=int, help="optimizer restarts (tau-mixed)")
    pc.add_argument("--m-max", dest="m_max", type=int, help="optimizer ensemble cap")
    pc.add_argument("--seed", type=int, help="optimizer seed (tau-mixed)")
    pc.add_argument(
        "--mc5-exponent",
        dest="mc5_exponent",
        choices=("omega", "two"),
        default="omega",
        help="outer exponent convention for residual422",
    )
    pc.add_argument("--out", help="write the result here instead of stdout")
    pc.add_argument("--format", choices=("table", "json"), default="table")

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument(
        "suites",
        nargs="*",
        default=["all"],
        help="suite names (closedform coa roots grids examples properties "
        "indicators residual422) or 'all'",
    )
    pv.add_argument("--trials", type=int, help="override trial counts")
    pv.add_argument("--seed", type=int, help="override corpus seed")
    pv.add_argument("--tol", type=float, help="override oracle tolerance")
    pv.add_argument("--restarts", type=int, help="override optimizer restarts")
    pv.add_argument("--format", choices=("table", "json"), default="table")

    ps = sub.add_parser("sweep", help="regenerate one figure grid as CSV")
    ps.add_argument("--id", required=True, help="figure id, fig1..fig15")
    ps.add_argument("--out", help="output path (default: canonical figNN.csv)")
    ps.add_argument(
        "--mc5-exponent",
        dest="mc5_exponent",
        choices=("omega", "two"),
        default="omega",
        help="outer exponent convention (fig15 only)",
    )
    ps.add_argument("--seed", type=int, help="accepted for interface uniformity; grids are deterministic")

    pr = sub.add_parser("roots", help="locate both critical orders by bisection")
    pr.add_argument("--out", help="write the result here instead of stdout")
    pr.add_argument("--format", choices=("table", "json"), default="table")

    pp = sub.add_parser("report", help="write every figure grid as CSV plus a PNG render")
    pp.add_argument("--id", default="all", help="figure id or 'all'")
    pp.add_argument("--out", default="report", help="output directory")
    pp.add_argument(
        "--mc5-exponent",
        dest="mc5_exponent",
        choices=("omega", "two"),
        default="omega",
        help="outer exponent convention (fig15 only)",
    )
    return parser


_DISPATCH = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "roots": cmd_roots,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        return _DISPATCH[cfg.command](cfg)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:  # StateFormatError, bad grids, bad parameters
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
