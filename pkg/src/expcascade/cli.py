"""Command-line front end.

Subcommands: run, ensemble, sweep-wc, sweep-inequality, validate, figure.
Configs are flat JSON files mirroring SimConfig field names; command-line
overrides are applied after the file is parsed. All outputs are CSVs (plus
optional self-contained SVG renderings) written atomically into --out
(default: $EXPCASCADE_OUT or the working directory).

Exit codes: 0 success, 1 config error, 2 runtime failure (solver
non-convergence, or failed validation for the validate subcommand).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import experiment, output, svgchart
from .consumption import SolverError
from .experiment import ConfigError, SimConfig

FIG1_DEFAULT_PARAMS = ((0.5, 0.5), (0.5, 0.3), (0.75, 0.3))
FIG1_DEFAULT_RHO = 4.0
FIG45_DEFAULT = {"w": 0.5, "c": 0.3, "rho": 1.0}
SWEEP_WC_DEFAULT_RHOS = (0.5, 4.0)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="expcascade",
        description="Simulate upward-looking consumption on homophilic perception networks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, runs_default=None):
        p.add_argument("--config", help="JSON config file (flat SimConfig keys)")
        p.add_argument(
            "--out",
            default=os.environ.get("EXPCASCADE_OUT", "."),
            help="output directory (default: $EXPCASCADE_OUT or '.')",
        )
        p.add_argument("--seed", type=int)
        p.add_argument("--rho", type=float)
        p.add_argument("--w", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--n", type=int)
        p.add_argument(
            "--format", choices=("csv", "csv+svg"), default="csv", dest="fmt"
        )
        if runs_default is not None:
            p.add_argument("--runs", type=int, default=runs_default)

    p_run = sub.add_parser("run", help="one seeded run: agent table and summary")
    add_common(p_run)
    p_run.add_argument(
        "--dump-graph", action="store_true", help="also write the edge list CSV"
    )

    p_ens = sub.add_parser("ensemble", help="aggregate statistics over seeded runs")
    add_common(p_ens, runs_default=100)

    p_wc = sub.add_parser(
        "sweep-wc", help="(w, c) grid sweep: CoV ratios and KS non-rejection"
    )
    add_common(p_wc, runs_default=100)
    p_wc.add_argument(
        "--rhos",
        type=_float_list,
        default=list(SWEEP_WC_DEFAULT_RHOS),
        help="comma-separated homophily values (default 0.5,4)",
    )
    p_wc.add_argument("--w-grid", type=_float_list, default=None)
    p_wc.add_argument("--c-grid", type=_float_list, default=None)

    p_iq = sub.add_parser(
        "sweep-inequality", help="saving rate vs income Gini across sigma and rho"
    )
    add_common(p_iq, runs_default=100)
    p_iq.add_argument(
        "--rhos",
        type=_float_list,
        default=list(experiment.DEFAULT_RHO_GRID),
        help="comma-separated homophily values (default 0.5,1,1.5,4)",
    )
    p_iq.add_argument(
        "--sigmas",
        type=_float_list,
        default=list(experiment.DEFAULT_SIGMA_GRID),
        help="comma-separated log-normal dispersion values",
    )

    p_val = sub.add_parser("validate", help="run the four stylised-fact checks")
    add_common(p_val, runs_default=100)

    p_fig = sub.add_parser("figure", help="emit one figure dataset (or all)")
    add_common(p_fig, runs_default=100)
    p_fig.add_argument(
        "--which",
        choices=("fig1", "fig23", "fig45", "fig67", "fig8", "all"),
        default="all",
    )
    return parser


def load_config(args):
    """Effective SimConfig: file (if given) plus command-line overrides."""
    data = {}
    if args.config:
        try:
            with open(args.config, "r") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"malformed config {args.config} at line {exc.lineno}: {exc.msg}"
            )
        if not isinstance(data, dict):
            raise ConfigError(f"config {args.config} must be a JSON object")
    for key in ("seed", "rho", "w", "c", "n"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return SimConfig.from_dict(data)


def _write(args, name, columns, rows, config, sweep=None):
    path = os.path.join(args.out, name)
    output.write_csv(path, columns, rows, config=config, sweep=sweep)
    print(f"wrote {path}")


def _write_svg(args, name, text):
    path = os.path.join(args.out, name)
    output.atomic_write_text(path, text)
    print(f"wrote {path}")


def cmd_run(args):
    config = load_config(args)
    result, graph = experiment.run_single_with_graph(config)
    cols, rows = output.run_agent_rows(result)
    _write(args, "run_agents.csv", cols, rows, config.to_dict())
    cols, rows = output.run_summary_rows(result)
    _write(args, "run_summary.csv", cols, rows, config.to_dict())
    if args.dump_graph:
        cols, rows = output.graph_rows(graph)
        _write(args, "graph_edges.csv", cols, rows, config.to_dict())
    return 0


def cmd_ensemble(args):
    config = load_config(args)
    summary = experiment.run_ensemble(config, args.runs)
    cols, rows = output.ensemble_rows(summary)
    _write(
        args, "ensemble_summary.csv", cols, rows, config.to_dict(),
        sweep={"runs": args.runs},
    )
    return 0


def _wc_grids(args, config):
    grids = {}
    for rho in args.rhos:
        base = config.with_params(rho=rho)
        grids[rho] = experiment.sweep_wc_grid(
            base, w_values=args.w_grid, c_values=args.c_grid, runs=args.runs
        )
    return grids


def _emit_wc_products(args, config, grids):
    sweep_meta = {
        "runs": args.runs,
        "rhos": args.rhos,
        "w_grid": args.w_grid,
        "c_grid": args.c_grid,
    }
    cols, rows = output.fig23_rows(grids)
    _write(args, "fig23_cov_ratio.csv", cols, rows, config.to_dict(), sweep=sweep_meta)
    cols, rows = output.fig67_rows(grids)
    _write(
        args, "fig67_lognormality.csv", cols, rows, config.to_dict(), sweep=sweep_meta
    )
    if args.fmt == "csv+svg":
        for rho, grid in grids.items():
            ws = sorted({w for w, _ in grid})
            cs = sorted({c for _, c in grid})
            ratio = [[grid[(w, c)].mean("cov_ratio") for w in ws] for c in cs]
            frac = [[grid[(w, c)].ks_nonreject_fraction for w in ws] for c in cs]
            tag = f"rho{rho:g}".replace(".", "p")
            _write_svg(
                args,
                f"fig23_cov_ratio_{tag}.svg",
                svgchart.heatmap(
                    ws, cs, ratio, "w", "c",
                    f"Expenditure/income CoV ratio, rho={rho:g}",
                ),
            )
            _write_svg(
                args,
                f"fig67_lognormality_{tag}.svg",
                svgchart.heatmap(
                    ws, cs, frac, "w", "c",
                    f"KS non-rejection fraction, rho={rho:g}",
                ),
            )


def cmd_sweep_wc(args):
    config = load_config(args)
    grids = _wc_grids(args, config)
    _emit_wc_products(args, config, grids)
    return 0


def _emit_fig8_products(args, config, rows_data):
    sweep_meta = {"runs": args.runs, "rhos": args.rhos, "sigmas": args.sigmas}
    cols, rows = output.fig8_rows(rows_data)
    _write(
        args, "fig8_savings_gini.csv", cols, rows, config.to_dict(), sweep=sweep_meta
    )
    if args.fmt == "csv+svg":
        series = []
        for rho in args.rhos:
            pts = [r for r in rows_data if r["rho"] == rho]
            series.append(
                (
                    f"rho={rho:g}",
                    [p["gini_mean"] for p in pts],
                    [p["saving_rate_mean"] for p in pts],
                )
            )
        _write_svg(
            args,
            "fig8_savings_gini.svg",
            svgchart.line_chart(
                series, "income Gini", "aggregate saving rate",
                "Saving rate vs inequality",
            ),
        )


def cmd_sweep_inequality(args):
    config = load_config(args)
    rows_data = experiment.sweep_inequality(
        config, sigma_values=args.sigmas, rho_values=args.rhos, runs=args.runs
    )
    _emit_fig8_products(args, config, rows_data)
    return 0


def cmd_validate(args):
    config = load_config(args)
    report = experiment.stylised_facts_report(config, args.runs)
    for fact in report.facts:
        status = "N/A " if not fact.applicable else ("PASS" if fact.passed else "FAIL")
        print(f"[{status}] fact ({fact.fact}) {fact.name}: {fact.detail}")
    cols, rows = output.validation_rows(report)
    _write(
        args, "validation_report.csv", cols, rows, config.to_dict(),
        sweep={"runs": args.runs},
    )
    return 0 if report.all_applicable_pass else 2


def cmd_figure(args):
    config = load_config(args)
    which = args.which
    if which in ("fig1", "all"):
        if args.w is not None or args.c is not None:
            param_list = ((config.params.w, config.params.c),)
        else:
            param_list = FIG1_DEFAULT_PARAMS
        rho = args.rho if args.rho is not None else FIG1_DEFAULT_RHO
        results = [
            experiment.run_single(config.with_params(w=w, c=c, rho=rho))
            for w, c in param_list
        ]
        cols, rows = output.fig1_rows(results)
        _write(args, "fig1_decile_apc.csv", cols, rows, config.to_dict())
        if args.fmt == "csv+svg":
            series = [
                (
                    f"w={r.config.params.w:g}, c={r.config.params.c:g}",
                    list(range(1, 11)),
                    r.decile_apcs,
                )
                for r in results
            ]
            _write_svg(
                args,
                "fig1_decile_apc.svg",
                svgchart.line_chart(
                    series, "income decile", "decile APC",
                    f"Decile APCs, rho={rho:g}",
                ),
            )
    if which in ("fig45", "all"):
        fig45_cfg = config
        if args.w is None and args.c is None:
            fig45_cfg = fig45_cfg.with_params(w=FIG45_DEFAULT["w"], c=FIG45_DEFAULT["c"])
        if args.rho is None:
            fig45_cfg = fig45_cfg.with_params(rho=FIG45_DEFAULT["rho"])
        result = experiment.run_single(fig45_cfg)
        cols, rows = output.fig45_rows(result)
        _write(args, "fig45_density.csv", cols, rows, fig45_cfg.to_dict())
        if args.fmt == "csv+svg":
            _write_svg(
                args,
                "fig45_density.svg",
                _density_chart(result),
            )
    if which in ("fig23", "fig67", "all"):
        args_rhos = getattr(args, "rhos", None) or list(SWEEP_WC_DEFAULT_RHOS)
        wc_args = argparse.Namespace(
            out=args.out, runs=args.runs, fmt=args.fmt,
            rhos=args_rhos, w_grid=None, c_grid=None,
        )
        grids = _wc_grids(wc_args, config)
        _emit_wc_products(wc_args, config, grids)
    if which in ("fig8", "all"):
        base = config
        if args.w is None and args.c is None:
            base = base.with_params(w=0.5, c=0.5)
        iq_args = argparse.Namespace(
            out=args.out, runs=args.runs, fmt=args.fmt,
            rhos=list(experiment.DEFAULT_RHO_GRID),
            sigmas=list(experiment.DEFAULT_SIGMA_GRID),
        )
        rows_data = experiment.sweep_inequality(
            base, sigma_values=iq_args.sigmas, rho_values=iq_args.rhos, runs=args.runs
        )
        _emit_fig8_products(iq_args, base, rows_data)
    return 0


def _density_chart(result):
    """Histogram polylines for the income and expenditure cross-sections."""
    series = []
    for label, values in (
        ("income", result.incomes.incomes),
        ("expenditure", result.consumption),
    ):
        hist, edges = np.histogram(values, bins=40, density=True)
        mids = 0.5 * (edges[:-1] + edges[1:])
        series.append((label, mids, hist))
    return svgchart.line_chart(series, "value", "density", "Cross-section densities")


_DISPATCH = {
    "run": cmd_run,
    "ensemble": cmd_ensemble,
    "sweep-wc": cmd_sweep_wc,
    "sweep-inequality": cmd_sweep_inequality,
    "validate": cmd_validate,
    "figure": cmd_figure,
}


def parse_and_dispatch(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses status 2 for usage errors; those are config errors here
        return 0 if exc.code in (0, None) else 1
    try:
        return _DISPATCH[args.subcommand](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    return parse_and_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
