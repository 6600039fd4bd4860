"""Deterministic CSV emission with embedded configs and atomic writes.

Every file starts with a ``# config: {...}`` comment carrying the effective
run configuration (plus a ``# sweep: {...}`` line for sweep products), so
any output can be reproduced from the file alone. Floats are formatted with
repr (shortest round-trip), which makes outputs byte-stable for identical
inputs. Files are written to a temp path and renamed, never left partial.
"""

import json
import os
import tempfile

import numpy as np


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(columns, rows, config=None, sweep=None):
    lines = []
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    if sweep is not None:
        lines.append("# sweep: " + json.dumps(sweep, sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text):
    """Write via a temp file in the target directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, columns, rows, config=None, sweep=None):
    atomic_write_text(path, render_csv(columns, rows, config=config, sweep=sweep))


def read_csv(path):
    """Parse one of our CSVs back into (config, sweep, columns, rows)."""
    config = None
    sweep = None
    columns = None
    rows = []
    with open(path, "r") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# config: "):
                config = json.loads(line[len("# config: ") :])
            elif line.startswith("# sweep: "):
                sweep = json.loads(line[len("# sweep: ") :])
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(line.split(","))
    return config, sweep, columns, rows


# dataset builders: (columns, rows) pairs for each figure product

def run_agent_rows(result):
    columns = ("agent", "income", "decile", "consumption", "apc", "perception_gap")
    rows = [
        (
            i,
            result.incomes.incomes[i],
            int(result.incomes.deciles[i]),
            result.consumption[i],
            result.apc[i],
            result.perception_gap[i],
        )
        for i in range(result.incomes.n)
    ]
    return columns, rows


def run_summary_rows(result):
    columns = ("stat", "value")
    rows = [(name, value) for name, value in sorted(result.scalar_stats().items())]
    rows.append(("ks_statistic", result.lognormality.ks_statistic))
    rows.append(("ks_reject", result.lognormality.reject))
    rows.extend(
        (f"decile_apc_{d + 1}", result.decile_apcs[d]) for d in range(10)
    )
    return columns, rows


def ensemble_rows(summary):
    columns = ("stat", "mean", "sd")
    rows = [
        (name, summary.mean(name), summary.sd(name))
        for name in sorted(summary.per_run)
    ]
    rows.append(("ks_nonreject_fraction", summary.ks_nonreject_fraction, 0.0))
    rows.extend(
        (
            f"decile_apc_{d + 1}",
            summary.decile_apcs_mean[d],
            summary.decile_apcs_sd[d],
        )
        for d in range(10)
    )
    return columns, rows


def fig1_rows(results):
    """Decile APC schedules, one block per parametrisation."""
    columns = ("decile", "apc", "w", "c", "rho")
    rows = []
    for result in results:
        cfg = result.config
        for d in range(10):
            rows.append(
                (d + 1, result.decile_apcs[d], cfg.params.w, cfg.params.c, cfg.rho)
            )
    return columns, rows


def fig23_rows(grids):
    """CoV-ratio grid rows from {rho: {(w, c): EnsembleSummary}}."""
    columns = ("w", "c", "rho", "cov_ratio_mean", "cov_ratio_sd")
    rows = []
    for rho, grid in grids.items():
        for (w, c), summary in grid.items():
            rows.append(
                (w, c, rho, summary.mean("cov_ratio"), summary.sd("cov_ratio"))
            )
    return columns, rows


def fig45_rows(result):
    """Income and expenditure cross-sections of one run."""
    columns = ("variable", "value")
    rows = [("income", v) for v in result.incomes.incomes]
    rows.extend(("expenditure", v) for v in result.consumption)
    return columns, rows


def fig67_rows(grids):
    """KS non-rejection fractions from {rho: {(w, c): EnsembleSummary}}."""
    columns = ("w", "c", "rho", "nonreject_fraction")
    rows = []
    for rho, grid in grids.items():
        for (w, c), summary in grid.items():
            rows.append((w, c, rho, summary.ks_nonreject_fraction))
    return columns, rows


def fig8_rows(sweep_rows):
    columns = (
        "rho",
        "sigma",
        "gini_mean",
        "saving_rate_mean",
        "saving_rate_sd",
        "gini_theoretical",
    )
    rows = [
        (
            r["rho"],
            r["sigma"],
            r["gini_mean"],
            r["saving_rate_mean"],
            r["saving_rate_sd"],
            r["gini_theoretical"],
        )
        for r in sweep_rows
    ]
    return columns, rows


def graph_rows(graph):
    columns = ("source", "target", "draw_index")
    rows = []
    for i in range(graph.n):
        for d in range(graph.k):
            rows.append((i, int(graph.out_links[i, d]), d))
    return columns, rows


def validation_rows(report):
    columns = ("fact", "name", "applicable", "passed", "detail")
    rows = [
        (f.fact, f.name, f.applicable, f.passed, f.detail.replace(",", ";"))
        for f in report.facts
    ]
    return columns, rows
