"""Command-line entry point: generate, run, compare and report."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import catalog, drift, evaluation, stats
from .learners import REFERENCE, UnsupportedConfiguration, reference

log = logging.getLogger("driftbench")

EXIT_OK, EXIT_USAGE, EXIT_RUN, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    return format(float(v), ".9g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    catalog.atomic_write_text(path, text)


# -- generate ---------------------------------------------------------------

def component_labels(scenario: drift.Scenario) -> list[str]:
    return [f"{c.name}{j + 1}" for c in scenario.classes for j in range(len(c.components))]


def generate_csv(scenario: drift.Scenario, seed: int) -> str:
    d = scenario.dimension
    names, comps = scenario.class_names, component_labels(scenario)
    lines = [",".join(["t", *(f"x{j + 1}" for j in range(d)), "class", "component"])]
    for ts, xs, cls, comp in drift.stream_blocks(scenario, seed):
        for t, x, c, k in zip(ts, xs, cls, comp):
            lines.append(",".join([str(t), *map(_fmt, x), names[c], comps[k]]))
    return "\n".join(lines) + "\n"


def _arff_name(s: str) -> str:
    return s if s.replace("-", "").replace("_", "").replace(".", "").isalnum() else "'" + s.replace("'", "\\'") + "'"


def generate_arff(scenario: drift.Scenario, seed: int) -> str:
    names = scenario.class_names
    lines = [f"@relation {_arff_name(scenario.name)}", ""]
    lines += [f"@attribute x{j + 1} numeric" for j in range(scenario.dimension)]
    lines += ["@attribute class {" + ",".join(_arff_name(n) for n in names) + "}", "", "@data"]
    for _, xs, cls, _ in drift.stream_blocks(scenario, seed):
        for x, c in zip(xs, cls):
            lines.append(",".join([*map(_fmt, x), _arff_name(names[c])]))
    return "\n".join(lines) + "\n"


def cmd_generate(args) -> int:
    scenario = catalog.resolve(args.scenario)
    text = generate_arff(scenario, args.seed) if args.format == "arff" else generate_csv(scenario, args.seed)
    _write(Path(args.out), text)
    return EXIT_OK


# -- run --------------------------------------------------------------------

def _split_ids(value: str, universe: list[str]) -> list[str]:
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise UsageError("empty selection")
    if any(v.lower() == "all" for v in items):
        return list(universe)
    return items


def _label(lid: str) -> str:
    cfg = REFERENCE.get(lid)
    return cfg.label if cfg is not None and cfg.label else lid


def trace_csv(trace: evaluation.RunTrace, w: int) -> str:
    m = evaluation.metric_series(trace, w)
    rows = (
        (int(n), int(l), _fmt(c), "" if np.isnan(wv) else _fmt(wv))
        for n, l, c, wv in zip(m.n, trace.losses, m.ae_cum, m.ae_win)
    )
    return _csv_text(["n", "loss", "ae_cum", "ae_win"], rows)


def write_results(outdir: Path, result: evaluation.ExperimentResult, groups: dict | None):
    """Write traces, curves, per-seed finals, the results table and metadata."""
    w = result.window
    for (sc, lid, seed), tr in sorted(result.traces.items()):
        _write(outdir / "traces" / sc / lid / f"seed{seed}.csv", trace_csv(tr, w))
    for sc in result.scenarios:
        present = [lid for lid in result.learners if any((sc, lid, s) in result.traces for s in result.seeds)]
        if not present:
            continue
        curves = [result.mean_curve(sc, lid) for lid in present]
        length = curves[0].size
        rows = ([n, *(_fmt(c[n - 1]) for c in curves)] for n in range(w, length + 1))
        _write(outdir / "curves" / f"{sc}.csv", _csv_text(["n", *(_label(l) for l in present)], rows))
    finals = []
    for sc in result.scenarios:
        for lid in result.learners:
            for s in result.seeds:
                tr = result.traces.get((sc, lid, s))
                if tr is not None:
                    finals.append([sc, lid, s, tr.errors, len(tr)])
    _write(outdir / "finals.csv", _csv_text(["scenario", "learner", "seed", "errors", "n"], finals))
    meta = {
        "scenarios": result.scenarios,
        "learners": result.learners,
        "labels": {lid: _label(lid) for lid in result.learners},
        "seeds": result.seeds,
        "window": w,
        "failures": [list(f) for f in result.failures],
    }
    _write(outdir / "run.json", json.dumps(meta, indent=2) + "\n")
    table = {sc: {lid: result.finals(sc, lid) for lid in result.learners} for sc in result.scenarios}
    _write(outdir / "results.csv", results_table_csv(table, meta["labels"], groups))


def results_table_csv(table: dict, labels: dict, groups: dict | None) -> str:
    """Rows = scenarios, columns = learners, mean final AE in %; ``*`` marks group members."""
    learners = list(next(iter(table.values())))
    rows = []
    for sc, finals in table.items():
        members = set(groups[sc].members) if groups and sc in groups else set()
        row = [sc]
        for lid in learners:
            v = np.asarray(finals.get(lid, [np.nan]), dtype=float)
            cell = "" if np.isnan(v).any() else f"{100 * v.mean():.2f}"
            row.append(cell + ("*" if cell and lid in members else ""))
        rows.append(row)
    return _csv_text(["scenario", *(labels.get(l, l) for l in learners)], rows)


def cmd_run(args) -> int:
    scenarios = _split_ids(args.scenario, list(catalog.NAMES))
    learners = [l.lower() for l in _split_ids(args.learner, list(REFERENCE))]
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    if args.window < 1:
        raise UsageError("--window must be >= 1")
    resolved = [catalog.resolve(s) for s in scenarios]
    for lid in learners:
        reference(lid)
    for sc in resolved:
        if args.window > sc.length:
            raise UsageError(f"--window {args.window} exceeds the length of {sc.name}")

    def progress(name, seed):
        log.info("finished %s seed %d", name, seed)

    result = evaluation.run_experiment(resolved, learners, args.seeds, args.window, progress=progress)
    groups = None
    if args.seeds >= 2:
        groups = stats.significance_groups(result, args.alpha)
    else:
        print("note: --seeds 1, significance groups not computed", file=sys.stderr)
    write_results(Path(args.outdir), result, groups)
    for f in result.failures:
        print("run failed: {} / {} / seed {}: {}".format(*f), file=sys.stderr)
    return EXIT_RUN if result.failures else EXIT_OK


# -- results dir readers ------------------------------------------------------

def load_results(path) -> tuple[dict, dict]:
    """Read run.json and finals.csv; returns (metadata, scenario -> learner -> finals)."""
    root = Path(path)
    meta_path, finals_path = root / "run.json", root / "finals.csv"
    if not root.is_dir():
        raise FileNotFoundError(f"results directory {root} does not exist")
    if not meta_path.exists() or not finals_path.exists():
        raise FileNotFoundError(f"results directory {root} has no run.json/finals.csv")
    meta = json.loads(meta_path.read_text())
    per = {}
    with finals_path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            per.setdefault(row["scenario"], {}).setdefault(row["learner"], {})[int(row["seed"])] = (
                int(row["errors"]) / int(row["n"])
            )
    table = {}
    for sc in meta["scenarios"]:
        table[sc] = {}
        for lid in meta["learners"]:
            seeds = per.get(sc, {}).get(lid, {})
            table[sc][lid] = np.array([seeds.get(s, np.nan) for s in meta["seeds"]])
    return meta, table


def compare_csv(table: dict, alpha: float, paired: bool = True) -> str:
    groups = stats.significance_groups(table, alpha, paired)
    rows = []
    for sc, g in groups.items():
        for lid, p in g.pvalues.items():
            rows.append([
                sc, lid, f"{100 * float(np.mean(table[sc][lid])):.2f}",
                int(lid == g.best), int(lid in g.members), _fmt(p),
            ])
    return _csv_text(["scenario", "learner", "mean_pct", "best", "in_group", "p_value"], rows)


def cmd_compare(args) -> int:
    meta, table = load_results(args.results)
    if len(meta["seeds"]) < 2:
        raise UsageError(f"{args.results}: compare needs at least 2 seeds, found {len(meta['seeds'])}")
    if not 0 <= args.alpha <= 1:
        raise UsageError("--alpha must be in [0, 1]")
    text = compare_csv(table, args.alpha, not args.unpaired)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def render_report(root: Path) -> dict[str, str]:
    """Report bundle as relative path -> text; depends only on the results dir."""
    if not root.is_dir() or not any(root.iterdir()):
        raise FileNotFoundError(f"results directory {root} is empty or missing")
    meta, table = load_results(root)
    groups = stats.significance_groups(table) if len(meta["seeds"]) >= 2 else None
    labels = meta["labels"]
    files = {"results.csv": results_table_csv(table, labels, groups)}
    learners = meta["learners"]
    width = max(8, *(len(labels[l]) + 1 for l in learners))
    head = "scenario".ljust(10) + "".join(labels[l].rjust(width) for l in learners)
    lines = [
        "Mean final prequential error (%) over seeds " + ",".join(map(str, meta["seeds"])),
        f"window w={meta['window']}",
        "* = not significantly different from the best (paired exact Wilcoxon, alpha=0.05)"
        if groups else "significance groups not computed (fewer than 2 seeds)",
        "",
        head,
    ]
    for sc in meta["scenarios"]:
        members = set(groups[sc].members) if groups and sc in groups else set()
        cells = []
        for lid in learners:
            v = table[sc][lid]
            cell = "n/a" if np.isnan(v).any() else f"{100 * v.mean():.2f}" + ("*" if lid in members else "")
            cells.append(cell.rjust(width))
        lines.append(sc.ljust(10) + "".join(cells))
    if meta.get("failures"):
        lines += ["", "failed runs:"] + ["  {} / {} / seed {}: {}".format(*f) for f in meta["failures"]]
    files["report.txt"] = "\n".join(lines) + "\n"
    curves = root / "curves"
    if curves.is_dir():
        for p in sorted(curves.glob("*.csv")):
            files[f"curves/{p.name}"] = p.read_text()
    return files


def cmd_report(args) -> int:
    files = render_report(Path(args.results))
    out = Path(args.out)
    for rel, text in files.items():
        _write(out / rel, text)
    return EXIT_OK


# -- entry ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="driftbench", description="Drifting Gaussian-mixture stream benchmark.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write one scenario stream to CSV or ARFF")
    g.add_argument("--scenario", required=True, help="canonical name or YAML path")
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=("csv", "arff"), default="csv")

    r = sub.add_parser("run", help="run learners over scenarios and seeds 1..k")
    r.add_argument("--scenario", required=True, help="comma-separated names/paths or 'all'")
    r.add_argument("--learner", required=True, help=f"comma-separated ids ({','.join(REFERENCE)}) or 'all'")
    r.add_argument("--seeds", type=int, default=10)
    r.add_argument("--window", type=int, default=evaluation.DEFAULT_WINDOW)
    r.add_argument("--alpha", type=float, default=0.05)
    r.add_argument("--outdir", required=True)

    c = sub.add_parser("compare", help="significance groups and pairwise p-values")
    c.add_argument("--results", required=True)
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--unpaired", action="store_true", help="rank-sum test instead of signed-rank")
    c.add_argument("--out")

    rp = sub.add_parser("report", help="render the results table and curve files")
    rp.add_argument("--results", required=True)
    rp.add_argument("--out", required=True)
    return p


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "compare": cmd_compare, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnsupportedConfiguration, catalog.ScenarioNotFound, catalog.ConfigError) as exc:
        print(f"driftbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"driftbench: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:
        print(f"driftbench: run failed: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
