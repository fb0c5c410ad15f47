"""Command line driver: `superforms verify|cohomology|d3`.

Exit status 0 when every check passes, 1 when some check fails, 2 on usage
errors. JSON reports have a fixed key order and contain no wall-clock data
unless --timings is given, so equal seeds give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from typing import Dict, List, Optional

import click

from . import cohomology
from .suites import SUITES, Options, Result, run_suite, suite_checks

SUITE_NAMES = list(SUITES) + ["all"]


def emit_report(results: List[Result], suite: Optional[str] = None, seed: Optional[int] = None,
                timings: Optional[Dict[str, float]] = None) -> dict:
    """Report document; keys in schema order, witness only on failures."""
    doc: dict = {}
    if suite is not None:
        doc["suite"] = suite
    if seed is not None:
        doc["seed"] = seed
    checks = []
    for r in results:
        entry = {"id": r.id, "paper_anchor": r.anchor, "status": r.status}
        if r.witness is not None:
            entry["witness"] = r.witness
        checks.append(entry)
    doc["checks"] = checks
    if suite is not None:
        doc["timings"] = dict(timings or {})
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _summary(results: List[Result]) -> str:
    lines = []
    for r in results:
        extra = " ".join(f"{k}={v}" for k, v in r.detail.items())
        lines.append(f"{r.status}  {r.id}" + (f"  [{extra}]" if extra else ""))
        if r.witness:
            lines.append(f"      witness: {r.witness}")
    n_ok = sum(r.ok for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines)


def _run(suite: str, seed: int, options: Options, only: Optional[str], json_path: Optional[str],
         timings: bool) -> None:
    checks = suite_checks(suite)
    if only is not None and only not in checks:
        raise click.UsageError(f"unknown check {only!r} for suite {suite!r}; choose from {', '.join(checks)}")
    results, times = [], {}
    for cid in ([only] if only else list(checks)):
        t0 = time.perf_counter()
        results.extend(run_suite(suite, seed, options, only=cid))
        times[cid] = round(time.perf_counter() - t0, 3)
    click.echo(_summary(results))
    if json_path:
        text = dumps(emit_report(results, suite, seed, times if timings else None))
        if json_path == "-":
            click.echo(text, nl=False)
        else:
            with open(json_path, "w", encoding="utf-8") as fh:
                fh.write(text)
    sys.exit(0 if all(r.ok for r in results) else 1)


_common = [
    click.option("--seed", type=int, default=0, show_default=True, help="Seed for all random samples."),
    click.option("--weight-cap", type=click.IntRange(0), default=6, show_default=True,
                 help="Largest weight sector used for polynomial cohomology."),
    click.option("--poly-cap", type=click.IntRange(0), default=2, show_default=True,
                 help="Polynomial degree cap for the coboundary search."),
    click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
                 help="Write a JSON report here ('-' for stdout)."),
    click.option("--check", "only", default=None, help="Run a single check by id."),
    click.option("--timings", is_flag=True, help="Include wall-clock timings in the JSON report."),
    click.option("--scale", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True,
                 help="Multiply sample counts (1 = full size)."),
]


def common_options(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


def _options(weight_cap, poly_cap, scale, df_rule=True) -> Options:
    from fractions import Fraction
    return Options(weight_cap=weight_cap, poly_cap=poly_cap, df_rule=df_rule,
                   scale=Fraction(scale).limit_denominator(1000))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Exact verification of differential and integral form calculus on superdomains."""


@main.command()
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@common_options
def verify(suite, seed, weight_cap, poly_cap, json_path, only, timings, scale):
    """Run a named verification suite."""
    _run(suite, seed, _options(weight_cap, poly_cap, scale), only, json_path, timings)


@main.command()
@click.option("--check", "only", default=None, help="Run a single check by id (e.g. closure).")
@click.option("--no-df-rule", is_flag=True, help="Drop the covariant rule for df (negative control).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--poly-cap", type=click.IntRange(0), default=2, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@click.option("--timings", is_flag=True)
def d3(only, no_df_rule, seed, poly_cap, json_path, timings):
    """Checks on the three dimensional supergravity model."""
    _run("d3", seed, _options(6, poly_cap, 1.0, df_rule=not no_df_rule), only, json_path, timings)


@main.command(name="cohomology")
@click.option("--m", "m", type=click.IntRange(0), required=True, help="Even dimension.")
@click.option("--n", "n", type=click.IntRange(0), required=True, help="Odd dimension.")
@click.option("--weight-cap", type=click.IntRange(0), default=6, show_default=True)
@click.option("--complex", "which", type=click.Choice(["deRham", "spencer", "both"]), default="both",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True)
@click.option("--expect-point", is_flag=True, help="Exit 1 unless the tables are those of a point.")
def cohomology_cmd(m, n, weight_cap, which, fmt, expect_point):
    """Betti numbers of the polynomial de Rham / Spencer complexes of R^{m|n}."""
    kinds = [cohomology.DERHAM, cohomology.SPENCER] if which == "both" else [which]
    tables = {k: cohomology.betti_table(k, m, n, weight_cap) for k in kinds}
    if fmt == "json":
        click.echo(dumps({"m": m, "n": n, "weight_cap": weight_cap,
                          "betti": {k: {str(d): b for d, b in t.items()} for k, t in tables.items()}}), nl=False)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["complex", "degree", "betti"])
        for k, t in tables.items():
            for d, b in t.items():
                w.writerow([k, d, b])
        click.echo(buf.getvalue(), nl=False)
    else:
        for k, t in tables.items():
            click.echo(f"{k}: " + " ".join(f"H^{d}={b}" for d, b in t.items()))
    if expect_point:
        ok = all(b == (1 if d == 0 else 0) for t in tables.values() for d, b in t.items())
        sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
