"""Command-line front end.

    halleyquad rule  --family legendre --n 5 --format csv
    halleyquad check --family hermite --n 100,1000
    halleyquad stats --family hermite,legendre --n 10000 --scheme modified

Exit codes: 0 ok, 2 compute failure, 64 usage error.
"""

from __future__ import annotations

import dataclasses
import io
import json
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import hermite, legendre
from .errors import HalleyQuadError
from .oracle import ORACLE_MAX_N, oracle_rule, relative_error_report
from .rule import Family

EXIT_OK = 0
EXIT_COMPUTE = 2
EXIT_USAGE = 64
CHECK_LIMIT = 1e-13


class ComputeFailure(Exception):
    """Raised inside a command when a rule or oracle computation fails."""


def _parse_families(ctx, param, value):
    out = []
    for item in value.split(","):
        try:
            out.append(Family.parse(item.strip()))
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
    return out


def _parse_degrees(ctx, param, value):
    out = []
    for item in value.split(","):
        try:
            n = int(item.strip())
        except ValueError:
            raise click.BadParameter(f"{item!r} is not an integer") from None
        if n < 1:
            raise click.BadParameter(f"degree must be >= 1, got {n}")
        out.append(n)
    return out


def _config(family: Family, tol: float | None):
    mod = hermite if family is Family.HERMITE else legendre
    cfg = mod.default_config()
    if tol is None:
        return cfg
    try:
        return dataclasses.replace(cfg, rel_step_tol=tol)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--tol") from None


def fmt(x: float, digits: int) -> str:
    """``digits`` significant digits, trailing zeros kept; integral values print bare."""
    if x.is_integer() and abs(x) < 2.0**53:
        return str(int(x))
    return f"{x:#.{digits}g}"


def _compute(family: Family, n: int, tol: float | None, scheme: str):
    cfg = _config(family, tol)
    fn = hermite.compute_hermite_rule if family is Family.HERMITE else legendre.compute_legendre_rule
    try:
        return fn(n, cfg=cfg, scheme=scheme)
    except (HalleyQuadError, ValueError) as exc:
        raise ComputeFailure(f"{family.value} n={n}: {exc}") from exc


def _rule_job(args):
    family, n, tol, scheme = args
    rule = _compute(family, n, tol, scheme)
    return family, n, rule


def _check_job(args):
    family, n, tol, scheme = args
    rule = _compute(family, n, tol, scheme)
    try:
        z, w = oracle_rule(family, n)
        rep = relative_error_report(rule, z, w)
    except HalleyQuadError as exc:
        raise ComputeFailure(f"oracle {family.value} n={n}: {exc}") from exc
    return family, n, rep


def _run(jobs: int, fn, tasks):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _emit(text: str, out_path: str | None):
    if out_path is None:
        click.echo(text, nl=False)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _tasks(families, degrees, tol, scheme):
    return [(f, n, tol, scheme) for f in families for n in degrees]


family_opt = click.option("--family", "families", required=True, callback=_parse_families,
                          help="hermite or legendre (comma list allowed)")
n_opt = click.option("--n", "degrees", required=True, callback=_parse_degrees,
                     help="degree, or comma-separated degrees")
format_opt = click.option("--format", "fmt_kind", type=click.Choice(["csv", "json"]), default="csv",
                          show_default=True)
out_opt = click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
                       help="write here instead of stdout")
scheme_opt = click.option("--scheme", type=click.Choice(["modified", "halley"]), default="modified",
                          show_default=True)
tol_opt = click.option("--tol", type=float, default=None, help="relative step tolerance override")
jobs_opt = click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
                        help="worker processes for several (family, n) pairs")


@click.group()
@click.version_option(package_name="halleyquad")
def cli():
    """Gauss-Hermite and Gauss-Legendre rules by a modified Halley march."""


@cli.command()
@family_opt
@n_opt
@format_opt
@out_opt
@scheme_opt
@tol_opt
@jobs_opt
@click.option("--digits", type=click.IntRange(1, 34), default=17, show_default=True,
              help="significant digits in CSV output")
def rule(families, degrees, fmt_kind, out_path, scheme, tol, jobs, digits):
    """Nodes and weights, sorted ascending."""
    for f in families:
        _config(f, tol)
    results = _run(jobs, _rule_job, _tasks(families, degrees, tol, scheme))
    batch = len(results) > 1
    if fmt_kind == "json":
        docs = [_rule_json(f, n, r) for f, n, r in results]
        text = json.dumps(docs if batch else docs[0], indent=1) + "\n"
    else:
        head = (["family", "n"] if batch else []) + ["index", "node", "weight"]
        rows = []
        for f, n, r in results:
            lead = [f.value, str(n)] if batch else []
            for i, (x, w) in enumerate(zip(r.nodes, r.weights)):
                rows.append(lead + [str(i), fmt(float(x), digits), fmt(float(w), digits)])
        text = _csv(head, rows)
    _emit(text, out_path)


def _rule_json(family, n, r) -> dict:
    return {
        "family": family.value,
        "n": n,
        "nodes": [float(x) for x in r.nodes],
        "weights": [float(w) for w in r.weights],
        "stats": {"total_iters": r.stats.total_iters, "mean_iters": r.stats.mean_iters},
    }


def _re_text(v: float) -> str:
    return "nan" if np.isnan(v) else f"{v:.3e}"


@cli.command()
@family_opt
@n_opt
@format_opt
@out_opt
@scheme_opt
@tol_opt
@jobs_opt
def check(families, degrees, fmt_kind, out_path, scheme, tol, jobs):
    """Per-node and per-weight relative errors against the double-double oracle.

    Exits 0 only if every max node error is <= 1e-13.
    """
    for f in families:
        _config(f, tol)
    too_big = [n for n in degrees if n > ORACLE_MAX_N]
    if too_big:
        raise click.UsageError(f"oracle supports n <= {ORACLE_MAX_N}; got {too_big[0]}")
    results = _run(jobs, _check_job, _tasks(families, degrees, tol, scheme))
    batch = len(results) > 1
    if fmt_kind == "json":
        docs = [{
            "family": f.value, "n": n,
            "max_node_re": rep.max_node_re, "max_weight_re": rep.max_weight_re,
            "excluded_weights": rep.excluded_weights,
            "node_re": [float(v) for v in rep.per_node_re],
            "weight_re": [None if np.isnan(v) else float(v) for v in rep.per_weight_re],
        } for f, n, rep in results]
        text = json.dumps(docs if batch else docs[0], indent=1) + "\n"
    else:
        head = (["family", "n"] if batch else []) + ["index", "node_re", "weight_re"]
        rows = []
        for f, n, rep in results:
            lead = [f.value, str(n)] if batch else []
            for i, (a, b) in enumerate(zip(rep.per_node_re, rep.per_weight_re)):
                rows.append(lead + [str(i), _re_text(a), _re_text(b)])
        text = _csv(head, rows)
    _emit(text, out_path)
    ok = True
    for f, n, rep in results:
        click.echo(f"{f.value} n={n}: max node RE {rep.max_node_re:.3e}, "
                   f"max weight RE {rep.max_weight_re:.3e} ({rep.excluded_weights} subnormal weights skipped)",
                   err=True)
        ok = ok and rep.max_node_re <= CHECK_LIMIT
    return EXIT_OK if ok else EXIT_COMPUTE


@cli.command()
@family_opt
@n_opt
@format_opt
@out_opt
@scheme_opt
@tol_opt
@jobs_opt
def stats(families, degrees, fmt_kind, out_path, scheme, tol, jobs):
    """Iteration counts and wall time per (family, n)."""
    for f in families:
        _config(f, tol)
    results = _run(jobs, _rule_job, _tasks(families, degrees, tol, scheme))
    recs = []
    for f, n, r in results:
        s = r.stats
        recs.append({
            "family": f.value, "n": n, "scheme": s.scheme,
            "total_iters": s.total_iters, "mean_iters": s.mean_iters,
            "sweep_steps": s.sweep_steps, "r_evals": s.r_evals, "wall_time_s": s.wall_time_s,
        })
    if fmt_kind == "json":
        text = json.dumps(recs, indent=1) + "\n"
    else:
        head = list(recs[0])
        rows = [[str(v) if not isinstance(v, float) else f"{v:.6g}" for v in rec.values()] for rec in recs]
        text = _csv(head, rows)
    _emit(text, out_path)


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code instead of raising SystemExit."""
    try:
        rv = cli.main(args=argv, prog_name="halleyquad", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except ComputeFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_COMPUTE
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_COMPUTE
    return rv if isinstance(rv, int) else EXIT_OK
