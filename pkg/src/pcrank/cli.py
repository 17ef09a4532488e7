"""``pcrank`` command line.

Exit status: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
Text output rounds to 6 decimals; ``--json`` output carries full precision.
Alternatives are numbered from 1 in all CLI output.
"""

from __future__ import annotations

import functools
import json
import sys

import click

from . import __version__
from .bounds import check_bounds, lemma1_check
from .errors import ConvergenceError, PCRankError
from .inconsistency import DEFAULT_RI, estimate_ri, inconsistency_report, load_ri_table
from .matrix import PCMatrix, read_matrix, serialize_matrix
from .montecarlo import (
    FACTOR_MODES,
    GeneratorConfig,
    config_from_mapping,
    generate_matrix,
    parse_config_text,
    run_experiment,
    summarize,
    write_csv,
)
from .priority import evm, gmm
from .similarity import chebyshev, comp_vectors, compatibility, kendall_distance, manhattan

EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _fail(code: int, message: str):
    click.echo(f"pcrank: error: {message}", err=True)
    sys.exit(code)


def guarded(fn):
    """Map library exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConvergenceError as exc:
            _fail(EXIT_NUMERIC, str(exc))
        except PCRankError as exc:
            _fail(EXIT_INPUT, str(exc))
        except OSError as exc:
            _fail(EXIT_IO, f"{exc.filename or ''}: {exc.strerror or exc}".lstrip(": "))

    return wrapper


def _load(path: str) -> PCMatrix:
    try:
        return read_matrix(path)
    except PCRankError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


def _f(x: float) -> str:
    return f"{x:.6f}"


def _dump(obj: object) -> None:
    click.echo(json.dumps(obj, indent=2, allow_nan=False))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="pcrank")
def cli() -> None:
    """Priority vectors and inconsistency of pairwise comparison matrices."""


@cli.command()
@click.option("-m", "--matrix", "matrix_path", required=True, help="Matrix file.")
@click.option("--method", type=click.Choice(["evm", "gmm", "both"]), default="both", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@guarded
def rank(matrix_path: str, method: str, as_json: bool) -> None:
    """Derive priority vectors (and, with both methods, the bounds between them)."""
    C = _load(matrix_path)
    out: dict[str, object] = {"n": C.n, "method": method}
    ev = evm(C) if method in ("evm", "both") else None
    gm = gmm(C) if method in ("gmm", "both") else None
    if ev is not None:
        out["evm"] = {"weights": ev.weights.tolist(), "lambda_max": ev.lambda_max,
                      "iterations": ev.iterations, "residual": ev.residual}
    if gm is not None:
        out["gmm"] = {"weights": gm.tolist()}
    if ev is not None and gm is not None:
        comp = comp_vectors(ev.weights, gm)
        out["comparison"] = {
            "md": manhattan(ev.weights, gm),
            "cheb": chebyshev(ev.weights, gm),
            "kendall": kendall_distance(ev.weights, gm),
            "comp": comp.comp,
            "comp_lower": comp.comp_lower,
            "comp_upper": comp.comp_upper,
            "comp_max": comp.comp_max,
        }
        if C.n > 2:
            report = check_bounds(C, w_ev=ev.weights, w_gm=gm)
            out["bounds"] = report.to_dict()
            out["lemma1_ok"] = lemma1_check(C, w_ev=ev.weights, w_gm=gm)
        else:
            out["bounds"] = None
            out["lemma1_ok"] = None

    if as_json:
        _dump(out)
        return

    header = ["alt"] + [m.upper() for m in ("evm", "gmm") if m in out]
    click.echo("  ".join(f"{h:>10}" for h in header))
    for i in range(C.n):
        cells = [f"a{i + 1}"]
        if ev is not None:
            cells.append(_f(ev.weights[i]))
        if gm is not None:
            cells.append(_f(gm[i]))
        click.echo("  ".join(f"{c:>10}" for c in cells))
    if ev is not None:
        click.echo(f"lambda_max = {_f(ev.lambda_max)} ({ev.iterations} iterations)")
    if "comparison" in out:
        c = out["comparison"]
        click.echo("")
        click.echo(f"Manhattan distance   {_f(c['md'])}")
        click.echo(f"Chebyshev distance   {_f(c['cheb'])}")
        click.echo(f"Kendall distance     {c['kendall']}")
        click.echo(f"comp                 {_f(c['comp'])}")
        click.echo(f"comp (lower/upper)   {_f(c['comp_lower'])} / {_f(c['comp_upper'])}")
        click.echo(f"comp max             {_f(c['comp_max'])}")
        b = out["bounds"]
        click.echo("")
        if b is None:
            click.echo("Bounds: undefined (KI needs n > 2)")
        else:
            ok = lambda flag: "ok" if flag else "VIOLATED"  # noqa: E731
            click.echo(f"KI = {_f(1 - b['kappa'])}, kappa = {_f(b['kappa'])}"
                       + (" (bounds uninformative)" if b["uninformative"] else ""))
            click.echo(f"compatibility in [{_f(b['compat_low'])}, {_f(b['compat_high'])}]  {ok(b['chain_ok'])}")
            click.echo(f"MD in [{_f(b['md_low'])}, {_f(b['md_high'])}]  {ok(b['md_ok'])}")
            click.echo(f"MD/n in [{_f(b['mean_low'])}, {_f(b['mean_high'])}]  {ok(b['mean_ok'])}")
            click.echo(f"ChD <= {_f(b['cheb_high'])}  {ok(b['cheb_ok'])}")
            click.echo(f"w_ev/w_gm in [{_f(b['compat_low'])}, {_f(b['compat_high'])}]  {ok(out['lemma1_ok'])}")


@cli.command()
@click.option("-m", "--matrix", "matrix_path", required=True, help="Matrix file.")
@click.option("--ri", "ri_path", default=None, help="RI table file with 'n = value' lines.")
@click.option("--json", "as_json", is_flag=True)
@guarded
def check(matrix_path: str, ri_path: str | None, as_json: bool) -> None:
    """Report lambda_max, CI, CR and Koczkodaj's index with its worst triad."""
    C = _load(matrix_path)
    ri = load_ri_table(ri_path) if ri_path else DEFAULT_RI
    rep = inconsistency_report(C, ri)
    triad = None if rep.worst_triad is None else [x + 1 for x in rep.worst_triad.indices]
    if as_json:
        _dump({"n": C.n, "lambda_max": rep.lambda_max, "ci": rep.ci, "cr": rep.cr,
               "acceptable": rep.acceptable, "ki": rep.ki, "worst_triad": triad})
        return
    click.echo(f"n          {C.n}")
    click.echo(f"lambda_max {_f(rep.lambda_max)}")
    click.echo(f"CI         {_f(rep.ci)}")
    if rep.cr is None:
        click.echo(f"CR         unavailable (no RI({C.n}))")
    else:
        verdict = "acceptable" if rep.acceptable else "not acceptable"
        click.echo(f"CR         {_f(rep.cr)} ({verdict}; threshold 0.1)")
    if rep.ki is None:
        click.echo("KI         undefined (n<=2)")
    else:
        i, k, j = triad
        click.echo(f"KI         {_f(rep.ki)}")
        click.echo(f"worst triad (i,k,j) = ({i},{k},{j})")


@cli.command()
@click.option("-a", "path_a", required=True, help="First matrix file.")
@click.option("-b", "path_b", required=True, help="Second matrix file.")
@click.option("--json", "as_json", is_flag=True)
@guarded
def compare(path_a: str, path_b: str, as_json: bool) -> None:
    """Compatibility indices between two matrices of equal order."""
    A, B = _load(path_a), _load(path_b)
    rep = compatibility(A, B)
    ordered = rep.ordered()
    if as_json:
        _dump({"comp": rep.comp, "comp_lower": rep.comp_lower, "comp_upper": rep.comp_upper,
               "comp_max": rep.comp_max, "ordering_ok": ordered})
        return
    click.echo(f"comp        {_f(rep.comp)}")
    click.echo(f"comp_lower  {_f(rep.comp_lower)}")
    click.echo(f"comp_upper  {_f(rep.comp_upper)}")
    click.echo(f"comp_max    {_f(rep.comp_max)}")
    click.echo("comp_lower <= comp <= comp_upper <= comp_max: "
               + ("holds" if ordered else "VIOLATED"))


def _weight_mode(value: str) -> str:
    return "loguniform_scale" if value == "loguniform" else value


@cli.command()
@click.option("-n", "n", type=int, required=True, help="Matrix order (>= 3).")
@click.option("-d", "d", type=float, required=True, help="Disturbance level (>= 1).")
@click.option("--seed", type=int, required=True)
@click.option("--factor-mode", type=click.Choice(FACTOR_MODES), default="uniform", show_default=True)
@click.option("--weight-mode", type=click.Choice(["uniform01", "loguniform", "loguniform_scale"]),
              default="uniform01", show_default=True)
@click.option("--clamp", is_flag=True, help="Clip entries to [1/9, 9].")
@guarded
def gen(n: int, d: float, seed: int, factor_mode: str, weight_mode: str, clamp: bool) -> None:
    """Print a random disturbed consistent matrix."""
    cfg = GeneratorConfig(n, d, _weight_mode(weight_mode), factor_mode, clamp)
    C = generate_matrix(cfg, seed)
    header = (f"pcrank gen n={n} d={d!r} seed={seed} factor_mode={factor_mode} "
              f"weight_mode={cfg.weight_mode} clamp={str(clamp).lower()}")
    click.echo(serialize_matrix(C, header), nl=False)


@cli.command()
@click.option("--config", "config_path", default=None, help="key = value experiment config file.")
@click.option("-n", "n", type=int, default=None)
@click.option("--d-grid", default=None, help="start:stop:step or comma-separated list.")
@click.option("--d-start", type=float, default=None)
@click.option("--d-stop", type=float, default=None)
@click.option("--d-step", type=float, default=None)
@click.option("--samples", "samples_per_d", type=int, default=None, help="Samples per d.")
@click.option("--seed", "master_seed", type=int, default=None, help="Master seed.")
@click.option("--factor-mode", type=click.Choice(FACTOR_MODES), default=None)
@click.option("--weight-mode", type=click.Choice(["uniform01", "loguniform", "loguniform_scale"]),
              default=None)
@click.option("--clamp", "clamp_to_scale", is_flag=True, default=None)
@click.option("--workers", type=int, default=None, help="Worker processes.")
@click.option("-o", "--output", default="-", show_default=True, help="CSV destination.")
@click.option("--summary-json", default=None, help="Also write the summary as JSON here.")
@guarded
def experiment(config_path, output, summary_json, **flags) -> None:
    """Run the Monte Carlo experiment; CSV to --output, summary to stderr."""
    values: dict[str, object] = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    values.update({k: v for k, v in flags.items() if v is not None})
    if "weight_mode" in values:
        values["weight_mode"] = _weight_mode(str(values["weight_mode"]))
    cfg, workers = config_from_mapping(values)
    records = run_experiment(cfg, workers=workers)
    with click.open_file(output, "w", encoding="utf-8", lazy=False) as fh:
        write_csv(records, cfg, fh)
    summary = summarize(records)
    err = functools.partial(click.echo, err=True)
    err(f"{summary.total} matrices, n={cfg.n}, {len(cfg.d_grid)} disturbance levels")
    err(f"{'d':>7} {'mean KI':>9} {'mean CI':>9} {'mean MD':>9} {'max MD':>9} {'max ChD':>9} {'max comp^':>10}")
    for s in summary.per_d:
        err(f"{s.d:7.3f} {s.mean_ki:9.5f} {s.mean_ci:9.5f} {s.mean_md:9.5f} {s.max_md:9.5f} "
            f"{s.max_cheb:9.5f} {s.max_comp_upper:10.5f}")
    err(f"bound violations: {summary.violations}")
    err(f"non-converged EVM: {summary.nonconverged}")
    err(f"max MD / MD bound: {summary.max_md_over_bound:.6g}")
    err(f"Spearman rho(d, mean KI): {summary.ki_trend_spearman:.6f}")
    if summary_json:
        with open(summary_json, "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, indent=2)


@cli.command("estimate-ri")
@click.option("-n", "n", type=int, required=True)
@click.option("--samples", type=int, required=True)
@click.option("--seed", type=int, required=True)
@guarded
def estimate_ri_cmd(n: int, samples: int, seed: int) -> None:
    """Estimate the random consistency index RI(n)."""
    click.echo(format(estimate_ri(n, samples, seed), ".17g"))


def main() -> None:
    cli(prog_name="pcrank")
