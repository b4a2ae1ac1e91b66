"""Command-line front end: densities, caustic curves, branch data and the
acceptance checks, written as CSV or JSON.

Ranges are written ``start:stop:step`` and are half-open (``stop`` is not
included); comma-separated lists and single numbers are accepted too.
"""

from __future__ import annotations

import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import density, trajectories
from .caustics import classify_region, fold_points, trace_curves
from .checks import CHECKS, run_checks
from .errors import DwCausticError
from .oracle import Grid, exact_rho_diag
from .trajectories import PhysParams

log = logging.getLogger("dwcaustic")

RHO_COLUMNS = ["q0", "theta", "g", "n_solutions", "rho_usual", "rho_improved",
               "F_factor", "xi_or_phi", "mu_or_chi"]


class NumericalFailure(click.ClickException):
    exit_code = 3


def parse_values(text):
    """Expand ``a:b:s`` (half-open), ``a,b,c`` or ``a`` into a list of floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise click.BadParameter(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if not step > 0:
            raise click.BadParameter("range step must be positive")
        count = max(0, math.ceil((stop - start) / step - 1e-9))
        values = [start + i * step for i in range(count)]
    else:
        values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise click.BadParameter(f"empty range {text!r}")
    return values


def _values_option(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_values(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def format_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def render(columns, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(format_cell(row[c]) for c in columns) + "\n")
        return buf.getvalue()
    data = {}
    for c in columns:
        col = []
        for row in rows:
            v = row[c]
            if isinstance(v, float) and not math.isfinite(v):
                v = format_cell(v)
            col.append(v)
        data[c] = col
    return json.dumps({"columns": columns, "data": data}, indent=1) + "\n"


def emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def gnuplot_script(csv_path, xcol, ycols, columns):
    lines = ["set datafile separator ','", "set key autotitle columnhead",
             "set logscale y" if any(c.startswith("rho") for c in ycols) else "unset logscale"]
    plots = [f"'{csv_path}' using {columns.index(xcol) + 1}:{columns.index(c) + 1} with lines"
             for c in ycols]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def _threads(n):
    if n is None:
        n = int(os.environ.get("CAUSTIC_THREADS", "1") or 1)
    if n < 1:
        raise click.BadParameter("--threads must be at least 1")
    return n


def _configure(tol_root, tol_quad):
    if tol_root is not None:
        trajectories.ROOT_XTOL = tol_root
    if tol_quad is not None:
        density.QUAD_RTOL = tol_quad


def _pool_map(fn, items, threads, tol_root=None, tol_quad=None):
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads, initializer=_configure,
                             initargs=(tol_root, tol_quad)) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _rho_row(task):
    q0, theta, g, method = task
    try:
        pt = density.density_point(q0, theta, g, usual=method != "improved",
                                   improved=method != "usual")
    except (DwCausticError, ArithmeticError, ValueError) as exc:
        return {"error": f"q0={q0!r} theta={theta!r} g={g!r}: {exc}"}
    eff = pt.effpot
    if isinstance(eff, density.ThreeExtrema):
        shape, scale = eff.xi, eff.mu
    elif isinstance(eff, density.ComplexPair):
        shape, scale = eff.phi, eff.chi
    else:
        shape = scale = None
    return {
        "q0": q0, "theta": theta, "g": g,
        "n_solutions": classify_region(q0, theta).n_solutions,
        "rho_usual": pt.rho_usual, "rho_improved": pt.rho_improved,
        "F_factor": pt.F_factor, "xi_or_phi": shape, "mu_or_chi": scale,
    }


def _check_errors(rows):
    bad = [r["error"] for r in rows if "error" in r]
    for msg in bad:
        log.error("numerical failure at %s", msg)
    if bad:
        raise NumericalFailure(f"{len(bad)} point(s) failed; first: {bad[0]}")


common = [
    click.option("--out", type=click.Path(dir_okay=False), default=None,
                 help="Output file (default: stdout)."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                 show_default=True),
    click.option("--threads", type=int, default=None,
                 help="Worker processes (default: $CAUSTIC_THREADS or 1)."),
    click.option("--tol-root", type=float, default=None, help="Root-finding xtol override."),
    click.option("--tol-quad", type=float, default=None,
                 help="Relative tolerance of the fluctuation integral."),
]


def with_common(f):
    for opt in reversed(common):
        f = opt(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Semiclassical thermal density of the quartic double well.

    Ranges are START:STOP:STEP, half-open (STOP excluded); lists a,b,c and
    single values are also accepted.
    """
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)


@main.command()
@click.option("--g", "g", type=float, required=True, help="Dimensionless coupling.")
@click.option("--theta", callback=_values_option, required=True,
              help="Inverse temperature: value, list or half-open range.")
@click.option("--q0", callback=_values_option, required=True,
              help="Endpoint: value, list or half-open range.")
@click.option("--method", type=click.Choice(["usual", "improved", "both", "oracle"]),
              default="both", show_default=True)
@click.option("--gnuplot", is_flag=True, help="Write OUT.gp plotting the CSV.")
@with_common
def rho(g, theta, q0, method, gnuplot, out, fmt, threads, tol_root, tol_quad):
    """Usual and improved densities on a (q0, theta) grid."""
    if not g > 0:
        raise click.BadParameter("--g must be positive")
    if any(abs(x) >= 1 for x in q0) or any(t <= 0 for t in theta):
        raise click.BadParameter("need |q0| < 1 and theta > 0")
    _configure(tol_root, tol_quad)
    tasks = [(q, t, g, "both" if method == "oracle" else method)
             for t in theta for q in q0]
    rows = _pool_map(_rho_row, tasks, _threads(threads), tol_root, tol_quad)
    _check_errors(rows)
    columns = list(RHO_COLUMNS)
    if method == "oracle":
        columns.append("rho_exact")
        for t in theta:
            spectrum = exact_rho_diag(PhysParams(g, t), Grid(), order=4)
            for r in rows:
                if r["theta"] == t:
                    r["rho_exact"] = spectrum.density_at(r["q0"])
    emit(render(columns, rows, fmt), out)
    if gnuplot:
        _write_gnuplot(out, fmt, "q0" if len(q0) > 1 else "theta",
                       [c for c in columns if c.startswith("rho")], columns)


def _write_gnuplot(out, fmt, xcol, ycols, columns):
    if not out or fmt != "csv":
        raise click.UsageError("--gnuplot needs --out and CSV output")
    with open(out + ".gp", "w", newline="\n") as fh:
        fh.write(gnuplot_script(out, xcol, ycols, columns))


@main.command()
@click.option("--theta", callback=_values_option, required=True,
              help="Half-open range; curves are traced up to its end.")
@click.option("--single", is_flag=True,
              help="Only the curve values at the given theta value(s).")
@click.option("--gnuplot", is_flag=True, help="Write OUT.gp plotting the CSV.")
@with_common
def caustic(theta, single, gnuplot, out, fmt, threads, tol_root, tol_quad):
    """Caustic curves in the (q0, theta) plane."""
    _configure(tol_root, tol_quad)
    columns = ["curve_id", "kind", "theta", "q0"]
    rows = []
    try:
        if single:
            for t in theta:
                rows.extend(_curve_values(t))
        else:
            lo, hi = theta[0], theta[-1]
            step = theta[1] - theta[0] if len(theta) > 1 else 1e-2
            if not hi > math.pi:
                raise click.BadParameter("theta range must extend beyond pi")
            for i, curve in enumerate(trace_curves(hi, step, created=False), start=1):
                for q, t in curve.points:
                    if t >= lo or (q, t) == curve.cusp:
                        rows.append({"curve_id": i, "kind": curve.label, "theta": t, "q0": q})
    except DwCausticError as exc:
        raise NumericalFailure(str(exc)) from exc
    emit(render(columns, rows, fmt), out)
    if gnuplot:
        _write_gnuplot_xy(out, fmt, columns)


def _write_gnuplot_xy(out, fmt, columns):
    if not out or fmt != "csv":
        raise click.UsageError("--gnuplot needs --out and CSV output")
    with open(out + ".gp", "w", newline="\n") as fh:
        fh.write("set datafile separator ','\n"
                 f"plot '{out}' using 4:3 with points pt 7 ps 0.3 title 'caustics'\n")


def _curve_values(t):
    rows = []
    for j, (_, q) in enumerate(fold_points(t), start=1):
        rows.append({"curve_id": 2 * j - 1, "kind": f"PairCreation({j})",
                     "theta": t, "q0": q})
    m = 1
    while t >= 2 * math.pi * m:
        rows.append({"curve_id": 2 * m, "kind": f"PeriodicSplit({m})", "theta": t,
                     "q0": trajectories.periodic_amplitude(t, m)})
        m += 1
    rows.sort(key=lambda r: r["curve_id"])
    return rows


@main.command()
@click.option("--theta", callback=_values_option, required=True)
@click.option("--qt", callback=_values_option, default=None,
              help="Sweep of real turning points: q0(q_t).")
@click.option("--xi", callback=_values_option, default=None,
              help="Sweep of imaginary turning points i*xi: -i q0(i xi).")
@click.option("--q0", callback=_values_option, default=None,
              help="Sweep of endpoints: every real root and the complex pair.")
@with_common
def branches(theta, qt, xi, q0, out, fmt, threads, tol_root, tol_quad):
    """Turning-point branches: q0(q_t), q0 on the imaginary axis, or q_t(q0)."""
    _configure(tol_root, tol_quad)
    if sum(x is not None for x in (qt, xi, q0)) != 1:
        raise click.UsageError("give exactly one of --qt, --xi, --q0")
    rows = []
    try:
        if qt is not None:
            columns = ["theta", "q_t", "q0"]
            for t in theta:
                for x in qt:
                    rows.append({"theta": t, "q_t": x,
                                 "q0": trajectories.q0_of_qt(x, t)})
        elif xi is not None:
            columns = ["theta", "xi", "minus_i_q0"]
            for t in theta:
                for x in xi:
                    val = trajectories.q0_of_qt(complex(0.0, x), t)
                    rows.append({"theta": t, "xi": x, "minus_i_q0": val.imag})
        else:
            columns = ["theta", "q0", "label", "re_qt", "im_qt"]
            tasks = [(x, t) for t in theta for x in q0]
            for part in _pool_map(_branch_rows, tasks, _threads(threads), tol_root, tol_quad):
                rows.extend(part)
            _check_errors(rows)
    except DwCausticError as exc:
        raise NumericalFailure(str(exc)) from exc
    emit(render(columns, rows, fmt), out)


def _branch_rows(task):
    q0, theta = task
    try:
        sols = list(trajectories.find_real_turning_points(q0, theta))
        if len(sols) == 1 and not (q0 == 0 and theta >= math.pi):
            sols.extend(trajectories.find_complex_pair(q0, theta))
    except (DwCausticError, ArithmeticError, ValueError) as exc:
        return [{"error": f"q0={q0!r} theta={theta!r}: {exc}"}]
    return [{"theta": theta, "q0": q0, "label": s.label,
             "re_qt": s.q_t.real, "im_qt": s.q_t.imag} for s in sols]


@main.command()
@click.option("--only", multiple=True, type=click.Choice(list(CHECKS)),
              help="Run only these checks (repeatable).")
@click.option("--g", "g", type=float, default=None,
              help="Coupling for the oracle comparison (default 0.05).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def validate(only, g, out):
    """Run the acceptance checks and print a JSON report."""
    overrides = {} if g is None else {"g": g}
    if g is not None and not g > 0:
        raise click.BadParameter("--g must be positive")
    ids = list(only) or list(CHECKS)
    results = []
    for cid in ids:
        kw = overrides if cid == "oracle-agreement" else {}
        results.extend(run_checks([cid], **kw))
    for r in results:
        click.echo(r.line(), err=True)
    report = {"passed": all(r.as_dict()["passed"] for r in results),
              "checks": [r.as_dict() for r in results]}
    emit(json.dumps(report, indent=1) + "\n", out)
    if not report["passed"]:
        sys.exit(1)


if __name__ == "__main__":
    main()
