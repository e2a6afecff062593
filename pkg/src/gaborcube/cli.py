"""Command-line front end: verification reports, classification, sweeps.

All reports are machine-readable (JSON by default, CSV where a report is a
row stream); figures are an optional extra rendered from the same rows.
Exit codes: 0 for pass verdicts, 1 for fail verdicts (with witnesses in the
report), 2 for usage or domain errors, including malformed input JSON.
"""

from __future__ import annotations

import functools
import json
import math
import os
import sys

import click
import numpy as np

from .classify import (
    ClassifyFailure,
    check_pseudo_structure,
    classify_1d,
    classify_2d,
)
from .errors import (
    ConstructionError,
    DomainError,
    PreconditionError,
    QuadratureError,
)
from .frame import CubeIndicator, check_onb, parseval_shells
from .ortho import check_orthogonality
from .sets import Box, CubeTiling2D, IndexedParam, from_json, tf_dim, to_json
from .stft import EPS_INT, Window, in_zero_set, stft_1d, stft_nd, stft_quadrature
from .tiling import (
    check_tiling,
    convolution_oracle,
    estimate_density,
    oracle_interior_slice,
)

_USAGE_ERRORS = (DomainError, ConstructionError, PreconditionError, QuadratureError)


def _guard(fn):
    """Map library domain errors onto exit code 2 with their message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _USAGE_ERRORS as exc:
            raise click.UsageError(str(exc))

    return wrapper


def _threads() -> int:
    """Honor GABOR_CUBE_THREADS; evaluation is sequential, so this only
    validates and records the requested degree."""
    raw = os.environ.get("GABOR_CUBE_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise click.UsageError(f"GABOR_CUBE_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise click.UsageError("GABOR_CUBE_THREADS must be >= 1")
    return value


def _load_set(arg: str):
    """Parse a structured set from inline JSON or a file path."""
    if arg.lstrip().startswith("{"):
        text, origin = arg, "<inline>"
    else:
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise click.UsageError(f"cannot read {arg}: {exc}")
        origin = arg
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.UsageError(
            f"malformed JSON in {origin} at line {exc.lineno} column {exc.colno} "
            f"(char {exc.pos}): {exc.msg}"
        )
    return from_json(obj)


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


def _floats(text: str, dim: int, what: str) -> np.ndarray:
    try:
        vals = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise click.UsageError(f"{what} must be comma-separated reals, got {text!r}")
    if len(vals) != dim:
        raise click.UsageError(f"{what} needs {dim} coordinates, got {len(vals)}")
    return vals


def _require_radius(radius: float) -> None:
    if radius < 2:
        raise click.UsageError("tiling-dependent commands need --radius >= 2")


@click.group()
def main():
    """Construct, verify and classify unit-cube Gabor orthonormal sets."""
    _threads()


@main.command("eval-stft")
@click.option("--window", type=click.Choice(["cube", "secant"]), default="cube")
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("-t", "t_text", required=True, help="time shift, comma-separated")
@click.option("-n", "--nu", "nu_text", required=True, help="frequency, comma-separated")
@click.option("--quadrature-tol", type=float, default=None,
              help="also evaluate by adaptive quadrature at this tolerance")
@_guard
def eval_stft(window, dim, t_text, nu_text, quadrature_tol):
    """Evaluate the window's self-transform at one time-frequency point."""
    t = _floats(t_text, dim, "-t")
    nu = _floats(nu_text, dim, "-n")
    if window == "cube":
        w = Window.unit_cube(dim)
        value = stft_nd(dim, t, nu) if dim > 1 else stft_1d(float(t[0]), float(nu[0]))
    else:
        if dim != 1:
            raise click.UsageError("the secant window is one-dimensional")
        w = Window.hyperbolic_secant()
        value = stft_quadrature(w, t, nu, quadrature_tol or 1e-10)
    report = {
        "window": window,
        "t": list(map(float, t)),
        "nu": list(map(float, nu)),
        "value": {"re": value.real, "im": value.imag},
        "abs": abs(value),
        "in_zero_set": in_zero_set(w, t, nu),
    }
    if quadrature_tol is not None and window == "cube":
        qval = stft_quadrature(w, t, nu, quadrature_tol)
        report["quadrature"] = {
            "re": qval.real,
            "im": qval.imag,
            "difference": abs(value - qval),
        }
    _emit(report)


@main.group()
def check():
    """Verification subcommands: ortho, tiling, onb."""


@check.command("ortho")
@click.argument("set_arg", metavar="SET")
@click.option("--radius", type=float, default=3.0, show_default=True)
@click.option("--eps-int", type=float, default=EPS_INT, show_default=True)
@_guard
def check_ortho(set_arg, radius, eps_int):
    """Pairwise orthogonality of the windowed enumeration."""
    s = _load_set(set_arg)
    d = tf_dim(s)
    report = check_orthogonality(s, Window.unit_cube(d), Box.centered(radius, 2 * d),
                                 eps_int=eps_int)
    _emit(report.to_json())
    sys.exit(0 if report.verdict else 1)


@check.command("tiling")
@click.argument("set_arg", metavar="SET")
@click.option("--radius", type=float, default=3.0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--resolution", type=float, default=1.0 / 64,
              help="grid step for the CSV coverage counts")
@click.option("--plot", type=click.Path(), default=None,
              help="also render the coverage grid to this PNG (2D sets only)")
@_guard
def check_tiling_cmd(set_arg, radius, fmt, resolution, plot):
    """Exact-cover verdict for the unit-cube translates of the set."""
    _require_radius(radius)
    s = _load_set(set_arg)
    box = Box.centered(radius, s.n)
    pts = s.enumerate(box)
    report = check_tiling(pts, box)
    needs_grid = fmt == "csv" or plot
    if needs_grid and s.n != 2:
        raise click.UsageError("coverage grids are only emitted for sets in R^2")
    if needs_grid:
        grid = convolution_oracle(pts, box, resolution)
        if plot:
            from .plots import plot_coverage

            plot_coverage(grid, box, resolution, plot)
    if fmt == "csv":
        click.echo("x,y,count")
        sl = oracle_interior_slice(box, resolution)
        for i in range(sl[0].start, sl[0].stop):
            x = box.lo[0] + i * resolution
            for j in range(sl[1].start, sl[1].stop):
                y = box.lo[1] + j * resolution
                click.echo(f"{x!r},{y!r},{grid[i, j]}")
    else:
        _emit(report.to_json())
    sys.exit(0 if report.ok else 1)


@check.command("onb")
@click.argument("set_arg", metavar="SET")
@click.option("--radius", type=float, default=3.0, show_default=True)
@click.option("--trunc-radius", type=float, default=None,
              help="frequency truncation for Parseval evidence (omit to skip)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--plot", type=click.Path(), default=None,
              help="render the Parseval convergence curve to this PNG")
@_guard
def check_onb_cmd(set_arg, radius, trunc_radius, fmt, plot):
    """Orthonormal-basis verdict: orthogonality plus windowed tiling."""
    _require_radius(radius)
    s = _load_set(set_arg)
    d = tf_dim(s)
    w = Window.unit_cube(d)
    box = Box.centered(radius, 2 * d)
    tests, trunc = (), None
    if trunc_radius is not None:
        tests = (CubeIndicator((0.3,) * d, (0.8,) * d),)
        trunc = Box(
            (-radius,) * d + (-trunc_radius,) * d,
            (radius,) * d + (trunc_radius,) * d,
        )
    verdict = check_onb(s, w, tests, box, trunc)
    if fmt == "csv" or plot:
        if trunc_radius is None:
            raise click.UsageError("convergence rows need --trunc-radius")
        radii = [2.0 * 2 ** k for k in range(int(math.log2(trunc_radius / 2)) + 1)]
        rows = parseval_shells(tests[0], s, w, Box.centered(radius, d), radii)
        if plot:
            from .plots import plot_convergence

            plot_convergence(rows, plot)
        if fmt == "csv":
            click.echo("radius,value")
            for r, v in rows:
                click.echo(f"{r!r},{v!r}")
    if fmt == "json":
        _emit(verdict.to_json())
    sys.exit(0 if verdict.verdict else 1)


@main.command("classify")
@click.argument("set_arg", metavar="SET")
@click.option("--radius", type=float, default=3.0, show_default=True)
@click.option("--pseudo-split", type=int, default=None,
              help="also test the pseudo-standard split at this m")
@_guard
def classify_cmd(set_arg, radius, pseudo_split):
    """Recover the generating structure of a verified set."""
    _require_radius(radius)
    s = _load_set(set_arg)
    d = tf_dim(s)
    box = Box.centered(radius, 2 * d)
    if d == 1:
        result = classify_1d(s, box)
    elif d == 2:
        result = classify_2d(s, box)
    else:
        raise click.UsageError("classification is implemented for d in {1, 2}")
    report = result.to_json()
    if pseudo_split is not None:
        report["pseudo"] = check_pseudo_structure(s, pseudo_split, box).to_json()
    _emit(report)
    sys.exit(1 if isinstance(result, ClassifyFailure) else 0)


@main.command("construct")
@click.argument("set_arg", metavar="SET")
@_guard
def construct_cmd(set_arg):
    """Canonicalize a structured-set description (or a classify report)."""
    if set_arg.lstrip().startswith("{"):
        try:
            obj = json.loads(set_arg)
        except json.JSONDecodeError as exc:
            raise click.UsageError(
                f"malformed JSON at line {exc.lineno} column {exc.colno} "
                f"(char {exc.pos}): {exc.msg}"
            )
    else:
        try:
            with open(set_arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise click.UsageError(f"cannot read {set_arg}: {exc}")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise click.UsageError(
                f"malformed JSON in {set_arg} at line {exc.lineno} column "
                f"{exc.colno} (char {exc.pos}): {exc.msg}"
            )
    if isinstance(obj, dict) and "set" in obj and "type" not in obj:
        obj = obj["set"]
    _emit(to_json(from_json(obj)))


@main.command("density")
@click.argument("set_arg", metavar="SET")
@click.option("--t", "t_radius", type=float, default=4.0, show_default=True)
@_guard
def density_cmd(set_arg, t_radius):
    """Empirical point density of the set on [-T, T)^n."""
    s = _load_set(set_arg)
    pts = s.enumerate(Box.centered(t_radius, s.n))
    _emit({
        "T": t_radius,
        "count": int(len(pts)),
        "density": estimate_density(pts, t_radius),
    })


def sample_stft_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """Seeded (t, nu) samples in [-2,2] x [-20,20] kept clear of the zero
    variety of the cube self-transform (and of the |t| = 1 support edge)."""
    out = np.empty((count, 2))
    have = 0
    while have < count:
        t = rng.uniform(-2.0, 2.0, size=4 * (count - have))
        nu = rng.uniform(-20.0, 20.0, size=len(t))
        keep = np.abs(np.abs(t) - 1.0) >= 1e-4
        inside = np.abs(t) < 1.0
        u = nu * (1.0 - np.abs(t))
        near = (np.round(u) != 0) & (np.abs(u - np.round(u)) < 1e-4 * (np.abs(nu) + 1.0))
        keep &= ~(inside & near)
        t, nu = t[keep], nu[keep]
        take = min(len(t), count - have)
        out[have:have + take, 0] = t[:take]
        out[have:have + take, 1] = nu[:take]
        have += take
    return out


def random_strip_family(rng: np.random.Generator) -> CubeTiling2D:
    """Random row/column strip tiling with 1/64-snapped offsets, |k| <= 6."""
    axis = "rows" if rng.integers(2) else "columns"
    table = {(int(k),): float(rng.integers(0, 64)) / 64.0 for k in range(-6, 7)}
    return CubeTiling2D(axis, IndexedParam(table))


def _oracle_tiles(pts: np.ndarray, box: Box, resolution: float) -> bool:
    grid = convolution_oracle(pts, box, resolution)
    return bool(np.all(grid[oracle_interior_slice(box, resolution)] == 1))


def _sweep_stft(count: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    w = Window.unit_cube(1)
    samples = sample_stft_points(rng, count)
    failures = []
    max_err = 0.0
    for t, nu in samples:
        closed = stft_1d(t, nu)
        quad = stft_quadrature(w, [t], [nu], 1e-10)
        err = abs(closed - quad)
        max_err = max(max_err, err)
        zero_pred = in_zero_set(w, [t], [nu])
        zero_num = abs(closed) <= 1e-8
        if err > 1e-8 or zero_pred != zero_num:
            failures.append({"t": t, "nu": nu, "error": err,
                             "in_zero_set": zero_pred, "near_zero": zero_num})
    return {"kind": "stft", "count": count, "seed": seed,
            "max_abs_error": max_err, "failures": failures[:20],
            "failure_count": len(failures)}


def _sweep_tiling(count: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    box = Box.centered(4.0, 2)
    res = 1.0 / 64
    failures = []
    for i in range(count):
        fam = random_strip_family(rng)
        pts = fam.enumerate(box)
        ok_sweep = check_tiling(pts, box).ok
        ok_oracle = _oracle_tiles(pts, box, res)
        if not (ok_sweep and ok_oracle):
            failures.append({"case": i, "stage": "intact",
                             "sweep": ok_sweep, "oracle": ok_oracle})
            continue
        broken = pts.copy()
        # Perturb a cube that stays inside the interior-safe region even
        # after the shift, so both detectors can see the damage.
        eligible = np.flatnonzero(
            np.all((broken >= -3.0) & (broken + 1.25 <= 3.0), axis=1)
        )
        idx = int(eligible[rng.integers(len(eligible))])
        if rng.integers(2):
            broken = np.delete(broken, idx, axis=0)
        else:
            broken[idx, 0] += 0.25
        bad_sweep = check_tiling(broken, box).ok
        bad_oracle = _oracle_tiles(broken, box, res)
        if bad_sweep or bad_oracle:
            failures.append({"case": i, "stage": "perturbed",
                             "sweep": bad_sweep, "oracle": bad_oracle})
    return {"kind": "tiling", "count": count, "seed": seed,
            "failures": failures[:20], "failure_count": len(failures)}


@main.command("sweep")
@click.option("--kind", type=click.Choice(["stft", "tiling"]), required=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_guard
def sweep_cmd(kind, count, seed):
    """Randomized property sweep: closed form vs oracle agreement."""
    if count < 1:
        raise click.UsageError("--count must be >= 1")
    report = _sweep_stft(count, seed) if kind == "stft" else _sweep_tiling(count, seed)
    _emit(report)
    sys.exit(0 if report["failure_count"] == 0 else 1)


if __name__ == "__main__":
    main()
