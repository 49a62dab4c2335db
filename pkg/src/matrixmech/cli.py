"""Command-line front end.

One experiment per invocation; each subcommand wires the core modules
together and writes the declared CSV/JSON artifacts. Exit codes: 0 on
success, 1 on domain errors (the error name goes to stderr), 2 on usage
errors. Output files are byte-deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .classical_dynamics import (
    DEFAULT_DT_HINT,
    DEFAULT_OVERSAMPLE,
    DEFAULT_SAMPLES,
    find_orbit,
    orbit_fourier_coefficients,
    parse_potential,
)
from .errors import DomainError
from .quantization import (
    CONVENTIONS,
    build_action_grid,
    ccr_residual,
    correspondence_check,
    quantize,
)
from .spectral_algebra import (
    RYDBERG_CONSTANT,
    SPEED_OF_LIGHT,
    RydbergModel,
    balmer_table,
    check_ritz,
    fit_term_values,
    overtone_ratio,
    read_line_list,
)

# ---------------------------------------------------------------------------
# deterministic emitters (floats always carry 17 significant digits)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_csv(path, header, rows):
    """Write a CSV with a single-newline line terminator; an empty row set
    yields a header-only file."""
    try:
        with open(path, "w", newline="") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_fmt(x) for x in row) + "\n")
    except OSError as err:
        raise OSError(f"cannot write CSV to {path!r}: {err}") from err


def render_json(obj):
    if isinstance(obj, dict):
        body = ", ".join(f"{render_json(str(k))}: {render_json(v)}" for k, v in obj.items())
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def emit_json(path, obj):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(render_json(obj) + "\n")
    except OSError as err:
        raise OSError(f"cannot write JSON to {path!r}: {err}") from err


# ---------------------------------------------------------------------------
# argument plumbing


def _potential(text):
    try:
        return parse_potential(text)
    except DomainError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_rydberg_args(sub):
    sub.add_argument("--rydberg", type=float, default=RYDBERG_CONSTANT,
                     help="Rydberg constant, 1/length (default: %(default)s)")
    sub.add_argument("--light-speed", type=float, default=SPEED_OF_LIGHT,
                     help="speed of light, length/time (default: %(default)s)")


def _add_orbit_args(sub):
    sub.add_argument("--potential", type=_potential, required=True,
                     help="potential spec: family:key=value[,key=value]* "
                          "(families: harmonic(omega0), quartic(lambda), "
                          "pendulum(g,L), poly(c0,c1,...); M = mass, default 1; "
                          "example: quartic:lambda=0.25)")
    sub.add_argument("--dt-hint", type=float, default=DEFAULT_DT_HINT,
                     help="initial time step for the period scan (default: %(default)s)")
    sub.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                     help="samples stored per period (default: %(default)s)")
    sub.add_argument("--oversample", type=int, default=DEFAULT_OVERSAMPLE,
                     help="integration substeps per stored sample (default: %(default)s)")


def _add_grid_args(sub):
    _add_orbit_args(sub)
    sub.add_argument("--hbar", type=float, default=1.0,
                     help="action quantum (default: %(default)s)")
    sub.add_argument("--levels", type=int, required=True, help="number of action levels N")
    sub.add_argument("--band", type=int, default=2,
                     help="half-bandwidth W: entries with |m-n|>W are zero (default: %(default)s)")
    sub.add_argument("--convention", choices=CONVENTIONS, default="upper",
                     help="action at which entry (m,n) is evaluated (default: %(default)s)")


def _solver_kwargs(args):
    return {
        "dt_hint": args.dt_hint,
        "n_samples": args.samples,
        "oversample": args.oversample,
    }


def _observable_help():
    return "observable: q, p, q2, p2, H, or poly:i,j=c[;i,j=c]* (powers of q and p)"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ritz_fit(args):
    table, mask = read_line_list(args.input)
    terms = fit_term_values(table, mask)
    emit_json(args.out, terms.to_json_obj())
    print(f"levels={table.size} lines={len(mask)} residual={_fmt(terms.residual)}")
    return 0


def _cmd_balmer(args):
    model = RydbergModel(args.rydberg, args.light_speed)
    table = balmer_table(model, args.levels)
    report = check_ritz(table)
    obj = {
        "R": model.rydberg,
        "c": model.light_speed,
        "levels": args.levels,
        "note": "matrix index i corresponds to principal level i+1",
        "terms": [model.term_value(i + 1) for i in range(args.levels)],
        "omega": [[float(x) for x in row] for row in table.omega],
    }
    emit_json(args.out, obj)
    print(f"levels={args.levels} worst_ritz_violation={_fmt(report.worst_violation)}")
    return 0


def _cmd_overtone(args):
    model = RydbergModel(args.rydberg, args.light_speed)
    rows = []
    for m in args.m:
        for k in args.k:
            ratio = overtone_ratio(model, m, k)
            rows.append((m, k, ratio, abs(ratio - 1.0)))
    for m, k, ratio, dev in rows:
        print(f"m={m} k={k} ratio={_fmt(ratio)} abs_dev={_fmt(dev)}")
    if args.out:
        emit_csv(args.out, "m,k,ratio,abs_dev", rows)
    return 0


def _cmd_orbit(args):
    orbit = find_orbit(args.potential, args.energy, **_solver_kwargs(args))
    emit_csv(args.out, "t,q,p", zip(orbit.t, orbit.q, orbit.p))
    sidecar = args.sidecar or args.out + ".json"
    emit_json(sidecar, orbit.sidecar())
    print(
        f"T={_fmt(orbit.period)} E={_fmt(orbit.energy)} I={_fmt(orbit.action)} "
        f"omega={_fmt(orbit.omega)}"
    )
    return 0


def _cmd_fourier(args):
    orbit = find_orbit(args.potential, args.energy, **_solver_kwargs(args))
    series = orbit_fourier_coefficients(orbit, args.observable, args.n_max)
    if args.out:
        emit_json(args.out, series.to_json_obj())
    for n, c in series.coeffs.items():
        print(f"n={n} re={_fmt(c.real)} im={_fmt(c.imag)}")
    print(f"omega={_fmt(series.omega)} real={'yes' if series.is_real else 'no'}")
    return 0


def _cmd_quantize(args):
    grid = build_action_grid(args.potential, args.hbar, args.levels, **_solver_kwargs(args))
    matrix = quantize(grid, args.observable, convention=args.convention, band=args.band)
    emit_json(args.out, matrix.to_json_obj())
    print(
        f"label={matrix.label} N={matrix.n} band={matrix.band} "
        f"hermitian={'yes' if matrix.is_hermitian() else 'no'}"
    )
    return 0


def _cmd_ccr(args):
    grid = build_action_grid(args.potential, args.hbar, args.levels, **_solver_kwargs(args))
    report = ccr_residual(grid, band=args.band, convention=args.convention)
    emit_csv(args.out, "m,re_dev,im_dev,max_offdiag_row", report.rows())
    print(
        f"max_diag_dev={_fmt(report.max_diag_dev)} "
        f"max_offdiag={_fmt(report.max_offdiag)} "
        f"interior=[{report.interior.start},{report.interior.stop - 1}]"
    )
    return 0


def _cmd_correspondence(args):
    grid = build_action_grid(args.potential, args.hbar, args.levels, **_solver_kwargs(args))
    rows = []
    for m in args.m:
        rep = correspondence_check(grid, args.a, args.b, args.ell, m, args.band)
        rows.append(
            (
                m,
                rep.matrix_value.real,
                rep.matrix_value.imag,
                rep.bracket_value.real,
                rep.bracket_value.imag,
                rep.bracket_convolution.real,
                rep.bracket_convolution.imag,
                rep.rel_error,
            )
        )
        print(
            f"m={m} matrix={_fmt(rep.matrix_value.real)}{rep.matrix_value.imag:+.17g}j "
            f"bracket={_fmt(rep.bracket_value.real)}{rep.bracket_value.imag:+.17g}j "
            f"rel_error={_fmt(rep.rel_error)}"
        )
    if args.out:
        emit_csv(
            args.out,
            "m,re_matrix,im_matrix,re_bracket,im_bracket,re_bracket_conv,im_bracket_conv,rel_error",
            rows,
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="matrixmech",
        description="Numerical experiments from classical periodic orbits to "
                    "quantum transition matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sweeps (default: %(default)s); "
                             "all current subcommands are deterministic")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ritz-fit", help="fit term values to an observed line list")
    s.add_argument("--input", required=True, help="CSV with header m,n,omega (0-based indices)")
    s.add_argument("--out", required=True, help="term-value JSON output path")
    s.set_defaults(func=_cmd_ritz_fit)

    s = sub.add_parser("balmer", help="hydrogen-like frequency table from term values 2*pi*R*c/m^2")
    _add_rydberg_args(s)
    s.add_argument("--levels", type=int, required=True, help="number of principal levels")
    s.add_argument("--out", required=True, help="table JSON output path")
    s.set_defaults(func=_cmd_balmer)

    s = sub.add_parser("overtone", help="jump frequency over k times the classical fundamental")
    _add_rydberg_args(s)
    s.add_argument("--m", type=_int_list, required=True, help="level(s), comma separated")
    s.add_argument("--k", type=_int_list, required=True, help="jump(s), comma separated")
    s.add_argument("--out", help="optional CSV output path")
    s.set_defaults(func=_cmd_overtone)

    s = sub.add_parser("orbit", help="integrate one closed orbit and export t,q,p samples")
    _add_orbit_args(s)
    s.add_argument("--energy", type=float, required=True)
    s.add_argument("--out", required=True, help="CSV output path (header t,q,p)")
    s.add_argument("--sidecar", help="metadata JSON path (default: <out>.json)")
    s.set_defaults(func=_cmd_orbit)

    s = sub.add_parser("fourier", help="orbit Fourier coefficients of an observable")
    _add_orbit_args(s)
    s.add_argument("--energy", type=float, required=True)
    s.add_argument("--observable", default="q", help=_observable_help() + " (default: %(default)s)")
    s.add_argument("--n-max", type=int, default=8,
                   help="harmonics -n..n to report (default: %(default)s)")
    s.add_argument("--out", help="optional series JSON output path")
    s.set_defaults(func=_cmd_fourier)

    s = sub.add_parser("quantize", help="build the banded transition matrix of an observable")
    _add_grid_args(s)
    s.add_argument("--observable", default="q", help=_observable_help() + " (default: %(default)s)")
    s.add_argument("--out", required=True, help="matrix JSON output path")
    s.set_defaults(func=_cmd_quantize)

    s = sub.add_parser("ccr", help="commutator [P,Q] against (hbar/i) I on the interior block")
    _add_grid_args(s)
    s.add_argument("--out", required=True, help="report CSV path (m,re_dev,im_dev,max_offdiag_row)")
    s.set_defaults(func=_cmd_ccr)

    s = sub.add_parser("correspondence",
                       help="matrix commutator entry vs (hbar/i) x bracket overtone")
    _add_grid_args(s)
    s.add_argument("--a", default="p", help=_observable_help() + " (default: %(default)s)")
    s.add_argument("--b", default="q", help=_observable_help() + " (default: %(default)s)")
    s.add_argument("--ell", type=int, default=0, help="diagonal offset (default: %(default)s)")
    s.add_argument("--m", type=_int_list, required=True, help="interior row(s), comma separated")
    s.add_argument("--out", help="optional CSV output path")
    s.set_defaults(func=_cmd_correspondence)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as err:
        print(f"error: {err.name}: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: io: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
