"""Batch command line interface.

Report-oriented and non-interactive: every subcommand reads JSON inputs
(matrix schema {"dim", "re", "im"}, state schema {"n", "q", "p"}), writes
JSON or CSV to --out (stdout by default), and is deterministic for fixed
inputs and --seed.  Exit codes: 0 success, 1 numerical failure such as
non-convergence, 2 input validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

import numpy as np

from . import coulomb as coulomb_mod
from . import io as gio
from .classical import KeplerState, conformal_flow, kepler_chart
from .dof import build_split_operators, cantor_pair, cantor_unpair, pairing_table
from .factorizations import factorize
from .geometry import HermitianOperator, bracket, critical_spectrum
from .independence import independence_test, sample_states
from .oscillator import deform_2d, hq_operator, q_deform, q_profile


def _fmt(value, precision):
    return format(float(value), f".{precision}g")


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _csv_text(header, rows, precision):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [_fmt(v, precision) if isinstance(v, float) else v for v in row]
        )
    return buf.getvalue()


def _load_hermitian(path) -> HermitianOperator:
    return HermitianOperator(gio.load_matrix(path))


# --- subcommand handlers ----------------------------------------------------


def _cmd_brackets(args) -> int:
    a = _load_hermitian(args.a)
    b = _load_hermitian(args.b)
    obs = bracket(a, b, args.kind)
    _emit(_dump_json(gio.matrix_to_dict(obs.matrix)), args.out)
    return 0


def _cmd_spectrum(args) -> int:
    a = _load_hermitian(args.a)
    res = critical_spectrum(a, trials=args.trials or 10 * a.dim, tol=args.tol,
                            seed=args.seed)
    rows = [(float(p.value), p.multiplicity) for p in res.points]
    text = _csv_text(["value", "multiplicity"], rows, args.precision)
    _emit(text, args.out)
    if not res.fully_converged:
        print(f"warning: {res.failed_trials} trial(s) did not converge", file=sys.stderr)
        return 1
    return 0


def _cmd_independence(args) -> int:
    ops = [_load_hermitian(p) for p in args.ops]
    rng = np.random.default_rng(args.seed)
    samples = sample_states(ops[0].dim, args.samples, rng)
    rep = independence_test(ops, samples, svd_tol=args.svd_tol)
    _emit(rep.to_json(), args.out)
    return 0


def _cmd_kepler(args) -> int:
    with open(args.state, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    state = KeplerState(**payload)
    chart = kepler_chart(state, with_angles=args.angles)
    out = {
        "J": chart.J.tolist(),
        "angles": None if not args.angles else chart.angles.tolist(),
        "energy": chart.energy,
        "frequency": chart.frequency,
    }
    _emit(_dump_json(out), args.out)
    return 0


_FLOW_PROFILES = {
    "constant": lambda omega: (lambda r2: omega),
    "quadratic": lambda omega: (lambda r2: omega * r2),
    "sin": lambda omega: (lambda r2: omega * np.sin(r2)),
}


def _cmd_flow(args) -> int:
    profile = _FLOW_PROFILES[args.profile](args.omega)
    x, p = conformal_flow(args.x0, args.p0, args.t, profile)
    payload = {"x": x, "p": p, "radius": float(np.hypot(x, p))}
    _emit(_dump_json(payload), args.out)
    return 0


def _cmd_deform(args) -> int:
    if args.mode == "1d":
        osc = q_deform(args.dim, args.hbar)
        hq = np.diag(hq_operator(args.dim, args.hbar).matrix).real
        comm = np.diag(osc.A @ osc.A_dag - osc.A_dag @ osc.A)
        closed = osc.commutator_diagonal_closed_form()
        rows = []
        for n in range(args.dim):
            row = [n, float(osc.f_values[n]), float(osc.N_op[n, n].real), float(hq[n])]
            if n < args.dim - 1:
                row += [float(comm[n]), float(closed[n]), float(abs(comm[n] - closed[n]))]
            else:
                row += ["", "", ""]  # truncation boundary: commutator artifact row
            rows.append(row)
        header = ["n", "f", "number_eigenvalue", "hq_eigenvalue",
                  "commutator", "closed_form", "defect"]
        _emit(_csv_text(header, rows, args.precision), args.out)
        return 0
    h = deform_2d(args.dim, lambda n: q_profile(args.hbar, n)[0], args.mode)
    diag = np.diag(h.matrix).real
    rows = []
    for na in range(args.dim):
        for nb in range(args.dim):
            rows.append([na, nb, float(diag[na * args.dim + nb])])
    _emit(_csv_text(["n_a", "n_b", "energy"], rows, args.precision), args.out)
    return 0


def _cmd_coulomb(args) -> int:
    spec = coulomb_mod.coulomb_spectrum(args.dim, k=args.k, m=args.m,
                                        n_levels=args.levels)
    _emit(spec.to_csv(precision=args.precision), args.out)
    return 0


def _cmd_factorize(args) -> int:
    with open(args.a, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    matrix = gio.matrix_from_dict(payload)
    if np.max(np.abs(matrix.imag)) > 0:
        raise ValueError("factorize expects a real matrix")
    res = factorize(matrix.real, tol=args.tol, seed=args.seed)
    out = {
        "solutions": [
            {
                "lambda": sol.Lambda.tolist(),
                "h": sol.H.tolist(),
                "residual": sol.residual,
            }
            for sol in res.solutions
        ],
        "family_dimension": res.family_dimension,
        "odd_traces": res.diagnostics["odd_traces"],
    }
    _emit(_dump_json(out), args.out)
    return 0


def _cmd_dof(args) -> int:
    if args.pair is not None:
        _emit(str(cantor_pair(*args.pair)), args.out)
        return 0
    if args.unpair is not None:
        n1, n2 = cantor_unpair(args.unpair)
        _emit(f"{n1} {n2}", args.out)
        return 0
    if args.table is not None:
        table = pairing_table(args.table)
        rows = [[n, *table.forward[n]] for n in range(args.table + 1)]
        _emit(_csv_text(["n", "n1", "n2"], rows, args.precision), args.out)
        return 0
    if args.split is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # truncation-shape warning is advisory
            ops = build_split_operators(args.split, hbar=args.hbar, omega=args.omega)
        rows = [
            [k, int(ops.n1_diag[k]), int(ops.n2_diag[k]), float(ops.h_diag[k])]
            for k in range(args.split)
        ]
        _emit(_csv_text(["k", "n1", "n2", "energy"], rows, args.precision), args.out)
        return 0
    raise ValueError("dof needs one of --pair, --unpair, --table, --split")


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoqm",
        description="Batch front end: observable brackets, critical spectra, "
        "independence tests, Kepler charts, conformal flows, deformed "
        "oscillators, Coulomb spectra, Hamiltonian factorizations, and "
        "spectrum-splitting label tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--precision", type=int, default=12,
                        help="significant digits in CSV output (default 12)")

    p = sub.add_parser("brackets", parents=[common],
                       help="riemann/poisson/star bracket of two quadratic observables")
    p.add_argument("--a", required=True, help="matrix JSON for the first operator")
    p.add_argument("--b", required=True, help="matrix JSON for the second operator")
    p.add_argument("--kind", choices=["riemann", "poisson", "star"], required=True)
    p.set_defaults(func=_cmd_brackets)

    p = sub.add_parser("spectrum", parents=[common],
                       help="critical values of the expectation function on the sphere")
    p.add_argument("--a", required=True, help="matrix JSON")
    p.add_argument("--trials", type=int, default=None,
                   help="random starts (default 10*dim)")
    p.add_argument("--tol", type=float, default=1e-10, help="gradient norm threshold")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("independence", parents=[common],
                       help="functional-independence rank test of observable families")
    p.add_argument("--ops", nargs="+", required=True, help="matrix JSON files")
    p.add_argument("--samples", type=int, default=50, help="number of sample states")
    p.add_argument("--svd-tol", type=float, default=1e-8,
                   help="relative singular-value threshold")
    p.set_defaults(func=_cmd_independence)

    p = sub.add_parser("kepler", parents=[common],
                       help="action-angle chart of a bound Kepler state")
    p.add_argument("--state", required=True, help="Kepler state JSON")
    p.add_argument("--angles", action=argparse.BooleanOptionalAction, default=False,
                   help="also evaluate the angle formulas (coordinate-singular "
                        "tori are rejected)")
    p.set_defaults(func=_cmd_kepler)

    p = sub.add_parser("flow", parents=[common],
                       help="closed-form conformal circular flow on the plane")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--profile", choices=sorted(_FLOW_PROFILES), default="constant")
    p.add_argument("--omega", type=float, default=1.0,
                   help="rate multiplier of the profile")
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("deform", parents=[common],
                       help="q-deformed oscillator spectra and commutator defects")
    p.add_argument("--dim", type=int, required=True, help="Fock truncation size")
    p.add_argument("--hbar", type=float, required=True, help="deformation parameter")
    p.add_argument("--mode", choices=["1d", "symmetric", "broken"], default="1d")
    p.set_defaults(func=_cmd_deform)

    p = sub.add_parser("coulomb", parents=[common],
                       help="bound Coulomb levels and degeneracies from oscillator "
                            "enumeration")
    p.add_argument("--dim", type=int, choices=[2, 3], required=True)
    p.add_argument("--k", type=float, default=1.0, help="coupling")
    p.add_argument("--m", type=float, default=1.0, help="mass")
    p.add_argument("--levels", type=int, default=8)
    p.set_defaults(func=_cmd_coulomb)

    p = sub.add_parser("factorize", parents=[common],
                       help="antisymmetric times symmetric factorizations of a "
                            "real matrix")
    p.add_argument("--a", required=True, help="matrix JSON (real)")
    p.add_argument("--tol", type=float, default=1e-10, help="residual threshold")
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("dof", parents=[common],
                       help="spectrum-splitting label arithmetic and tables")
    p.add_argument("--pair", type=int, nargs=2, metavar=("N1", "N2"), default=None)
    p.add_argument("--unpair", type=int, default=None)
    p.add_argument("--table", type=int, default=None, metavar="MAX_N")
    p.add_argument("--split", type=int, default=None, metavar="D",
                   help="split-label operator table of size D")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=_cmd_dof)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as err:
        print(f"error: malformed JSON: line {err.lineno} column {err.colno}: {err.msg}",
              file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError, TypeError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
