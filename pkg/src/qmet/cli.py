"""Command-line front-end.  Every command writes CSV (to ``--out`` or stdout);
human-readable summaries go to stderr.

Exit codes: 0 success (a "non-optimal" verdict is a success), 2 invalid
arguments or inputs, 1 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import math
import os
import sys

import numpy as np

from . import estimate, fisher, purestate, qubit, spinrep, werner
from .errors import NumericalError, ValidationError

SEED_ENV = "QMET_SEED"


class UsageError(ValidationError):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.12g" % float(x)


def _write_csv(args, header, rows) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


# ----- argument parsers -------------------------------------------------


def _floats(text: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    return vals


def _vec3(text: str) -> np.ndarray:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three numbers, got {text!r}")
    return np.array(vals)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("I", "i")
    return complex(t.replace("i", "j")) if t else 0j


def parse_state(spec: str, n: int | None) -> spinrep.SymmetricState:
    """``fock:j``, ``noon``, ``twin-fock``, ``bh:u_over_j``, ``coherent`` or
    ``coeffs:c0,c1,...`` (complex written ``re+imi``; normalised here).
    """
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "coeffs":
        try:
            c = np.array([_complex(v) for v in arg.split(",")], dtype=np.complex128)
        except ValueError:
            raise UsageError(f"cannot parse amplitudes {arg!r}")
        if n is not None and len(c) != n + 1:
            raise UsageError(f"{len(c)} amplitudes given but --n {n} needs {n + 1}")
        if len(c) < 2 or np.linalg.norm(c) == 0:
            raise UsageError("need at least two amplitudes, not all zero")
        return spinrep.SymmetricState.normalized(c)
    if n is None:
        raise UsageError(f"state {spec!r} needs --n")
    if kind == "fock":
        try:
            j = int(arg)
        except ValueError:
            raise UsageError(f"fock state needs an integer index, got {arg!r}")
        return spinrep.fock_state(n, j)
    if kind == "noon":
        return spinrep.noon_state(n)
    if kind in ("twin-fock", "twin_fock"):
        return spinrep.twin_fock_state(n)
    if kind == "bh":
        try:
            u = float(arg)
        except ValueError:
            raise UsageError(f"bh state needs a number u/J, got {arg!r}")
        return spinrep.bose_hubbard_ground(n, u)
    if kind == "coherent":
        return spinrep.coherent_spin_state(n)
    raise UsageError(f"unknown state spec {spec!r}")


def parse_qubit_povm(spec: str, s) -> qubit.QubitPovmSet:
    """``sld`` | ``angle:PHI`` | ``proj:qx,qy,qz`` | ``elements:g,qx,qy,qz;...``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "sld":
            return qubit.QubitPovmSet.projective(qubit.in_plane_frame(s)[1])
        if kind == "angle":
            fam = qubit.optimal_q_solutions(s)
            return qubit.QubitPovmSet.projective(fam.direction(float(arg)))
        if kind == "proj":
            return qubit.QubitPovmSet.projective(_vec3(arg))
        if kind == "elements":
            elems = []
            for part in arg.split(";"):
                vals = _floats(part)
                if len(vals) != 4:
                    raise UsageError(f"element {part!r} needs gamma,qx,qy,qz")
                elems.append(qubit.QubitPovmElement(vals[0], np.array(vals[1:])))
            return qubit.QubitPovmSet(tuple(elems))
    except (argparse.ArgumentTypeError, ValueError) as exc:
        raise UsageError(str(exc))
    raise UsageError(f"unknown qubit POVM spec {spec!r}")


# ----- commands ---------------------------------------------------------


def cmd_werner_fig2(args) -> int:
    if not args.alphas:
        raise UsageError("--alphas must list at least one value")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if not args.theta_max > args.theta_min:
        raise UsageError("--theta-max must exceed --theta-min")
    thetas = np.linspace(args.theta_min, args.theta_max, args.points)
    table = werner.fig2_table(args.alphas, thetas)
    header = ["theta"]
    for a in args.alphas:
        header += [f"cfi_imb_{a:g}", f"qfi_{a:g}"]
    _write_csv(args, header, table.tolist())
    return 0


def _pure_state(args):
    psi = parse_state(args.state, args.n)
    return spinrep.rotate_state(psi, args.axis, args.theta) if args.theta else psi


def cmd_qfi(args) -> int:
    rows = []
    if args.system == "qubit":
        s = qubit.rotate_bloch(args.s, args.theta)
        rows.append(("qfi", qubit.qubit_qfi(s)))
    elif args.system == "werner":
        rows.append(("qfi", werner.werner_qfi(args.alpha, args.axis)))
    else:
        psi = _pure_state(args)
        b = purestate.qfi_breakdown(psi, args.axis)
        rows += [("qfi", b.qfi), ("prob_term", b.prob_term), ("phase_term", b.phase_term)]
    _write_csv(args, ["quantity", "value"], rows)
    return 0


def cmd_povm_check(args) -> int:
    if args.system == "qubit":
        s = qubit.rotate_bloch(args.s, args.theta)
        qp = parse_qubit_povm(args.povm, s)
        rho, L = s.density_matrix(), qubit.sld_matrix(s)
        elements = qp.to_povm().elements
    else:
        if args.system == "werner":
            rho = werner.werner_state(args.alpha, args.theta)
            drho = werner.werner_derivative(args.alpha, args.theta)
            n = werner.N
        else:
            psi = _pure_state(args)
            rho = psi.density_matrix()
            drho = fisher.unitary_derivative(rho, spinrep.build_operators(psi.n_particles).along(args.axis))
            n = psi.n_particles
        L = fisher.sld(rho, drho)
        povm = args.povm.strip().lower()
        if povm == "sld":
            if args.system == "werner":
                elements = werner.optimal_povm(args.alpha, args.theta).elements
            else:
                elements = fisher.sld_eigenprojectors(L).elements
        elif povm == "fock":
            elements = fisher.PovmSet.computational(n + 1).elements
        else:
            raise UsageError(f"POVM spec {args.povm!r} not available for {args.system}; use sld or fock")
    rows, optimal = [], True
    for i, e in enumerate(elements):
        lam, res = fisher.check_optimal(e, rho, L)
        ok = res < fisher.OPTIMAL_TOL
        optimal &= ok
        p = max(float(np.real(np.trace(rho @ e))), 0.0)
        rows.append((i, p, lam, res, ok))
    _write_csv(args, ["element", "probability", "lambda", "residual", "optimal"], rows)
    _info(f"verdict: {'optimal' if optimal else 'non-optimal'}")
    return 0


def _estimate_model(args):
    """(model, model Fisher information, quantum Fisher information)."""
    if args.system == "qubit":
        model = estimate.qubit_optimal_model(args.s, args.theta0)
        s = qubit.rotate_bloch(args.s, args.theta0)
        f = qubit.qubit_cfi(args.s, args.theta0, qubit.QubitPovmSet.projective(qubit.in_plane_frame(s)[1]))
        return model, f, qubit.qubit_qfi(s)
    if args.system == "werner":
        model = estimate.werner_fock_model(args.alpha)
        return model, werner.werner_imbalance_cfi(args.alpha, args.theta0), werner.werner_qfi(args.alpha)
    psi0 = parse_state(args.state, args.n)
    half = args.half_width if args.half_width else math.pi / (2 * psi0.n_particles)
    model = estimate.counting_model(psi0, args.axis, (args.theta0 - half, args.theta0 + half))
    out = spinrep.rotate_state(psi0, args.axis, args.theta0)
    b = purestate.qfi_breakdown(out, args.axis)
    return model, b.prob_term, b.qfi


def cmd_estimate(args) -> int:
    model, f_model, f_q = _estimate_model(args)
    f = f_q if args.fisher == "qfi" else f_model
    if not f > 0:
        raise UsageError(f"Fisher information is {f!r} at theta0; nothing to estimate")
    res = estimate.crlb_trial(model, f, args.theta0, args.m, args.trials, args.seed)
    _write_csv(args, ["trial", "theta_hat"], list(enumerate(res.theta_hats)))
    _info(
        f"empirical_std={res.empirical_std:.12g} crlb={res.crlb:.12g} "
        f"ratio={res.ratio:.12g} mean_bias={res.mean_bias:.12g} fisher={f:.12g}"
    )
    return 0


# ----- parser -----------------------------------------------------------


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError:
        return 0


def _add_axis(p, default="y"):
    p.add_argument("--axis", default=default, choices=["x", "y", "z"], help="rotation axis (default %(default)s)")


def _add_systems(sub_parser, with_povm=False, estimate_mode=False):
    systems = sub_parser.add_subparsers(dest="system", required=True, metavar="{qubit,werner,pure}")
    theta_flag = "--theta0" if estimate_mode else "--theta"

    q = systems.add_parser("qubit", help="single qubit, Bloch vector --s")
    q.add_argument("--s", type=_vec3, required=True, help="input Bloch vector sx,sy,sz")
    q.add_argument(theta_flag, type=float, default=0.0, dest="theta0" if estimate_mode else "theta")

    w = systems.add_parser("werner", help="two-qubit Werner state")
    w.add_argument("--alpha", type=float, required=True)
    w.add_argument(theta_flag, type=float, default=0.0, dest="theta0" if estimate_mode else "theta")

    p = systems.add_parser("pure", help="N-qubit pure symmetric state")
    p.add_argument("--state", required=True, help="fock:j | noon | twin-fock | bh:u | coherent | coeffs:c0,c1,...")
    p.add_argument("--n", type=_positive_int, default=None, help="particle number N")
    _add_axis(p)
    p.add_argument(theta_flag, type=float, default=0.0, dest="theta0" if estimate_mode else "theta")

    if not with_povm and not estimate_mode:
        _add_axis(w)
    if with_povm:
        q.add_argument("--povm", default="sld", help="sld | angle:PHI | proj:qx,qy,qz | elements:g,qx,qy,qz;...")
        w.add_argument("--povm", default="sld", help="sld | fock")
        p.add_argument("--povm", default="sld", help="sld | fock")
    if estimate_mode:
        p.add_argument("--half-width", type=float, default=None,
                       help="ML search half-width around theta0 (default pi/(2N))")
    for sp in (q, w, p):
        sp.add_argument("--out", default=None, help="CSV output path (default stdout)")
        if estimate_mode:
            sp.add_argument("--m", type=_positive_int, default=10_000, help="shots per experiment")
            sp.add_argument("--trials", type=_positive_int, default=200)
            sp.add_argument("--seed", type=_seed, default=_default_seed(),
                            help=f"64-bit seed (default ${SEED_ENV} or 0)")
            sp.add_argument("--fisher", choices=["model", "qfi"], default="model",
                            help="Fisher information in the bound (default: the measurement's own)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmet", description="Optimal measurements for phase estimation.")
    sub = parser.add_subparsers(dest="command", required=True)

    f2 = sub.add_parser("werner-fig2", help="imbalance CFI and QFI of Werner states versus theta")
    f2.add_argument("--alphas", type=_floats, default=[0.5, 0.95, 1.0], help="comma-separated alpha values")
    f2.add_argument("--theta-min", type=float, default=0.0)
    f2.add_argument("--theta-max", type=float, default=math.pi)
    f2.add_argument("--points", type=int, default=201)
    f2.add_argument("--out", default=None)
    f2.set_defaults(func=cmd_werner_fig2)

    qf = sub.add_parser("qfi", help="quantum Fisher information (and the pure-state breakdown)")
    _add_systems(qf)
    qf.set_defaults(func=cmd_qfi)

    pc = sub.add_parser("povm-check", help="per-element optimality residuals of a POVM")
    _add_systems(pc, with_povm=True)
    pc.set_defaults(func=cmd_povm_check)

    es = sub.add_parser("estimate", help="Monte-Carlo maximum-likelihood runs against the Cramer-Rao bound")
    _add_systems(es, estimate_mode=True)
    es.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError, KeyError) as exc:
        print(f"qmet: error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"qmet: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qmet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
