"""Command line entry point.

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fdb, oracles, suite
from .catalog import SCHEME_NAMES, get_scheme
from .exceptions import DomainError
from .order import barrier_demonstration, empirical_order, max_order_stencil, moments
from .pde import PROBLEMS, IntegratorSpec, LinearStencilScheme, convergence_study, evolve
from .pde.schemes import make_upwind_stencil
from .serialization import csv_text, dumps, load_stencil
from .stability import (
    certify_fe_instability,
    linearize,
    max_amplification,
    max_stable_cfl,
    symbol,
)

INTEGRATORS = {"fe": "forward_euler", "forward_euler": "forward_euler", "ssprk3": "ssprk3"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--out", type=Path, help="write the output here instead of stdout")
    p.add_argument("--quiet", action="store_true", help="suppress stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="semidiscrete", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fdb", help="Faa di Bruno engine")
    fsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = fsub.add_parser("check", parents=[common], help="compare against a finite-difference oracle")
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("lemmas", help="determinant closed forms")
    lsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = lsub.add_parser("verify", parents=[common])
    q.add_argument("--n-max", type=int, default=8)
    q.add_argument("--trials", type=int, default=500)

    p = sub.add_parser("stencil", help="stencil construction")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("gen", parents=[common])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--kind", choices=["max-order", "upwind"], default="max-order")
    q.add_argument("--direction", type=int, choices=[1, -1], default=1)
    q = ssub.add_parser("moments", parents=[common])
    q.add_argument("--file", type=Path, required=True)
    q.add_argument("--kmax", type=int, required=True)

    q = sub.add_parser("barrier", parents=[common], help="order barrier certificate")
    q.add_argument("--r", type=int, required=True)

    p = sub.add_parser("order", help="empirical order")
    osub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = osub.add_parser("measure", parents=[common])
    q.add_argument("--scheme", required=True, help=", ".join(SCHEME_NAMES))
    q.add_argument("--x", type=float, default=0.7)

    p = sub.add_parser("stability", help="Fourier analysis of forward Euler")
    stsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = stsub.add_parser("symbol", parents=[common])
    q.add_argument("--stencil", type=Path, required=True)
    q.add_argument("--lambda", dest="lam", type=float, required=True)
    q.add_argument("--theta", type=float, required=True)
    q = stsub.add_parser("cfl", parents=[common])
    q.add_argument("--stencil", type=Path, required=True)
    q = stsub.add_parser("certify", parents=[common])
    q.add_argument("--r", type=int, required=True)

    for name in ("run", "converge"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--scheme", required=True, help="catalog name or stencil JSON path")
        q.add_argument("--integrator", choices=sorted(INTEGRATORS), default="ssprk3")
        q.add_argument("--cfl", type=float, default=0.4)
        q.add_argument("--T", type=float, default=None)
        q.add_argument("--problem", choices=sorted(PROBLEMS), default="advection")
        q.add_argument("--dt-exponent", type=float, default=None)
        if name == "run":
            q.add_argument("--N", type=int, required=True)
        else:
            q.add_argument("--N", default="40,80,160,320", help="comma-separated grid sizes")

    q = sub.add_parser("paper-suite", parents=[common], help="run every acceptance criterion")
    q.add_argument("--json", action="store_true", help="print the JSON report instead of the table")
    return parser


def _config(args) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}


def _emit(args, text: str) -> None:
    if args.out is not None:
        args.out.write_text(text)
    elif not args.quiet:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    payload = dict(payload)
    payload["config"] = _config(args)
    _emit(args, dumps(payload))


def _cmd_fdb(args) -> int:
    if not 1 <= args.s <= 8:
        raise DomainError("--s must be in [1, 8]")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        f, u, x = suite.random_smooth_case(rng)
        err = oracles.relative_error(fdb.fdb_derivative(f, u, x, args.s),
                                     oracles.composite_derivative(f, u, x, args.s))
        worst = max(worst, err)
    if args.s == 1:
        recursion_ok = True
    else:
        rec = fdb.fdb_recursion_coefficients(args.s - 1)
        recursion_ok = rec == {m: fdb.multinomial(m) for m in fdb.enumerate_partitions(args.s)}
    partitions = [list(m) for m in fdb.enumerate_partitions(args.s)]
    _emit_json(args, {"s": args.s, "partitions": partitions, "max_rel_error": worst,
                      "recursion_ok": recursion_ok})
    return 0 if worst < 1e-6 and recursion_ok else 1


def _cmd_lemmas(args) -> int:
    res = suite.lemma_trials(args.seed, args.trials, args.n_max)
    _emit_json(args, res)
    return 0 if res["lemma1_ok"] and res["lemma2_ok"] else 1


def _cmd_stencil(args) -> int:
    if args.action == "gen":
        st = max_order_stencil(args.r) if args.kind == "max-order" else make_upwind_stencil(args.r, args.direction)
        _emit_json(args, st.to_dict())
        return 0
    st = load_stencil(args.file)
    ms = moments(st, args.kmax)
    _emit_json(args, {"r": st.r, "moments": [str(m) for m in ms], "order": st.order()})
    return 0


def _cmd_barrier(args) -> int:
    cert = barrier_demonstration(args.r)
    _emit_json(args, cert.to_dict())
    return 0 if cert.conclusion == "inconsistent_with_advection" else 1


def _cmd_order(args) -> int:
    entry = get_scheme(args.scheme)
    fit = empirical_order(entry.scheme_function(), a=entry.speed, x=args.x)
    _emit_json(args, {"scheme": entry.name, "formal_order": entry.formal_order, "slope": fit.slope,
                      "h": list(fit.h), "residuals": [float(r) for r in fit.residuals]})
    return 0


def _cmd_stability(args) -> int:
    if args.action == "certify":
        L = linearize(max_order_stencil(args.r))
        w = certify_fe_instability(L)
        _emit_json(args, {"r": args.r, "unstable_for_all_lambda": w.unstable,
                          "witness_theta": w.theta, "sine_sum": w.sine_sum})
        return 0 if w.unstable else 1
    L = linearize(load_stencil(args.stencil))
    if args.action == "symbol":
        z = symbol(L, args.lam, args.theta)
        payload = max_amplification(L, args.lam).to_dict()
        payload.update({"theta": args.theta, "symbol": complex(z), "modulus": abs(z)})
        _emit_json(args, payload)
        return 0
    _emit_json(args, {"max_stable_cfl": max_stable_cfl(L), "antisymmetric": L.antisymmetric})
    return 0


def _spatial(name: str):
    path = Path(name)
    if name.endswith(".json") or path.is_file():
        return LinearStencilScheme(load_stencil(path))
    return get_scheme(name).spatial()


def _problem(args):
    factory = PROBLEMS[args.problem]
    return factory() if args.T is None else factory(T=args.T)


def _cmd_run(args) -> int:
    S = _spatial(args.scheme)
    P = _problem(args)
    I = IntegratorSpec(INTEGRATORS[args.integrator], args.cfl, args.dt_exponent)
    res = evolve(S, P, I, args.N)
    series = csv_text(["step", "t", "max_norm", "two_norm"], res.series())
    summary = {"steps": res.steps, "t": res.t, "dt": res.dt, "blowup_step": res.blowup_step,
               "message": res.message, "final_max_norm": float(res.max_norms[-1]),
               "final_two_norm": float(res.two_norms[-1]), "scheme": S.describe(), "config": _config(args)}
    if P.exact is not None and not res.blew_up:
        summary["max_error"] = float(np.max(np.abs(res.final.values - P.exact(res.final.x, res.t))))
    if args.out is not None:
        args.out.write_text(series)
        if not args.quiet:
            sys.stdout.write(dumps(summary))
    elif not args.quiet:
        sys.stdout.write(series)
    return 0


def _cmd_converge(args) -> int:
    try:
        N_list = [int(n) for n in str(args.N).split(",") if n]
    except ValueError:
        raise DomainError(f"--N must be a comma-separated list of integers, got {args.N!r}")
    S = _spatial(args.scheme)
    I = IntegratorSpec(INTEGRATORS[args.integrator], args.cfl, args.dt_exponent)
    study = convergence_study(S, _problem(args), I, N_list)
    _emit(args, csv_text(["N", "h", "error", "observed_order"], study.to_csv_rows()))
    return 0


def _cmd_suite(args) -> int:
    report = suite.run_suite(args.seed)
    if args.json or args.out is not None:
        payload = report.to_dict()
        payload["config"] = _config(args)
        text = dumps(payload)
        if args.out is not None:
            args.out.write_text(text)
            text = report.table() + "\n"
    else:
        text = report.table() + "\n"
    if not args.quiet:
        sys.stdout.write(text)
    return 0 if report.passed else 1


COMMANDS = {
    "fdb": _cmd_fdb,
    "lemmas": _cmd_lemmas,
    "stencil": _cmd_stencil,
    "barrier": _cmd_barrier,
    "order": _cmd_order,
    "stability": _cmd_stability,
    "run": _cmd_run,
    "converge": _cmd_converge,
    "paper-suite": _cmd_suite,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args)
    except (DomainError, FileNotFoundError, KeyError, ValueError) as exc:
        sys.stderr.write(f"semidiscrete {args.command}: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
