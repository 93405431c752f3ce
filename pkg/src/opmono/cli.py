"""Batch command-line interface.

Subcommands wire the library modules over JSON files:

  check        randomized property certification of a catalogue function
  schur        shorted operator / Schur complement / sector bound of a matrix
  pencil-eval  evaluate a pencil file at a tuple file
  support      supporting pencil certificate at a base point
  reconstruct  recover F(A)v from a certificate file
  repeval      evaluate a representation file (``--complex`` for half-space inputs)
  mean         operator means of a tuple file
  quadrep      quadrature representation of a one-variable function

Exit codes: 0 pass, 1 math error, 2 property counterexample,
3 inconclusive, 64 usage error, 65 data error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cert as certmod
from . import serialize as io
from .errors import BadConfig, DataError, OpmonoError, UnknownFunction
from .freefun import karcher_mean, nc_axiom_check, resolve_function
from .matcore import Tolerances
from .pencil import pencil_eval, pencil_eval_shifted
from .represent import (
    reconstruct,
    rep_eval,
    rep_eval_complex,
    rep_from_quadrature,
    support_pencil,
)
from .schur import PivotSubspace, schur_generic, sector_bound_check, shorted_psd

EXIT_PASS = 0
EXIT_MATH = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_DATA = 65


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override the PSD tolerance")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n", type=int, default=4, help="matrix dimension for random trials")
    p.add_argument("--interval", type=str, default="0.5,2", help="spectral interval c1,c2")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=str, default=None, help="output file path")


def _parse_interval(spec: str) -> tuple[float, float]:
    try:
        c1, c2 = (float(s) for s in spec.split(","))
    except ValueError as exc:
        raise BadConfig(f"bad interval {spec!r}; expected c1,c2") from exc
    if not (0 < c1 < c2):
        raise BadConfig("interval must satisfy 0 < c1 < c2")
    return c1, c2


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return Tolerances()
    return Tolerances(psd=args.tol, herm=args.tol, eq=max(args.tol, 1e-8))


def _emit(args, obj: dict, text: str) -> None:
    line = io.dumps(obj) if args.format == "json" else text
    print(line)
    if args.out:
        io.save(args.out, obj.get("kind", "report"), obj.get("payload", obj))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opmono", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="randomized property certification")
    p.add_argument("function")
    p.add_argument(
        "property",
        choices=("monotone", "concave", "derivative", "hypograph", "nc-axioms", "doubling"),
    )
    p.add_argument("--m", type=int, default=None, help="isometry target dimension (hypograph)")
    _add_common(p)

    p = sub.add_parser("schur", help="shorted operator / Schur complement / sector bound")
    p.add_argument("input", help="matrix file")
    p.add_argument("--pivot", type=str, default=None, help="comma-separated index list")
    p.add_argument("--pivot-file", type=str, default=None, help="basis matrix file")
    p.add_argument("--mode", choices=("psd", "generic", "sector-bound"), default="psd")
    p.add_argument("--keep", choices=("s", "perp"), default="s")
    _add_common(p)

    p = sub.add_parser("pencil-eval", help="evaluate a pencil at a tuple")
    p.add_argument("pencil", help="pencil file")
    p.add_argument("tuple", help="tuple file")
    p.add_argument("--shifted", action="store_true", help="evaluate at (X_i - I)")
    _add_common(p)

    p = sub.add_parser("support", help="supporting pencil certificate")
    p.add_argument("function")
    p.add_argument("tuple", help="tuple file with the base point")
    p.add_argument("--v-file", type=str, default=None, help="vector as an n x 1 matrix file")
    p.add_argument("--v-index", type=int, default=0, help="basis vector index when no file")
    p.add_argument("--samples", type=int, default=200)
    _add_common(p)

    p = sub.add_parser("reconstruct", help="recover F(A)v from a certificate")
    p.add_argument("certificate", help="certificate file")
    p.add_argument("--residual-tol", type=float, default=1e-6)
    _add_common(p)

    p = sub.add_parser("repeval", help="evaluate a representation")
    p.add_argument("representation", help="representation file")
    p.add_argument("tuple", help="tuple file")
    p.add_argument("--complex", action="store_true", help="allow half-space inputs")
    _add_common(p)

    p = sub.add_parser("mean", help="operator means of a tuple")
    p.add_argument("mean_id", help="e.g. karcher, harmonic, geomean2, power:t=0.5")
    p.add_argument("tuple", help="tuple file")
    _add_common(p)

    p = sub.add_parser("quadrep", help="quadrature representation of a scalar function")
    p.add_argument("function", help="sqrt, log1p, or pow:P")
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--target", type=float, default=1e-3)
    _add_common(p)
    return ap


def _load_tuple(path: str) -> tuple[np.ndarray, ...]:
    kind, payload = io.load(path)
    if kind == "matrix":
        return (io.decode_matrix(payload),)
    if kind == "tuple":
        return io.decode_tuple(payload)
    raise BadConfig(f"expected a matrix or tuple file, found {kind}")


def _pivot_from_args(args, dim: int) -> PivotSubspace:
    if args.pivot_file:
        _, payload = io.load(args.pivot_file, expect="matrix")
        return PivotSubspace.from_basis(io.decode_matrix(payload))
    if args.pivot is None:
        raise BadConfig("schur needs --pivot or --pivot-file")
    idx = [int(s) for s in args.pivot.split(",")]
    return PivotSubspace.from_indices(dim, idx)


def _cmd_check(args) -> int:
    fn = resolve_function(args.function)
    interval = _parse_interval(args.interval)
    tol = _tolerances(args)
    kwargs = dict(n=args.n, trials=args.trials, seed=args.seed, tol=tol, interval=interval)
    if args.property == "monotone":
        report = certmod.monotone_test(fn, **kwargs)
    elif args.property == "concave":
        report = certmod.concave_test(fn, **kwargs)
    elif args.property == "derivative":
        report = certmod.derivative_monotone_test(fn, **kwargs)
    elif args.property == "hypograph":
        m = args.m if args.m is not None else max(args.n - 1, 1)
        report = certmod.hypograph_convexity_test(fn, m=m, **kwargs)
    elif args.property == "doubling":
        report = certmod.doubling_concavity_check(
            fn, n=args.n, trials=max(args.trials // 10, 1), seed=args.seed,
            tol=tol, interval=interval,
        )
    else:  # nc-axioms
        rep = nc_axiom_check(fn, n=args.n, trials=args.trials, seed=args.seed, interval=interval, tol=tol)
        obj = {
            "kind": "report",
            "payload": {
                "property": "nc-axioms",
                "function": fn.name,
                "verdict": "pass" if rep.passed else "counterexample",
                "unitary_defect": rep.unitary_defect,
                "direct_sum_defect": rep.direct_sum_defect,
                "trials": rep.trials,
                "seed": rep.seed,
            },
        }
        _emit(args, obj, f"nc-axioms {fn.name}: {'PASS' if rep.passed else 'FAIL'} "
                         f"(unitary {rep.unitary_defect:.2e}, direct-sum {rep.direct_sum_defect:.2e})")
        return EXIT_PASS if rep.passed else EXIT_COUNTEREXAMPLE

    payload = io.report_payload(report)
    payload["function"] = fn.name
    obj = {"kind": "report", "payload": payload}
    _emit(
        args, obj,
        f"{report.property_name} {fn.name}: {report.verdict.upper()} "
        f"(trials {report.trials_run}, worst margin {report.worst_margin:.3e}, seed {report.seed})",
    )
    if report.verdict == "pass":
        return EXIT_PASS
    if report.verdict == "counterexample":
        return EXIT_COUNTEREXAMPLE
    return EXIT_INCONCLUSIVE


def _cmd_schur(args) -> int:
    _, payload = io.load(args.input, expect="matrix")
    a = io.decode_matrix(payload)
    pivot = _pivot_from_args(args, a.shape[0])
    tol = _tolerances(args)
    if args.mode == "psd":
        result = shorted_psd(a, pivot, tol)
        obj = {
            "kind": "report",
            "payload": {
                "mode": "psd",
                "shorted": io.encode_matrix(result.shorted),
                "defect": result.defect,
                "min_eig": float(np.linalg.eigvalsh(result.shorted)[0]),
            },
        }
        text = (
            f"shorted operator on a {pivot.dim}-dim pivot: min eigenvalue "
            f"{np.linalg.eigvalsh(result.shorted)[0]:.6g}, factorization defect {result.defect:.2e}"
        )
        if args.out:
            io.save(args.out, "matrix", io.encode_matrix(result.shorted))
        print(io.dumps(obj) if args.format == "json" else text)
        return EXIT_PASS
    if args.mode == "generic":
        comp = schur_generic(a, pivot, keep=args.keep, tol=tol)
        if args.out:
            io.save(args.out, "matrix", io.encode_matrix(comp))
        lam = float(np.linalg.eigvalsh((comp + comp.conj().T) / 2)[0])
        print(
            io.dumps({"kind": "report", "payload": {"mode": "generic", "min_eig_herm_part": lam}})
            if args.format == "json"
            else f"Schur complement keeping {args.keep!r}: Hermitian-part min eigenvalue {lam:.6g}"
        )
        return EXIT_PASS
    report = sector_bound_check(a, pivot, tol=tol)
    obj = {
        "kind": "report",
        "payload": {
            "mode": "sector-bound",
            "alpha": report.alpha,
            "passed": report.passed,
            "singular_value_pairs": [list(p) for p in report.singular_value_pairs],
            "norm_pair": list(report.norm_pair),
        },
    }
    _emit(args, obj, f"sector bound: alpha = {report.alpha:.4f} rad, "
                     f"{'PASS' if report.passed else 'FAIL'}")
    return EXIT_PASS if report.passed else EXIT_MATH


def _cmd_pencil_eval(args) -> int:
    _, payload = io.load(args.pencil, expect="pencil")
    pencil = io.pencil_from_payload(payload)
    x = _load_tuple(args.tuple)
    out = pencil_eval_shifted(pencil, x) if args.shifted else pencil_eval(pencil, x)
    if args.out:
        io.save(args.out, "matrix", io.encode_matrix(out))
    lam = float(np.linalg.eigvalsh((out + out.conj().T) / 2)[0])
    print(
        io.dumps({"kind": "report", "payload": {"min_eig_herm_part": lam}})
        if args.format == "json"
        else f"pencil evaluation: dimension {out.shape[0]}, Hermitian-part min eigenvalue {lam:.6g}"
    )
    return EXIT_PASS


def _cmd_support(args) -> int:
    fn = resolve_function(args.function)
    a = _load_tuple(args.tuple)
    n = a[0].shape[0]
    if args.v_file:
        _, payload = io.load(args.v_file, expect="matrix")
        v = io.decode_matrix(payload).reshape(-1)
    else:
        v = np.zeros(n)
        v[args.v_index] = 1.0
    interval = _parse_interval(args.interval)
    cert = support_pencil(
        fn, a, v, interval, validation_samples=args.samples, seed=args.seed, tol=_tolerances(args)
    )
    if args.out:
        io.save(args.out, "certificate", io.certificate_payload(cert))
    summary = (
        f"support certificate for {fn.name}: support margin {cert.support_margin:.3e}, "
        f"scalar margin {cert.scalar_margin:.3e}, trace slack {cert.trace_slack:.3e}"
    )
    print(
        io.dumps({"kind": "report", "payload": {
            "function": fn.name,
            "support_margin": cert.support_margin,
            "scalar_margin": cert.scalar_margin,
            "trace_slack": cert.trace_slack,
            "c": cert.c,
        }})
        if args.format == "json" else summary
    )
    ok = cert.support_margin >= -1e-7 and cert.trace_slack >= -1e-8
    return EXIT_PASS if ok else EXIT_MATH


def _cmd_reconstruct(args) -> int:
    _, payload = io.load(args.certificate, expect="certificate")
    cert = io.certificate_from_payload(payload)
    result = reconstruct(cert, _tolerances(args))
    if args.out:
        io.save(args.out, "matrix", io.encode_matrix(result.value.reshape(-1, 1)))
    print(
        io.dumps({"kind": "report", "payload": {"residual": result.residual}})
        if args.format == "json"
        else f"reconstruction residual {result.residual:.3e}"
    )
    return EXIT_PASS if result.residual <= args.residual_tol else EXIT_MATH


def _cmd_repeval(args) -> int:
    _, payload = io.load(args.representation, expect="representation")
    rep = io.representation_from_payload(payload)
    x = _load_tuple(args.tuple)
    tol = _tolerances(args)
    out = rep_eval_complex(rep, x, tol=tol) if getattr(args, "complex") else rep_eval(rep, x, tol)
    if args.out:
        io.save(args.out, "matrix", io.encode_matrix(out))
    print(
        io.dumps({"kind": "report", "payload": {"norm": float(np.linalg.norm(out, 2))}})
        if args.format == "json"
        else f"representation value: dimension {out.shape[0]}, norm {np.linalg.norm(out, 2):.6g}"
    )
    return EXIT_PASS


def _cmd_mean(args) -> int:
    x = _load_tuple(args.tuple)
    k = len(x)
    ident = args.mean_id
    if ":" not in ident and ident in ("karcher", "harmonic", "arithmetic"):
        ident = f"{ident}:w=" + ",".join([repr(1.0 / k)] * k)
    if ident.startswith("power:") and ":w=" not in ident:
        ident = ident + ":w=" + ",".join([repr(1.0 / k)] * k)
    fn = resolve_function(ident)
    if fn.arity != k:
        raise BadConfig(f"{fn.name} takes {fn.arity} arguments but the tuple has {k}")
    extra = ""
    if ident.startswith("karcher"):
        w = tuple([1.0 / k] * k) if ":w=" not in args.mean_id else tuple(
            float(s) for s in args.mean_id.split(":w=")[1].split(",")
        )
        value, info = karcher_mean(x, w, return_info=True)
        extra = f" ({info['iterations']} polish iterations, residual {info['residual']:.2e})"
    else:
        value = fn(x)
    if args.out:
        io.save(args.out, "matrix", io.encode_matrix(value))
    print(
        io.dumps({"kind": "report", "payload": {"norm": float(np.linalg.norm(value, 2))}})
        if args.format == "json"
        else f"{fn.name} of {k} matrices: norm {np.linalg.norm(value, 2):.6g}{extra}"
    )
    return EXIT_PASS


def _cmd_quadrep(args) -> int:
    interval = _parse_interval(args.interval)
    name = args.function
    p = None
    if name.startswith("pow:"):
        p = float(name.split(":", 1)[1])
        name = "pow"
    rep = rep_from_quadrature(name, nodes=args.nodes, interval=interval, p=p, target=args.target)
    if args.out:
        io.save(args.out, "representation", io.representation_payload(rep))
    print(
        io.dumps({"kind": "report", "payload": {"scalar_error": rep.meta["scalar_error"]}})
        if args.format == "json"
        else f"quadrature representation: {rep.meta['nodes']} cells, "
             f"scalar error {rep.meta['scalar_error']:.3e}"
    )
    return EXIT_PASS


_DISPATCH = {
    "check": _cmd_check,
    "schur": _cmd_schur,
    "pencil-eval": _cmd_pencil_eval,
    "support": _cmd_support,
    "reconstruct": _cmd_reconstruct,
    "repeval": _cmd_repeval,
    "mean": _cmd_mean,
    "quadrep": _cmd_quadrep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except (UnknownFunction, BadConfig) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OpmonoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
