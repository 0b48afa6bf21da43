"""Command-line front end.

Usage::

    python -m symplectic_sr factor --alg srmsh --input A.mtx
    python -m symplectic_sr reduce --alg jhess --fixture a6 --no-cure
    python -m symplectic_sr reduce --alg mjhess --fixture a12 --report out.json
    python -m symplectic_sr eig --fixture a6
    python -m symplectic_sr reproduce

Exit status: 0 on success, 2 on an uncured breakdown, 3 when the cure or
restart budget runs out, 1 on usage, I/O, parse or dimension errors.
"""
import argparse
import hashlib
import json
import sys
import time
import warnings

import numpy as np

from .core import (
    check_structure,
    j_hessenberg_zero_mask,
    j_triangular_zero_mask,
    pattern_defect,
    symplecticity_defect,
    symplectic_adjoint,
)
from .eigen import EigenConfig, RestartBudgetExhausted, solve_spectrum
from .fixtures import FIXTURES, fixture
from .io import read_matrix
from .jhessenberg import CureBudgetExhausted, ReductionConfig, reduce
from .reproduce import REFERENCE, reproduce_tables
from .srfact import sr_factor
from .transforms import BreakdownError

SCHEMA_VERSION = 1

EXIT_OK, EXIT_ERROR, EXIT_BREAKDOWN, EXIT_BUDGET = 0, 1, 2, 3

SR_ALGS = ("srdeco", "srmsh")
REDUCTION_ALGS = ("jhess", "mjhess", "jhmsh", "jhm2sh")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _cure_kind(text):
    if text in ("h2", "g2"):
        return text, 2
    if text.startswith("block:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad block size in {text!r}") from None
        if k < 2:
            raise argparse.ArgumentTypeError("block size must be at least 2")
        return "block", k
    raise argparse.ArgumentTypeError(f"expected h2, g2 or block:<k>, got {text!r}")


def build_parser():
    parser = _Parser(prog="symplectic_sr", description="SR factorization, J-Hessenberg "
                     "reduction and SR eigenvalue iteration for 2n x 2n matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, algs, default):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="Matrix Market (.mtx/.mm) or CSV file")
        src.add_argument("--fixture", choices=sorted(FIXTURES))
        p.add_argument("--alg", choices=algs, default=default)
        p.add_argument("--tau", type=float, default=1e8, help="near-breakdown threshold")
        p.add_argument("--tol", type=float, default=None,
                       help="relative zero tolerance (deflation tolerance for eig)")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed of the restart generator")

    p = sub.add_parser("factor", help="SR factorization A = S R")
    common(p, SR_ALGS, "srdeco")

    for name, default in (("reduce", "mjhess"), ("eig", "mjhess")):
        algs = REDUCTION_ALGS if name == "reduce" else REDUCTION_ALGS + SR_ALGS
        p = sub.add_parser(name, help="J-Hessenberg reduction" if name == "reduce"
                           else "eigenvalues by the SR algorithm")
        common(p, algs, default)
        cure = p.add_mutually_exclusive_group()
        cure.add_argument("--cure", type=_cure_kind, default=None, metavar="{h2,g2,block:k}")
        cure.add_argument("--no-cure", action="store_true")

    p = sub.add_parser("reproduce", help="rerun the reference tables on the fixtures")
    p.add_argument("--report")
    p.add_argument("--tau", type=float, default=1e8)
    p.add_argument("--cure", type=_cure_kind, default=("h2", 2), metavar="{h2,g2,block:k}")
    return parser


def _digest(A):
    h = hashlib.sha256()
    h.update(np.asarray(A.shape, dtype=np.int64).tobytes())
    h.update(np.ascontiguousarray(A, dtype="<f8").tobytes())
    return "sha256:" + h.hexdigest()


def _load(args):
    if args.fixture:
        return fixture(args.fixture), f"fixture:{args.fixture}"
    return read_matrix(args.input), args.input


def _norms(X):
    return {"2": float(np.linalg.norm(X, 2)), "max": float(np.abs(X).max(initial=0.0))}


def _event(e):
    return {"step": e.step, "kind": e.kind, "h_sub": e.h_sub, "h_pivot": e.h_pivot,
            "ratio": e.ratio if np.isfinite(e.ratio) else "inf", "cure_kind": e.cure_kind}


def _similarity_residual(A, S, H):
    return A - np.linalg.solve(S.T, (S @ H).T).T


def run_factor(args, A, report):
    eps_rel = args.tol if args.tol is not None else 1e-14
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fac = sr_factor(A, args.alg, tau=args.tau, eps_rel=eps_rel)
    S, R = fac.s, fac.r
    n = A.shape[0] // 2
    report["residuals"] = {
        "reconstruction": _norms(A - S @ R),
        "j_orthogonality": _norms(np.eye(2 * n) - symplectic_adjoint(S) @ S),
        "pattern_defect": pattern_defect(R, j_triangular_zero_mask(n)),
    }
    report["events"] = [{"step": st, "kind": "near_breakdown", "ratio": float(r)}
                        for st, r in fac.near_breakdowns]
    report["warnings"] = [str(w.message) for w in caught]
    return EXIT_OK


def _reduction_config(args):
    cured = args.alg in ("mjhess", "jhm2sh")
    kind, k = "h2", 2
    if args.cure is not None:
        cured, (kind, k) = True, args.cure
    if args.no_cure:
        cured = False
    variant = "jhess" if args.alg in ("jhess", "mjhess") else "jhmsh"
    eps_rel = args.tol if args.tol is not None else 1e-14
    return ReductionConfig(tau=args.tau, eps_rel=eps_rel, cure=cured, cure_kind=kind,
                           block_size=k, variant=variant)


def run_reduce(args, A, report):
    cfg = _reduction_config(args)
    report["config"].update(cure=cfg.cure, cure_kind=cfg.cure_kind, block_size=cfg.block_size,
                            variant=cfg.variant)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = reduce(A, cfg)
    n = A.shape[0] // 2
    report["residuals"] = {
        "similarity": _norms(_similarity_residual(A, res.s, res.h)),
        "j_orthogonality": _norms(np.eye(2 * n) - symplectic_adjoint(res.s) @ res.s),
        "pattern_defect": pattern_defect(res.h, j_hessenberg_zero_mask(n)),
    }
    report["events"] = [_event(e) for e in res.events]
    return EXIT_OK


def run_eig(args, A, report):
    kw = {}
    if args.alg in SR_ALGS:
        kw["factorization"] = args.alg
    else:
        kw["reduction"] = "mjhess" if args.alg in ("jhess", "mjhess") else "jhm2sh"
    if args.tol is not None:
        kw["deflation_tol"] = args.tol
    if args.cure is not None:
        kw["cure_kind"], kw["block_size"] = args.cure
    if args.no_cure:
        raise UsageError("the eigensolver always cures its initial reduction")
    cfg = EigenConfig(tau=args.tau, seed=args.seed, **kw)
    report["config"].update(reduction=cfg.reduction, factorization=cfg.factorization,
                            deflation_tol=cfg.deflation_tol)
    sp = solve_spectrum(A, cfg)
    st = sp.state
    n = A.shape[0] // 2
    lams = sp.eigenvalues
    resid = [float(np.linalg.svd(A - lam * np.eye(2 * n), compute_uv=False)[-1]) for lam in lams]
    report["eigenvalues"] = [[float(l.real), float(l.imag)] for l in lams]
    report["eigenvalue_residuals"] = resid
    report["converged"] = sp.converged
    report["iterations"] = sp.iterations
    report["restarts"] = sp.restarts
    report["residuals"] = {
        "similarity": _norms(symplectic_adjoint(st.s) @ A @ st.s - st.m),
        "j_orthogonality": _norms(np.eye(2 * n) - symplectic_adjoint(st.s) @ st.s),
        "pattern_defect": pattern_defect(st.m, j_hessenberg_zero_mask(n)),
    }
    report["events"] = [list(map(_plain, e)) for e in st.events]
    return EXIT_OK


def _plain(x):
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    return str(x)


def run_reproduce(args, report):
    kind, _ = args.cure
    rep = reproduce_tables(cure_kind=kind, tau=args.tau)
    report["table"] = [
        {"method": r.method, "j_orthogonality": r.j_orthogonality,
         "reduction_error": r.reduction_error, "breakdown_step": r.breakdown_step,
         "reference": list(REFERENCE[r.method])}
        for r in rep.rows
    ]
    report["equivalences"] = {
        name: {"similarity_defect": eq.similarity_defect, "pattern_defect": eq.pattern_defect,
               "c": eq.c.tolist(), "f": eq.f.tolist(), "reference": REFERENCE[name]}
        for name, eq in rep.equivalences.items()
    }
    report["breakdowns"] = rep.breakdowns
    report["cure_a6_error"] = rep.cure_a6_error
    print(rep.format(), file=sys.stderr if not args.report else sys.stdout)
    return EXIT_OK


def _emit(report, path):
    text = json.dumps(report, indent=2, sort_keys=False)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command,
              "config": {"tau": args.tau}}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        if args.command == "reproduce":
            code = run_reproduce(args, report)
        else:
            A, source = _load(args)
            report.update(algorithm=args.alg, input=source, input_digest=_digest(A),
                          n=A.shape[0] // 2)
            report["config"].update(tol=args.tol, seed=args.seed)
            report["input_structure"] = check_structure(A).__dict__
            code = {"factor": run_factor, "reduce": run_reduce, "eig": run_eig}[args.command](
                args, A, report)
        report["status"] = "ok"
    except BreakdownError as exc:
        code = EXIT_BREAKDOWN
        report.update(status="breakdown", message=str(exc))
        report["breakdown"] = {"step": exc.step, "pivot": _plain(exc.pivot),
                               "offending": _plain(exc.target)}
    except (CureBudgetExhausted, RestartBudgetExhausted) as exc:
        code = EXIT_BUDGET
        report.update(status="budget_exhausted", message=str(exc),
                      step=getattr(exc, "step", None))
    except (OSError, ValueError, KeyError, UsageError) as exc:
        # DimensionError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report["timing_s"] = time.perf_counter() - t0
    try:
        _emit(report, args.report)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if code != EXIT_OK:
        print(f"{report['status']}: {report['message']}", file=sys.stderr)
    return code
