"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 a mathematical refutation
(certificate fails verification, a witness breaks a certificate that
verified, a report fails its independent check).
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .brute import DEFAULT_LIMIT, disc_brute
from .dual import (
    ContainmentError,
    WitnessNotFound,
    certificate_min_eigenvalue,
    extract_witness,
    search_certificate,
    theorem_trace,
    verify_certificate,
)
from .instances import gen_arithmetic_progressions, gen_beck_fiala, gen_gaussian_unit, gen_tight
from .io import (
    CertificateFormatError,
    MatrixFormatError,
    atomic_write,
    dump_json,
    read_certificate,
    read_matrix,
    write_certificate,
    write_matrix,
)
from .report import ReportCheckError, build_report, format_table
from .rounding import round_hyperplane
from .sdp import SolverConfig, feasibility_residual, solve_vecdisc

EXIT_OK, EXIT_USAGE, EXIT_REFUTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _vec(v) -> str:
    return " ".join(_fmt(float(x)) for x in v)


def cmd_gen(args, out):
    fam = args.family
    if fam == "gaussian":
        A = gen_gaussian_unit(args.m, args.n, args.seed)
    elif fam == "beck-fiala":
        A = gen_beck_fiala(args.vertices, args.edges, args.t, args.seed, scaled=args.scaled)
    elif fam == "ap":
        A = gen_arithmetic_progressions(args.N, args.seed, scaled=args.scaled)
    else:
        A = gen_tight()
    write_matrix(A, args.out)
    print(f"wrote {A.shape[0]} x {A.shape[1]} {fam} matrix to {args.out}", file=out)
    return EXIT_OK


def cmd_solve(args, out):
    A = read_matrix(args.input)
    cfg = SolverConfig(trials=args.trials, max_iters=args.max_iters, seed=args.seed)
    sol = solve_vecdisc(A, cfg)
    print(f"value {_fmt(sol.value)}", file=out)
    print(f"sqrt_value {_fmt(sol.bound)}", file=out)
    print(f"converged {sol.converged}", file=out)
    if args.out:
        write_matrix(sol.coloring, args.out)
    if args.report:
        atomic_write(args.report, dump_json({
            "value": sol.value,
            "sqrt_value": sol.bound,
            "row_values": [float(r) for r in sol.row_values],
            "converged": sol.converged,
            "iterations": sol.iterations,
            "grad_norm": sol.grad_norm,
            "feasibility_residual": feasibility_residual(sol.coloring),
            "seed": sol.seed,
            "trial": sol.trial,
        }))
    return EXIT_OK


def cmd_brute(args, out):
    A = read_matrix(args.input)
    best = disc_brute(A, limit_n=args.limit)
    print(f"value {_fmt(best.value)}", file=out)
    print(f"signs {' '.join(str(int(s)) for s in best.signs)}", file=out)
    return EXIT_OK


def cmd_cert_search(args, out):
    A = read_matrix(args.input)
    cert = search_certificate(A, iters=args.iters, seed=args.seed)
    if args.out:
        write_certificate(cert, args.out)
    print(f"D {_fmt(cert.D)}", file=out)
    print(f"sum_w {_fmt(cert.weight)}", file=out)
    return EXIT_OK


def cmd_cert_verify(args, out):
    A = read_matrix(args.input)
    cert = read_certificate(args.cert)
    ok = verify_certificate(A, cert, tol=args.tol)
    lam = certificate_min_eigenvalue(A, cert)
    if ok:
        print(f"valid, D = {cert.D:g}", file=out)
        return EXIT_OK
    print(f"invalid: min eigenvalue {lam:.6g}, sum(w) {cert.weight:.12g}, D^2 {cert.D**2:.12g}", file=out)
    return EXIT_REFUTED


def cmd_witness(args, out):
    A = read_matrix(args.input)
    cert = read_certificate(args.cert)
    if not cert.weight > 1.0:
        raise UsageError(f"sum(w) = {cert.weight:.12g} is not above 1; no witness is guaranteed")
    wit = extract_witness(A, cert.p, cert.w)
    print(f"z {_vec(wit.z)}", file=out)
    print(f"lhs {_fmt(wit.lhs)}", file=out)
    print(f"rhs {_fmt(wit.rhs)}", file=out)
    if verify_certificate(A, cert):
        print("certificate verified yet is refuted by the witness", file=out)
        return EXIT_REFUTED
    return EXIT_OK


def cmd_trace(args, out):
    A = read_matrix(args.input)
    cert = read_certificate(args.cert)
    try:
        tr = theorem_trace(A, cert.p, cert.w)
    except ContainmentError as exc:
        print(f"containment fails: {exc}", file=out)
        return EXIT_REFUTED
    print("k log_det log_prefix_p log_prefix_w eig_lb eig_ub prod", file=out)
    for k in range(tr.w_sorted.size):
        print(
            f"{k + 1} {tr.log_dets[k]:.12g} {tr.log_prefix_p[k]:.12g} {tr.log_prefix_w[k]:.12g} "
            f"{int(tr.eig_lb[k])} {int(tr.eig_ub[k])} {int(tr.prod_majorized[k])}",
            file=out,
        )
    print(f"sum_p {_fmt(tr.sum_p)}", file=out)
    print(f"sum_w {_fmt(tr.sum_w)}", file=out)
    return EXIT_OK if tr.all_flags else EXIT_REFUTED


def cmd_round(args, out):
    A = read_matrix(args.input)
    U = read_matrix(args.coloring)
    if feasibility_residual(U) > 1e-6:
        raise UsageError("coloring columns are not unit vectors")
    best = round_hyperplane(A, U, trials=args.trials, seed=args.seed)
    print(f"value {_fmt(best.value)}  (heuristic upper bound)", file=out)
    print(f"signs {' '.join(str(int(s)) for s in best.signs)}", file=out)
    return EXIT_OK


def cmd_report(args, out):
    A = read_matrix(args.input)
    try:
        rep = build_report(
            A, args.seed, source=args.source or args.input, trials=args.trials,
            max_iters=args.max_iters, cert_iters=args.iters, brute_limit=args.brute_limit,
            round_trials=args.round_trials,
        )
    except ReportCheckError as exc:
        print(f"report check failed: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    text = dump_json(rep.to_dict(timings=not args.no_timings))
    if args.out:
        atomic_write(args.out, text)
    else:
        out.write(text)
    if args.table:
        out.write(format_table(rep))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="disclab", description="Discrepancy and vector discrepancy toolkit.")
    parser.add_argument("--version", action="version", version=f"disclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=["gaussian", "beck-fiala", "ap", "tight"])
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--vertices", type=int, default=10)
    p.add_argument("--edges", type=int, default=10)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--scaled", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="upper-bound vecdisc by the factorised SDP")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.add_argument("--out", help="write the vector coloring (dim x n) here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("brute", help="exact discrepancy by enumeration")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("cert-search", help="search for a dual certificate")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cert_search)

    p = sub.add_parser("cert-verify", help="verify a dual certificate")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_cert_verify)

    p = sub.add_parser("witness", help="refute a certificate with sum(w) > 1")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("trace", help="trace the determinant/majorization chain")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("round", help="hyperplane-round a vector coloring")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("report", help="solve, search a certificate, brute force and round")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--iters", type=int, default=50, help="certificate search rounds")
    p.add_argument("--brute-limit", type=int, default=20)
    p.add_argument("--round-trials", type=int, default=100)
    p.add_argument("--source", help="instance label recorded in the report (default: input path)")
    p.add_argument("--out")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def run_command(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, MatrixFormatError, CertificateFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WitnessNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
