"""End-to-end solve report: primal bound, dual certificate, brute force, rounding.

Every number in a report is re-derived by :func:`check_report` through a
different code path before the report is emitted.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .brute import disc_brute, disc_value
from .dual import DualCertificate, certificate_min_eigenvalue, search_certificate, verify_certificate
from .instances import max_column_norm
from .linalg import as_matrix
from .rounding import round_hyperplane
from .sdp import SolverConfig, feasibility_residual, solve_vecdisc

__all__ = ["SolveReport", "ReportCheckError", "build_report", "check_report", "format_table"]

GAP_TOL = 1e-6


class ReportCheckError(ArithmeticError):
    """An independently recomputed quantity disagrees with the report."""


@dataclass
class SolveReport:
    instance: dict
    primal: dict
    dual: dict
    gap: float
    seed: int
    version: str = __version__
    brute: Optional[dict] = None
    rounded: Optional[dict] = None
    timings: Optional[dict] = None
    # artifacts kept for checking; not serialised
    coloring: Optional[np.ndarray] = field(default=None, repr=False)
    certificate: Optional[DualCertificate] = field(default=None, repr=False)

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "instance": self.instance,
            "primal": self.primal,
            "dual": self.dual,
            "gap": self.gap,
            "brute": self.brute,
            "rounded": self.rounded,
            "seed": self.seed,
            "version": self.version,
        }
        if timings and self.timings is not None:
            out["timings"] = self.timings
        return out


def build_report(A, seed: int = 0, *, source: str = "", trials: int = 8, max_iters: int = 5000,
                 cert_iters: int = 50, brute_limit: int = 20, round_trials: int = 100) -> SolveReport:
    """Run solve, certificate search, optional brute force and rounding on ``A``."""
    A = as_matrix(A)
    m, n = A.shape
    timings = {}

    t0 = time.perf_counter()
    sol = solve_vecdisc(A, SolverConfig(trials=trials, max_iters=max_iters, seed=seed))
    timings["solve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cert = search_certificate(A, iters=cert_iters, seed=seed)
    timings["cert_search"] = time.perf_counter() - t0

    brute = None
    if n <= brute_limit:
        t0 = time.perf_counter()
        best = disc_brute(A, limit_n=brute_limit)
        timings["brute"] = time.perf_counter() - t0
        brute = {"value": best.value, "signs": [int(s) for s in best.signs]}

    rounded = None
    if round_trials > 0:
        t0 = time.perf_counter()
        rc = round_hyperplane(A, sol.coloring, trials=round_trials, seed=seed)
        timings["round"] = time.perf_counter() - t0
        rounded = {
            "value": rc.value,
            "signs": [int(s) for s in rc.signs],
            "trials": round_trials,
            "label": "heuristic upper bound",
        }

    sqrt_value = math.sqrt(sol.value)
    report = SolveReport(
        instance={
            "rows": m,
            "cols": n,
            "source": source,
            "max_column_norm": max_column_norm(A),
        },
        primal={
            "value": sol.value,
            "sqrt_value": sqrt_value,
            "converged": sol.converged,
            "iterations": sol.iterations,
            "grad_norm": sol.grad_norm,
            "feasibility_residual": feasibility_residual(sol.coloring),
            "trials": trials,
        },
        dual={
            "D": cert.D,
            "sum_w": cert.weight,
            "min_eigenvalue": certificate_min_eigenvalue(A, cert),
            "verified": verify_certificate(A, cert),
            "p": [float(v) for v in cert.p],
            "w": [float(v) for v in cert.w],
        },
        gap=sqrt_value - cert.D,
        seed=seed,
        brute=brute,
        rounded=rounded,
        timings=timings,
        coloring=sol.coloring,
        certificate=cert,
    )
    check_report(A, report)
    return report


def check_report(A, report: SolveReport) -> None:
    """Recompute the report's claims from its artifacts; raise on any mismatch."""
    A = as_matrix(A)
    U = report.coloring
    if U is not None:
        if feasibility_residual(U) > 2e-9:
            raise ReportCheckError("vector coloring is not unit-normed")
        X = U.T @ U
        rows = np.einsum("ij,jk,ik->i", A, X, A)
        value = float(rows.max())
        if not math.isclose(value, report.primal["value"], rel_tol=1e-9, abs_tol=1e-12):
            raise ReportCheckError(f"primal value {report.primal['value']!r} != recomputed {value!r}")

    cert = report.certificate
    if cert is not None:
        lam = float(np.linalg.eigvalsh((A.T * cert.p) @ A - np.diag(cert.w))[0])
        if report.dual["verified"] != (lam >= -1e-8 and cert.weight >= cert.D**2 - 1e-8):
            raise ReportCheckError(f"certificate validity disagrees with LAPACK (min eigenvalue {lam!r})")
        if not report.dual["verified"]:
            raise ReportCheckError("certificate search returned an unverified certificate")

    if report.gap < -GAP_TOL:
        raise ReportCheckError(f"negative duality gap {report.gap!r}")

    for key in ("brute", "rounded"):
        part = getattr(report, key)
        if part is not None and disc_value(A, part["signs"]) != part["value"]:
            raise ReportCheckError(f"{key} value does not match its coloring")
    if report.brute is not None and math.sqrt(report.primal["value"]) > report.brute["value"] + GAP_TOL:
        raise ReportCheckError("vector bound exceeds the exact discrepancy")


def format_table(report: SolveReport) -> str:
    rows = [
        ("rows x cols", f"{report.instance['rows']} x {report.instance['cols']}"),
        ("max column norm", f"{report.instance['max_column_norm']:.12g}"),
        ("vecdisc upper (sqrt primal)", f"{report.primal['sqrt_value']:.12g}"),
        ("vecdisc lower (dual D)", f"{report.dual['D']:.12g}"),
        ("gap", f"{report.gap:.3e}"),
        ("primal converged", str(report.primal["converged"])),
    ]
    if report.brute is not None:
        rows.append(("disc (exact)", f"{report.brute['value']:.12g}"))
    if report.rounded is not None:
        rows.append(("disc upper (rounded, heuristic)", f"{report.rounded['value']:.12g}"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"
