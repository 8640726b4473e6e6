"""End-to-end acceptance checks.

Each test records a one-line verdict in ``RESULTS``; the conftest hook prints
them after the run.  Expensive solves and certificate searches are shared
through module-scoped fixtures.
"""
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import naive_disc, random_orthonormal, random_psd
from disclab.brute import disc_brute
from disclab.cli import run_command
from disclab.dual import extract_witness, search_certificate, theorem_trace, verify_certificate
from disclab.instances import (
    gen_arithmetic_progressions,
    gen_beck_fiala,
    gen_gaussian_unit,
    gen_tight,
)
from disclab.io import write_matrix
from disclab.linalg import det_psd, eig_sym
from disclab.majorization import powering_bounds, random_majorizing_pair, sum_dominates
from disclab.sdp import SolverConfig, normalize_columns, objective_and_gradient, solve_vecdisc

RESULTS: dict[int, tuple[bool, str, str]] = {}

SHAPES = [(10, 10), (20, 20), (30, 30), (40, 20), (15, 40)]
SUITE = [(m, n, seed) for (m, n) in SHAPES for seed in range(10)]


def record(number, label, ok, detail):
    RESULTS[number] = (bool(ok), label, detail)
    assert ok, f"criterion {number} ({label}) failed: {detail}"


@pytest.fixture(scope="module")
def suite_instances():
    return {key: gen_gaussian_unit(*key) for key in SUITE}


@pytest.fixture(scope="module")
def suite_solutions(suite_instances):
    return {key: solve_vecdisc(A) for key, A in suite_instances.items()}


@pytest.fixture(scope="module")
def suite_certificates(suite_instances):
    return {key: search_certificate(A, seed=key[2]) for key, A in suite_instances.items()}


def test_c01_vector_colorings_below_one(suite_solutions):
    bounds = {key: sol.bound for key, sol in suite_solutions.items()}
    worst = max(bounds, key=bounds.get)
    bad = [key for key, b in bounds.items() if not b <= 1 + 1e-3]
    record(1, "sqrt(vecdisc) <= 1 + 1e-3 on 50 Gaussian unit-column instances", not bad,
           f"{50 - len(bad)}/50, worst {bounds[worst]:.4g} at {worst}")


def test_c02_tightness(tmp_path):
    buf = io.StringIO()
    path = tmp_path / "tight.txt"
    write_matrix(gen_tight(), path)
    code = run_command(["report", "--in", str(path), "--no-timings"], out=buf)
    rep = json.loads(buf.getvalue())
    sv, D, gap = rep["primal"]["sqrt_value"], rep["dual"]["D"], rep["gap"]
    ok = (code == 0 and 1 - 1e-6 <= sv <= 1 and rep["dual"]["verified"]
          and D >= 1 - 1e-6 and abs(gap) <= 2e-6)
    record(2, "tight 1x1 instance: primal 1, verified dual 1, gap <= 2e-6", ok,
           f"sqrt_value {sv!r}, D {D!r}, gap {gap:.3g}")


def _perturbed(rng, A, cert, kind):
    """Overweight (p, w) with sum(w) >= 1.05, built to sit close to containment."""
    m, n = A.shape
    p = cert.p if kind % 2 == 0 else rng.dirichlet(np.ones(m))
    if kind == 0:
        base = np.einsum("ij,i,ij->j", A, p, A)  # diag of A^T P A
    elif kind == 1:
        base = np.ones(n)
    elif kind == 2:
        base = np.clip(cert.w, 0, None) + rng.exponential(0.01, n)
    else:
        base = rng.dirichlet(np.ones(n) * 0.3)
    total = 1.05 + rng.uniform(0.0, 0.2)
    return p, base * total / base.sum()


def test_c03_dual_ceiling_and_witnesses(suite_instances, suite_certificates):
    over = []
    for key, cert in suite_certificates.items():
        A = suite_instances[key]
        if not (verify_certificate(A, cert) and cert.weight <= 1 + 1e-6 and cert.D <= 1 + 1e-6):
            over.append(key)

    rng = np.random.default_rng(3)
    keys = [SUITE[i] for i in rng.choice(len(SUITE), size=20, replace=False)]
    found = 0
    for i, key in enumerate(keys):
        A = suite_instances[key]
        p, w = _perturbed(rng, A, suite_certificates[key], i % 4)
        assert w.sum() >= 1.05
        wit = extract_witness(A, p, w)
        lhs = float(np.sum(p * (A @ wit.z) ** 2))
        rhs = float(np.sum(w * wit.z**2))
        found += lhs < rhs
    weights = [c.weight for c in suite_certificates.values()]
    record(3, "searched certificates stay below 1; overweight ones are refuted",
           not over and found == 20,
           f"{50 - len(over)}/50 certificates within ceiling (max sum w {max(weights):.4g}), "
           f"witnesses {found}/20")


def test_c04_relaxation_below_disc():
    rng = np.random.default_rng(4)
    worst = -np.inf
    fails = 0
    for i in range(30):
        n = int(rng.integers(2, 13))
        kind = i % 3
        if kind == 0:
            A = gen_gaussian_unit(int(rng.integers(1, 15)), n, seed=i)
        elif kind == 1:
            t = int(rng.integers(1, 4))
            A = gen_beck_fiala(n, int(rng.integers(t, 9)), t, seed=i, scaled=bool(rng.integers(2)))
        else:
            A = gen_arithmetic_progressions(n, scaled=bool(rng.integers(2)))
        sol = solve_vecdisc(A, SolverConfig(trials=4))
        d = disc_brute(A).value
        worst = max(worst, sol.bound - d)
        fails += not sol.bound <= d + 1e-6
    record(4, "sqrt(vecdisc) <= disc on 30 mixed instances", fails == 0,
           f"{30 - fails}/30, max sqrt(vecdisc) - disc {worst:.3g}")


def test_c05_bounded_degree():
    rng = np.random.default_rng(5)
    fails, worst = 0, []
    for i in range(20):
        t = (2, 3, 4)[i % 3]
        n = int(rng.integers(6, 15))
        H = gen_beck_fiala(n, int(rng.integers(t, 12)), t, seed=i)
        d = disc_brute(H).value
        worst.append(d / (2 * t - 1))
        fails += not d <= 2 * t - 1
    record(5, "disc <= 2t - 1 on 20 hypergraphs of degree t", fails == 0,
           f"{20 - fails}/20, max disc/(2t-1) {max(worst):.3g}")


def test_c06_majorization_suite():
    rng = np.random.default_rng(6)
    pairs = [random_majorizing_pair(rng, int(rng.integers(2, 51))) for _ in range(1000)]
    sums = sum(sum_dominates(x, y)[0] for x, y in pairs)
    powering = 0
    for x, y in pairs[:100]:
        powering += all(np.greater_equal(*powering_bounds(x, y, L)) for L in (1, 5, 25))
    record(6, "product majorization implies sum domination", sums == 1000 and powering == 100,
           f"sum domination {sums}/1000, powering bounds {powering}/100")


def test_c07_section_determinant():
    rng = np.random.default_rng(7)
    holds, worst = 0, -np.inf
    for _ in range(500):
        n = int(rng.integers(1, 13))
        k = int(rng.integers(1, n + 1))
        X = random_psd(rng, n, rank=int(rng.integers(1, n + 1))) / n
        U = random_orthonormal(rng, n, k)
        lhs = det_psd(U.T @ X @ U)
        rhs = float(np.prod(eig_sym(X).values[:k]))
        worst = max(worst, lhs - rhs)
        holds += lhs <= rhs + 1e-8
    record(7, "det(U^T X U) <= top-k eigenvalue product", holds == 500,
           f"{holds}/500, max excess {worst:.3g}")


def test_c08_nested_determinants():
    rng = np.random.default_rng(8)
    holds, worst = 0, -np.inf
    for _ in range(500):
        n = int(rng.integers(1, 13))
        X = random_psd(rng, n, rank=n + int(rng.integers(0, 3))) / n
        c = rng.standard_normal(n)
        # X - t c c^T stays PSD exactly when t <= 1 / (c^T X^{-1} c)
        t = rng.uniform(0, 1) / float(c @ np.linalg.solve(X, c))
        Y = X - t * np.outer(c, c)
        lhs, rhs = det_psd(X), det_psd(Y)
        worst = max(worst, rhs - lhs)
        holds += lhs >= rhs - 1e-8
    record(8, "det(X) >= det(Y) for nested PSD pairs", holds == 500,
           f"{holds}/500, max excess {worst:.3g}")


def _feasible_triple(rng, i):
    m = int(rng.integers(2, 16))
    n = int(rng.integers(1, m + 1))
    A = gen_gaussian_unit(m, n, seed=1000 + i)
    p = rng.dirichlet(np.ones(m) * float(rng.choice([0.3, 1.0, 5.0])))
    M = (A.T * p) @ A
    d = rng.uniform(0.1, 1.0, size=n)
    beta = np.linalg.eigvalsh(M / np.sqrt(np.outer(d, d)))[0]
    w = beta * d * float(rng.choice([1.0, 0.99, 0.5]))
    if i % 5 == 4 and n > 1:
        w[0] = -abs(w[0])  # a negative weight is dropped by the trace
    return A, p, w


def test_c09_proof_trace():
    rng = np.random.default_rng(9)
    ok, max_w = 0, 0.0
    for i in range(50):
        A, p, w = _feasible_triple(rng, i)
        tr = theorem_trace(A, p, w)
        max_w = max(max_w, tr.sum_w)
        ok += tr.all_flags and tr.sum_w <= 1 + 1e-6
    record(9, "proof trace flags all true on feasible triples", ok == 50,
           f"{ok}/50, max sum w {max_w:.4g}")


def test_c10_gray_equals_naive():
    rng = np.random.default_rng(10)
    same = 0
    for _ in range(50):
        n = int(rng.integers(1, 11))
        A = rng.standard_normal((int(rng.integers(1, 9)), n))
        same += disc_brute(A).value == naive_disc(A)
    record(10, "Gray-code enumeration equals naive enumeration exactly", same == 50, f"{same}/50")


def test_c11_gradient():
    rng = np.random.default_rng(11)
    worst, ok = 0.0, 0
    h = 1e-6
    for _ in range(20):
        m, n = int(rng.integers(1, 9)), int(rng.integers(1, 7))
        A = rng.standard_normal((m, n))
        U = normalize_columns(rng.standard_normal((int(rng.integers(1, n + 1)), n)))
        mu = float(10 ** rng.uniform(-2, 0))
        G = objective_and_gradient(A, U, mu)[1]
        fd = np.zeros_like(U)
        for idx in np.ndindex(U.shape):
            E = np.zeros_like(U)
            E[idx] = h
            fd[idx] = (objective_and_gradient(A, U + E, mu)[0] - objective_and_gradient(A, U - E, mu)[0]) / (2 * h)
        err = np.abs(G - fd).max() / max(np.abs(fd).max(), 1e-12)
        worst = max(worst, err)
        ok += err <= 1e-5
    record(11, "analytic gradient matches central differences", ok == 20,
           f"{ok}/20, max relative error {worst:.2g}")


def _report_bytes(path, threads):
    env = dict(os.environ, DISCLAB_THREADS=str(threads))
    cmd = [sys.executable, "-m", "disclab.cli", "report", "--in", str(path), "--seed", "7",
           "--no-timings", "--source", "instance"]
    return subprocess.run(cmd, capture_output=True, env=env, check=True).stdout


def test_c12_report_determinism(tmp_path):
    instances = [gen_tight(), gen_gaussian_unit(6, 6, seed=1), gen_gaussian_unit(8, 5, seed=2),
                 gen_beck_fiala(8, 6, 2, seed=3, scaled=True), gen_arithmetic_progressions(7, scaled=True)]
    same = 0
    for i, A in enumerate(instances):
        path = tmp_path / f"a{i}.txt"
        write_matrix(A, path)
        first, second = _report_bytes(path, 1), _report_bytes(path, 4)
        same += first == second and len(first) > 0
    record(12, "report output is byte-identical across runs", same == 5,
           f"{same}/5 (single- vs multi-threaded runs)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))
