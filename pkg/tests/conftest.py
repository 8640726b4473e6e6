import itertools

import numpy as np
import pytest


def cofactor_det(M):
    """Laplace expansion along the first row; exponential, for n <= 6."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 1:
        return M[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total


def naive_disc(A):
    """min over all 2^n sign vectors of max_i |sum_j A_ij x_j|, scored with A @ x."""
    A = np.asarray(A, dtype=float)
    return min(
        float(np.max(np.abs(A @ np.array(x))))
        for x in itertools.product((1.0, -1.0), repeat=A.shape[1])
    )


def random_orthonormal(rng, n, k):
    q, r = np.linalg.qr(rng.standard_normal((n, k)))
    return q * np.sign(np.diag(r))


def random_psd(rng, n, rank=None):
    B = rng.standard_normal((rank or n, n))
    return B.T @ B


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, label, detail = RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {label} ({detail})")
