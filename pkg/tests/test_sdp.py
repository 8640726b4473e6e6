import numpy as np
import pytest

from conftest import naive_disc
from disclab.instances import gen_beck_fiala, gen_gaussian_unit
from disclab.sdp import (
    SolverConfig,
    feasibility_residual,
    normalize_columns,
    objective_and_gradient,
    row_values,
    solve_vecdisc,
)

FAST = SolverConfig(trials=3, max_iters=3000)


def fd_gradient(A, U, mu, h=1e-6):
    G = np.zeros_like(U)
    for idx in np.ndindex(U.shape):
        E = np.zeros_like(U)
        E[idx] = h
        G[idx] = (objective_and_gradient(A, U + E, mu)[0] - objective_and_gradient(A, U - E, mu)[0]) / (2 * h)
    return G


def test_single_row_objective_is_exact(rng):
    A = rng.standard_normal((1, 4))
    U = normalize_columns(rng.standard_normal((4, 4)))
    f, G = objective_and_gradient(A, U, 0.3)
    v = U @ A[0]
    assert f == pytest.approx(float(v @ v), rel=1e-15)
    np.testing.assert_allclose(G, 2 * np.outer(v, A[0]), rtol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((5, 5))
    U = normalize_columns(rng.standard_normal((5, 5)))
    mu = float(rng.uniform(0.05, 1.0))
    G = objective_and_gradient(A, U, mu)[1]
    G_fd = fd_gradient(A, U, mu)
    assert np.abs(G - G_fd).max() <= 1e-5 * np.abs(G_fd).max()


def test_small_mu_approaches_max(rng):
    for _ in range(5):
        A = rng.standard_normal((6, 4))
        U = normalize_columns(rng.standard_normal((4, 4)))
        f, _ = objective_and_gradient(A, U, 1e-6)
        assert abs(f - row_values(A, U).max()) <= 1e-4


def test_objective_is_stable_for_large_rows():
    A = np.array([[1e3, 0.0], [0.0, 1.0]])
    f, G = objective_and_gradient(A, np.eye(2), 1e-3)
    assert np.isfinite(f) and np.all(np.isfinite(G))
    assert f == pytest.approx(1e6)


def test_mu_must_be_positive():
    with pytest.raises(ValueError):
        objective_and_gradient(np.eye(2), np.eye(2), 0.0)


def test_feasibility_residual_examples():
    U = np.eye(3)
    assert feasibility_residual(U) == 0.0
    U[:, 1] *= 1.001
    assert feasibility_residual(U) == pytest.approx(2.001e-3, rel=1e-10)


def test_tight_instance_value_is_one():
    sol = solve_vecdisc([[1.0]], FAST)
    assert sol.value == 1.0
    assert sol.bound == 1.0


def test_identity_value_is_forced():
    sol = solve_vecdisc(np.eye(5), FAST)
    assert sol.value == pytest.approx(1.0, abs=1e-12)


def test_cancelling_pair():
    sol = solve_vecdisc([[2**-0.5, 2**-0.5]], FAST)
    assert sol.value <= 1e-6
    u1, u2 = sol.coloring.T
    assert u1 @ u2 == pytest.approx(-1.0, abs=1e-5)


def test_solution_invariants(rng):
    A = gen_gaussian_unit(8, 6, seed=5)
    sol = solve_vecdisc(A, FAST)
    assert feasibility_residual(sol.coloring) <= 2e-9
    assert sol.value == sol.row_values.max()
    np.testing.assert_array_equal(sol.row_values, row_values(A, sol.coloring))
    assert sol.coloring.shape == (6, 6)
    assert sol.value == min(sol.trial_values)
    assert sol.converged


def test_low_dimension_config():
    A = gen_gaussian_unit(6, 6, seed=2)
    sol = solve_vecdisc(A, SolverConfig(dim=2, trials=2, max_iters=500))
    assert sol.coloring.shape == (2, 6)
    assert feasibility_residual(sol.coloring) <= 2e-9


def test_determinism_and_worker_independence():
    A = gen_gaussian_unit(7, 5, seed=9)
    cfg = SolverConfig(trials=4, max_iters=800, seed=42)
    a = solve_vecdisc(A, cfg, workers=1)
    b = solve_vecdisc(A, cfg, workers=1)
    c = solve_vecdisc(A, cfg, workers=3)
    for other in (b, c):
        assert np.array_equal(a.coloring, other.coloring)
        assert a.value == other.value and a.iterations == other.iterations


def test_upper_bound_below_exact_disc(rng):
    for seed in range(6):
        A = gen_gaussian_unit(int(rng.integers(1, 7)), int(rng.integers(1, 9)), seed=seed)
        sol = solve_vecdisc(A, FAST)
        assert sol.bound <= naive_disc(A) + 1e-6


def test_non_converged_is_flagged():
    A = gen_gaussian_unit(12, 12, seed=0)
    sol = solve_vecdisc(A, SolverConfig(trials=1, max_iters=5))
    assert not sol.converged
    assert sol.iterations == 5
    assert feasibility_residual(sol.coloring) <= 2e-9


@pytest.mark.parametrize("kwargs", [dict(trials=0), dict(mu_final=2.0), dict(mu_decay=1.0), dict(dim=0), dict(step=-1)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        solve_vecdisc([[np.nan, 1.0]])


def test_escapes_colinear_saddle():
    # heavy smoothing drives every start to u_2 = -u_1, a stationary point
    # that is far from optimal; for n = 2 the optimum is a 1-D scan over cos(theta)
    A = gen_gaussian_unit(7, 2, seed=27)
    c = np.linspace(-1.0, 1.0, 200001)
    scan = ((A[:, 0] ** 2 + A[:, 1] ** 2)[:, None] + 2 * (A[:, 0] * A[:, 1])[:, None] * c).max(axis=0)
    sol = solve_vecdisc(A, FAST)
    assert sol.converged
    assert scan.min() - 1e-6 <= sol.value <= scan.min() + 1e-3 * np.log(7)


def test_zero_optimum_is_exact():
    # disc = 0 here; sqrt amplifies any smoothing residual, so the answer
    # must be the exact sign coloring rather than a near-zero vector one
    A = gen_beck_fiala(7, 3, 3, seed=28)
    assert naive_disc(A) == 0.0
    sol = solve_vecdisc(A, FAST)
    assert sol.value == 0.0
    assert feasibility_residual(sol.coloring) == 0.0
