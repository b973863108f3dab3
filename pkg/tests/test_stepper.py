import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from implicit_monotone import (
    BoundaryPolicy,
    ConfigError,
    FluxModel,
    GridSpec,
    SchemeConfig,
    SolverConfig,
    SolverError,
    SourceModel,
    StateField,
    assemble_jacobian,
    burgers,
    discretize_initial,
    linear,
    residual,
    run,
    sine,
    step,
    stiff_bistable,
)
from implicit_monotone.experiments import lf2d_scheme, unit_box

ZERO_FLUX = FluxModel.autonomous(lambda u: 0.0 * u, dflux=lambda u: 0.0 * u, lipschitz=0.0, name="zero")


def periodic(model, kind, n=20, dt=0.05, **kw):
    grid = GridSpec.uniform(0.0, 1.0, n, dt, boundary=BoundaryPolicy.periodic())
    return SchemeConfig(grid, model, flux_kind=kind, **kw)


def test_residual_trivial_dynamics():
    cfg = periodic(ZERO_FLUX, "upwind")
    u = StateField(np.random.default_rng(0).normal(size=20))
    np.testing.assert_array_equal(residual(u, u, 0.05, cfg), 0.0)


@pytest.mark.parametrize("kind", ["upwind", "lax_friedrichs", "godunov"])
@pytest.mark.parametrize("bc", [BoundaryPolicy.periodic(), BoundaryPolicy.outflow()], ids=["periodic", "outflow"])
def test_residual_of_constant_state_vanishes(kind, bc):
    grid = GridSpec.uniform(0.0, 1.0, 12, 0.05, boundary=bc)
    cfg = SchemeConfig(grid, burgers(), flux_kind=kind)
    u = StateField(np.full(12, 0.7))
    np.testing.assert_allclose(residual(u, u, 0.05, cfg), 0.0, atol=1e-14)


@given(st.floats(-3.0, 3.0), st.floats(0.05, 3.0))
def test_lf_newton_matrix_is_tridiagonal_oracle(vel, lam):
    n = 10
    cfg = periodic(linear(vel), "lax_friedrichs", n=n, dt=lam / n)
    lam = cfg.grid.lam[0]
    u = np.linspace(-1.0, 2.0, n)
    A = assemble_jacobian(u, cfg.grid.dt, cfg, cfg.grid.dt).toarray()
    lo, di, up = -0.5 - vel * lam / 2, 2.0, -0.5 + vel * lam / 2
    expected = (
        np.diag(np.full(n, di)) + np.diag(np.full(n - 1, lo), -1) + np.diag(np.full(n - 1, up), 1)
    )
    expected[0, -1], expected[-1, 0] = lo, up
    assert np.array_equal(A, expected)


def test_lf_one_newton_iteration_for_linear_problem():
    cfg = periodic(linear(1.0), "lax_friedrichs", n=20, dt=0.05)
    u0 = StateField(np.sin(2 * np.pi * cfg.grid.centers()[0]))
    u1, rep = step(u0, 0.0, cfg)
    assert rep.converged and rep.iterations == 1
    assert rep.final_residual <= cfg.solver.residual_tol


@pytest.mark.parametrize("strategy", ["newton_banded", "fixed_point", "newton_then_fixed_point"])
def test_pure_ode_step(strategy):
    grid = GridSpec.uniform(0.0, 1.0, 8, 0.1, boundary=BoundaryPolicy.outflow())
    cfg = SchemeConfig(grid, ZERO_FLUX, SourceModel.smooth(lambda x, t: np.ones_like(x)),
                       flux_kind="upwind", solver=SolverConfig(strategy=strategy))
    u0 = StateField(np.linspace(-1, 1, 8))
    u1, rep = step(u0, 0.0, cfg)
    np.testing.assert_allclose(u1.values, u0.values + 0.1, atol=1e-10)


@pytest.mark.parametrize("strategy", ["newton_banded", "fixed_point"])
def test_strategies_agree_on_burgers(strategy):
    grid = GridSpec.uniform(-1.0, 1.0, 30, 0.02, boundary=BoundaryPolicy.outflow())
    cfg = SchemeConfig(grid, burgers(), flux_kind="godunov", solver=SolverConfig(strategy=strategy))
    u0 = discretize_initial(lambda x: np.where(x < 0, 1.0, -0.5), grid, "midpoint")
    ref, _ = step(u0, 0.0, SchemeConfig(grid, burgers(), flux_kind="godunov"))
    u1, rep = step(u0, 0.0, cfg)
    assert rep.converged
    np.testing.assert_allclose(u1.values, ref.values, atol=1e-9)


@given(st.lists(st.floats(-2, 2), min_size=16, max_size=16))
def test_conservation_on_periodic_grid(vals):
    cfg = periodic(sine(), "godunov", n=16, dt=0.2)
    u0 = StateField(np.array(vals))
    u1, _ = step(u0, 0.0, cfg)
    assert u1.values.sum() == pytest.approx(u0.values.sum(), rel=1e-8, abs=1e-8)


def test_jacobian_against_directional_differences(rng):
    grid = GridSpec.uniform(0.0, 1.0, 15, 0.05, boundary=(BoundaryPolicy.dirichlet(0.3), BoundaryPolicy.outflow()))
    cfg = SchemeConfig(grid, burgers(), stiff_bistable(5.0), flux_kind="godunov")
    u = rng.uniform(-1, 1, 15)
    u_prev = StateField(rng.uniform(-1, 1, 15))
    J = assemble_jacobian(u, 0.05, cfg, 0.05)
    base = residual(StateField(u), u_prev, 0.05, cfg)
    for eps in (1e-4, 1e-6):
        d = rng.normal(size=15)
        fd = (residual(StateField(u + eps * d), u_prev, 0.05, cfg) - base) / eps
        assert np.max(np.abs(fd - J @ d)) < 50 * eps + 1e-5


def test_2d_jacobian_is_five_point():
    cfg = lf2d_scheme(1.0)
    J = assemble_jacobian(np.zeros(cfg.grid.size), 0.1, cfg, 0.1)
    assert sp.issparse(J)
    assert J.getnnz(axis=1).max() == 5


@pytest.mark.parametrize("v, inside", [(1.0, True), (1.5, False)])
def test_2d_lf_box(v, inside):
    cfg = lf2d_scheme(v)
    u0 = discretize_initial(unit_box, cfg.grid, "midpoint")
    u1, rep = step(u0, 0.0, cfg)
    assert rep.converged
    if inside:
        assert u1.values.min() >= -1e-8 and u1.values.max() <= 1 + 1e-8
    else:
        assert u1.values.min() < 0 and u1.values.max() > 1
    assert cfg.monotonicity_warning is (not inside)


def test_dirichlet_inflow_enters():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1, boundary=(BoundaryPolicy.dirichlet(lambda t: 2.0), BoundaryPolicy.outflow()))
    cfg = SchemeConfig(grid, linear(1.0), flux_kind="upwind")
    traj = run(StateField(np.zeros(10)), 0.0, 0.3, cfg, snapshot_times=[0.3])
    assert traj[0][1].values[0] > 1.0 and traj[0][1].values[-1] < 0.1


def test_run_zero_steps():
    cfg = periodic(burgers(), "godunov")
    ic = StateField(np.ones(20))
    traj = run(ic, 0.5, 0.5, cfg)
    assert len(traj) == 1
    t, u, rep = traj[0]
    assert t == 0.5 and u is ic and rep.iterations == 0 and rep.converged


def test_run_hits_snapshot_times_with_shortened_steps():
    cfg = periodic(burgers(), "godunov", dt=0.1)
    traj = run(StateField(np.ones(20)), 0.0, 0.35, cfg, snapshot_times=[0.05, 0.35])
    assert [t for t, _, _ in traj] == pytest.approx([0.05, 0.35])
    assert traj[0][2].dt == pytest.approx(0.05) and traj[-1][2].dt == pytest.approx(0.1)


def test_run_rejects_bad_snapshots():
    cfg = periodic(burgers(), "godunov")
    with pytest.raises(ConfigError):
        run(StateField(np.ones(20)), 0.0, 1.0, cfg, snapshot_times=[2.0])


def test_solver_failure_carries_best_and_partial():
    grid = GridSpec.uniform(-1.0, 1.0, 30, 0.5, boundary=BoundaryPolicy.outflow())
    cfg = SchemeConfig(grid, burgers(), flux_kind="godunov",
                       solver=SolverConfig(max_iter=1, residual_tol=1e-14))
    ic = discretize_initial(lambda x: np.where(x < 0, 1.0, 0.0), grid, "midpoint")
    with pytest.raises(SolverError) as info:
        run(ic, 0.0, 1.0, cfg, snapshot_times=[0.0, 0.5, 1.0])
    err = info.value
    assert err.best is not None and err.report is not None and not err.report.converged
    assert len(err.partial) == 1


def test_scheme_rejects_dimension_mismatch():
    grid = GridSpec((0.1, 0.1), 0.1, (5, 5))
    with pytest.raises(ConfigError):
        SchemeConfig(grid, burgers(1))


@pytest.mark.parametrize("kwargs", [dict(residual_tol=0.0), dict(max_iter=0), dict(strategy="bisection")])
def test_solver_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SolverConfig(**kwargs)


def test_2d_zero_jacobian_diagonal_falls_back_to_direct_solve():
    # v = 2, lam = 1: the outflow corner's self-coupling cancels the diagonal exactly
    cfg = lf2d_scheme(2.0)
    J = assemble_jacobian(np.zeros(cfg.grid.size), 0.1, cfg, 0.1)
    assert np.any(J.diagonal() == 0.0)
    u1, rep = step(discretize_initial(unit_box, cfg.grid, "midpoint"), 0.0, cfg)
    assert rep.converged and u1.values.min() < 0
