import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from implicit_monotone import ConfigError, GridSpec, ModelError, SourceModel, eval_source, stiff_bistable
from implicit_monotone.experiments import example1_scheme, example2_scheme, example2_source


def test_point_source_example1():
    grid = example1_scheme(1 / 20).grid
    src = SourceModel.point(0.1, lambda t: math.sin(math.pi * t))
    j = src.point_cell(grid)
    assert grid.centers()[0][j] == pytest.approx(0.125)
    assert eval_source(src, j, grid, 0.5) == pytest.approx(20.0)
    assert eval_source(src, j - 1, grid, 0.5) == 0.0


@given(st.floats(0.0, 5.0))
def test_point_source_mass(t):
    grid = GridSpec.uniform(0.0, 1.0, 37, 0.1)
    src = SourceModel.point(0.43, lambda s: math.cos(3 * s) + 2)
    q = src.evaluate(grid, t)
    assert np.count_nonzero(q) == 1
    assert q.sum() * grid.dx[0] == pytest.approx(math.cos(3 * t) + 2)


def test_point_source_outside_grid():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    with pytest.raises(ConfigError):
        SourceModel.point(1.5, lambda t: 1.0).evaluate(grid, 0.0)


@pytest.mark.parametrize("mu", [1.0, 10.0, 1000.0])
@pytest.mark.parametrize("u", [0.0, 0.5, 1.0])
def test_bistable_equilibria(mu, u):
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    assert eval_source(stiff_bistable(mu), 3, grid, 0.2, u) == pytest.approx(0.0, abs=1e-12)


def test_bistable_sign_structure():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    src = stiff_bistable(10.0)
    for u in np.linspace(0.01, 0.49, 25):
        assert eval_source(src, 0, grid, 0.0, u) < 0
    for u in np.linspace(0.51, 0.99, 25):
        assert eval_source(src, 0, grid, 0.0, u) > 0


def test_bistable_derivative_matches_differences():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    src = stiff_bistable(7.0)
    u = np.linspace(-0.5, 1.5, 10)
    exact = src.derivative_u(grid, 0.0, u)
    bare = SourceModel.nonlinear(src.func)
    np.testing.assert_allclose(bare.derivative_u(grid, 0.0, u), exact, rtol=1e-5, atol=1e-5)


def test_derivative_source_value():
    src = example2_source(+1)
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    qx = src.func(np.array([0.5]))
    assert qx[0] == pytest.approx(-math.pi * math.cos(math.pi / 4) * math.sin(math.pi / 4))
    assert src.evaluate(grid, 0.0).shape == (10,)


def test_derivative_source_integrates_to_zero():
    grid = example2_scheme(+1).grid
    q = grid and example2_source(+1).evaluate(grid, 0.0)
    assert abs(q.sum() * grid.dx[0]) < 1e-3


def test_zero_source():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    assert eval_source(SourceModel.zero(), 4, grid, 1.0, 17.0) == 0.0
    assert SourceModel.zero().scenario == 1 and stiff_bistable(1.0).scenario == 2


def test_smooth_source_and_errors():
    grid = GridSpec.uniform(0.0, 1.0, 10, 0.1)
    src = SourceModel.smooth(lambda x, t: x + t)
    np.testing.assert_allclose(src.evaluate(grid, 1.0), grid.centers()[0] + 1.0)
    with pytest.raises(ConfigError):
        eval_source(src, 0, grid, -1.0)
    bad = SourceModel.smooth(lambda x, t: np.full_like(x, np.nan))
    with pytest.raises(ModelError):
        bad.evaluate(grid, 0.0)
