import numpy as np
import pytest

from isospec.errors import InvalidArgumentError
from isospec.grid import Boundary, SampledFunction, differentiate, make_uniform_grid


def test_points_hit_both_ends():
    grid = make_uniform_grid(-2.0, 10.0, 1201)
    x = grid.points
    assert x[0] == -2.0
    assert x[-1] == 10.0
    np.testing.assert_allclose(grid.spacing, 0.01)
    assert grid.boundary is Boundary.DIRICHLET


def test_interior_skips_edges():
    grid = make_uniform_grid(0.0, 1.0, 101)
    interior = grid.interior(10)
    assert interior.size == 81
    np.testing.assert_allclose(interior[0], 0.1)
    np.testing.assert_allclose(interior[-1], 0.9)


@pytest.mark.parametrize("lower, upper, count", [(1.0, 1.0, 10), (2.0, 1.0, 10), (0.0, np.inf, 10), (0.0, 1.0, 1)])
def test_invalid_grids_rejected(lower, upper, count):
    with pytest.raises(InvalidArgumentError):
        make_uniform_grid(lower, upper, count)


def test_interior_too_small():
    with pytest.raises(InvalidArgumentError):
        make_uniform_grid(0.0, 1.0, 15).interior(10)


def test_sampled_function_length_checked():
    grid = make_uniform_grid(0.0, 1.0, 11)
    with pytest.raises(InvalidArgumentError):
        SampledFunction(grid, np.zeros(10))


def test_differentiate_is_second_order():
    grid = make_uniform_grid(0.0, np.pi, 2001)
    slope = differentiate(SampledFunction(grid, np.sin(grid.points)))
    np.testing.assert_allclose(slope.values, np.cos(grid.points), atol=1e-5)
