import numpy as np
import pytest
from scipy import integrate as scipy_integrate

from isospec.errors import AccuracyError, DivergenceError, InvalidArgumentError
from isospec.grid import make_uniform_grid
from isospec.quadrature import (
    antiderivative,
    cumulative_integral,
    integrate,
    integrate_pieces,
    integrate_semi_infinite,
    running_integral,
    tail_antiderivative,
)
from isospec.smooth import Smooth


def test_function1():
    result = integrate_semi_infinite(lambda x: np.exp(-x), 0.0)
    np.testing.assert_allclose(result, 1.0, rtol=1.0e-10)


def test_function2():
    result = integrate(lambda x: 2 / np.sqrt(np.pi) * np.exp(-x ** 2), 0.0, 30.0)
    np.testing.assert_allclose(result, 1.0, rtol=1.0e-12)


def test_function3():
    result = integrate_semi_infinite(lambda x: 1 / (1 + x) ** 2, 0.0)
    np.testing.assert_allclose(result, 1.0, rtol=1.0e-9)


def test_function4():
    result = integrate_semi_infinite(lambda x: 7 / (1 + x) ** 8, 0.0)
    np.testing.assert_allclose(result, 1.0, rtol=1.0e-10)


def test_divergent_tail():
    with pytest.raises(DivergenceError):
        integrate_semi_infinite(lambda x: 1 / (1 + x), 0.0)


def test_swapped_limits():
    f = lambda x: np.cos(3 * x) + x ** 2
    np.testing.assert_allclose(integrate(f, 2.0, -1.0), -integrate(f, -1.0, 2.0), rtol=1e-14)
    assert integrate(f, 1.5, 1.5) == 0.0


def test_many_pieces_at_once():
    a = np.array([0.0, 1.0, 2.0])
    b = np.array([1.0, 2.0, 3.0])
    values = integrate_pieces(np.exp, a, b)
    np.testing.assert_allclose(values, np.exp(b) - np.exp(a), rtol=1e-13)


def test_budget_exhausted():
    f = lambda x: np.sqrt(np.abs(x - 0.3))
    with pytest.raises(AccuracyError) as info:
        integrate_pieces(f, [0.0], [1.0], tol=1e-15, budget=30)
    assert info.value.best_estimate is not None


def test_non_finite_integrand():
    with pytest.raises(AccuracyError):
        integrate(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)


def test_running_integral_matches_scipy():
    f = lambda x: np.exp(-x ** 2) * np.cos(x)
    running = running_integral(f, 0.5)
    points = np.array([-3.0, -0.2, 0.5, 1.7, 4.0])
    expected = [scipy_integrate.quad(f, 0.5, p, epsabs=1e-13, epsrel=1e-13)[0] for p in points]
    np.testing.assert_allclose(running(points), expected, atol=1e-11)


def test_cumulative_integral_on_grid():
    grid = make_uniform_grid(0.0, 2.0, 201)
    sampled = cumulative_integral(np.cos, 0.0, grid)
    np.testing.assert_allclose(sampled.values, np.sin(grid.points), atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        cumulative_integral(np.cos, 3.0, grid)


def test_antiderivative_derivatives_are_exact():
    x = Smooth.identity()
    integrand = (-(x * x)).exp()
    primitive = antiderivative(integrand, 0.0, constant=2.0)
    points = np.linspace(-2.0, 2.0, 9)
    value, first, second = primitive.jet(points, 2)
    expected = [2.0 + scipy_integrate.quad(lambda t: np.exp(-t * t), 0.0, p)[0] for p in points]
    np.testing.assert_allclose(value, expected, atol=1e-11)
    np.testing.assert_array_equal(first, integrand(points))
    np.testing.assert_allclose(second, -2 * points * np.exp(-points ** 2), atol=1e-15)


def test_tail_antiderivative():
    x = Smooth.identity()
    tail = tail_antiderivative((-x).exp(), anchor=1.0)
    points = np.array([0.0, 0.5, 1.0, 3.0])
    np.testing.assert_allclose(tail(points), np.exp(-points), atol=1e-11)
    np.testing.assert_allclose(tail.derivative()(points), -np.exp(-points), atol=1e-15)
