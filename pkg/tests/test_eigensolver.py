import numpy as np
import pytest

from isospec.catalog import build_family
from isospec.eigensolver import discretize, eigen_lowest, solve_spectrum, sturm_count, whole_line_extent
from isospec.errors import AccuracyError, InvalidArgumentError, SingularityError, UnsupportedOperatorError
from isospec.grid import make_uniform_grid
from isospec.operators import SecondOrderOperator
from isospec.smooth import Smooth
from isospec.special import oscillator_operator, radial_energy, radial_operator


def test_oscillator_levels():
    grid = make_uniform_grid(-10.0, 10.0, 2001)
    spectrum = solve_spectrum(oscillator_operator(), grid, 6)
    np.testing.assert_allclose(spectrum.eigenvalues, np.arange(6) + 0.5, atol=1e-3)
    assert len(spectrum) == 6
    assert spectrum.count_below(3.0) == 3


@pytest.mark.parametrize("l", [0, 1, 2])
def test_radial_levels(l):
    grid = make_uniform_grid(0.0, 8.0, 4001)
    spectrum = solve_spectrum(radial_operator(l), grid, 3)
    expected = [radial_energy(n, l) for n in range(3)]
    np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=2e-3)


def test_particle_in_a_box():
    grid = make_uniform_grid(0.0, 1.0, 2001)
    spectrum = solve_spectrum(SecondOrderOperator.schrodinger(0.0), grid, 1)
    np.testing.assert_allclose(spectrum.eigenvalues, [np.pi ** 2], atol=1e-3)


def test_deformed_oscillator_keeps_the_spectrum():
    grid = make_uniform_grid(-10.0, 10.0, 2001)
    family = build_family("oscillator1d", lam=2.0)
    deformed = solve_spectrum(family.deformed_operator, grid, 6)
    base = solve_spectrum(oscillator_operator(), grid, 6)
    np.testing.assert_allclose(deformed.eigenvalues, np.arange(6) + 0.5, atol=1e-3)
    np.testing.assert_allclose(deformed.eigenvalues, base.eigenvalues, atol=1e-3)


def test_liouville_form_of_a_first_order_term():
    # -D^2 - 2D has the spectrum of -D^2 + 1 on the same interval
    x = Smooth.identity()
    op = SecondOrderOperator(Smooth.constant(-1.0), Smooth.constant(-2.0), 0.0 * x)
    grid = make_uniform_grid(0.0, np.pi, 1001)
    d = discretize(op, grid)
    np.testing.assert_allclose(d.potential, 1.0)
    values = eigen_lowest(d, 3, vectors=False).eigenvalues
    np.testing.assert_allclose(values, [2.0, 5.0, 10.0], atol=2e-4)


def test_eigenvectors_are_weight_normalised():
    grid = make_uniform_grid(-8.0, 8.0, 801)
    d = discretize(oscillator_operator(), grid)
    spectrum = eigen_lowest(d, 3)
    norms = np.sum(d.weight[:, None] * spectrum.eigenvectors ** 2, axis=0) * grid.spacing
    np.testing.assert_allclose(norms, 1.0, rtol=1e-10)


def test_sturm_count_agrees_with_eigenvalues():
    grid = make_uniform_grid(-8.0, 8.0, 801)
    d = discretize(oscillator_operator(), grid)
    assert sturm_count(d, 5.0) == 5
    assert sturm_count(d, 0.0) == 0
    assert sturm_count(d.shifted(1.0), 5.0) == 4


def test_shifted_moves_every_level():
    grid = make_uniform_grid(-8.0, 8.0, 401)
    d = discretize(oscillator_operator(), grid)
    plain = eigen_lowest(d, 4, vectors=False).eigenvalues
    moved = eigen_lowest(d.shifted(2.0), 4, vectors=False).eigenvalues
    np.testing.assert_allclose(moved - plain, 2.0, atol=1e-9)


def test_rejects_positive_leading_coefficient():
    grid = make_uniform_grid(-1.0, 1.0, 11)
    op = SecondOrderOperator(Smooth.constant(1.0), Smooth.constant(0.0), Smooth.constant(0.0))
    with pytest.raises(UnsupportedOperatorError):
        discretize(op, grid)


def test_rejects_singular_coefficients():
    grid = make_uniform_grid(-1.0, 1.0, 21)
    op = SecondOrderOperator.schrodinger(Smooth.power(-2.0))
    with pytest.raises(SingularityError) as info:
        discretize(op, grid)
    np.testing.assert_allclose(info.value.points, [0.0], atol=1e-15)


def test_too_many_levels():
    grid = make_uniform_grid(-1.0, 1.0, 11)
    d = discretize(oscillator_operator(), grid)
    with pytest.raises(InvalidArgumentError):
        eigen_lowest(d, 10)


def test_doubling_check():
    grid = make_uniform_grid(-8.0, 8.0, 801)
    spectrum = solve_spectrum(oscillator_operator(), grid, 3, doubling_check=True)
    assert spectrum.truncation_change < 1e-8
    with pytest.raises(AccuracyError) as info:
        solve_spectrum(oscillator_operator(), make_uniform_grid(-1.5, 1.5, 151), 3, doubling_check=True,
                       truncation_tol=1e-6)
    assert len(info.value.best_estimate) == 3


def test_whole_line_extent():
    extent = whole_line_extent(lambda x: np.exp(-0.5 * x ** 2))
    np.testing.assert_allclose(extent, np.sqrt(2.0 * np.log(1e12)), atol=2e-3)
    with pytest.raises(AccuracyError):
        whole_line_extent(lambda x: np.ones_like(x), limit=100.0)
