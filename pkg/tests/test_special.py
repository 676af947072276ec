import numpy as np
import pytest
from scipy import special as sp

from isospec.errors import InvalidArgumentError, SingularityError
from isospec.special import (
    assoc_laguerre,
    assoc_laguerre_derivative,
    bessel_family,
    hermite_family,
    hermite_fn,
    hermite_fn_derivative,
    radial_energy,
    radial_family_in_l,
    radial_u,
    radial_u_derivative,
    spherical_bessel,
    spherical_bessel_derivative,
)

X = np.linspace(-6.0, 6.0, 241)
RHO = np.linspace(0.1, 40.0, 400)


@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_hermite_functions(n):
    norm = np.sqrt(2.0 ** n * sp.factorial(n) * np.sqrt(np.pi))
    expected = sp.eval_hermite(n, X) * np.exp(-0.5 * X ** 2) / norm
    np.testing.assert_allclose(hermite_fn(n, X), expected, rtol=1e-10, atol=1e-11)


@pytest.mark.parametrize("n", [0, 3, 60])
def test_hermite_derivative(n):
    lower = hermite_fn(n - 1, X) if n else 0.0
    expected = -X * hermite_fn(n, X) + np.sqrt(2.0 * n) * lower
    np.testing.assert_allclose(hermite_fn_derivative(n, X), expected, atol=1e-11)


def test_hermite_index_range():
    with pytest.raises(InvalidArgumentError):
        hermite_fn(61, X)
    with pytest.raises(InvalidArgumentError):
        hermite_fn(1.5, X)


@pytest.mark.parametrize("l", list(range(9)) + [25])
def test_regular_spherical_bessel(l):
    np.testing.assert_allclose(spherical_bessel("j", l, RHO), sp.spherical_jn(l, RHO), rtol=1e-9, atol=1e-13)
    np.testing.assert_allclose(
        spherical_bessel_derivative("j", l, RHO), sp.spherical_jn(l, RHO, derivative=True), rtol=1e-9, atol=1e-13
    )


@pytest.mark.parametrize("l", range(9))
def test_irregular_spherical_bessel(l):
    rho = np.linspace(0.5, 30.0, 300)
    np.testing.assert_allclose(spherical_bessel("n", l, rho), sp.spherical_yn(l, rho), rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("l", [1, 2, 5, 8])
def test_regular_spherical_bessel_at_the_largest_argument(l):
    rho = np.array([35.0, 38.0, 40.0])
    np.testing.assert_allclose(spherical_bessel("j", l, rho), sp.spherical_jn(l, rho), rtol=1e-11, atol=1e-15)
    np.testing.assert_allclose(
        spherical_bessel_derivative("j", l, rho), sp.spherical_jn(l, rho, derivative=True), rtol=1e-11, atol=1e-15
    )


@pytest.mark.parametrize("l", [3, 12, 30])
def test_regular_spherical_bessel_across_its_order(l):
    rho = np.linspace(0.5 * l, 1.5 * l, 201)
    np.testing.assert_allclose(spherical_bessel("j", l, rho), sp.spherical_jn(l, rho), rtol=1e-10, atol=1e-15)


def test_spherical_bessel_at_origin():
    np.testing.assert_allclose(spherical_bessel("j", 0, [0.0]), [1.0])
    np.testing.assert_allclose(spherical_bessel("j", 3, [0.0, 1.0]), [0.0, sp.spherical_jn(3, 1.0)], rtol=1e-12)
    np.testing.assert_allclose(spherical_bessel_derivative("j", 1, [0.0]), [1.0 / 3.0])
    with pytest.raises(SingularityError):
        spherical_bessel("n", 2, [0.0, 1.0])


def test_spherical_bessel_arguments():
    with pytest.raises(InvalidArgumentError):
        spherical_bessel("y", 0, RHO)
    with pytest.raises(InvalidArgumentError):
        spherical_bessel("j", 51, RHO)
    with pytest.raises(InvalidArgumentError):
        bessel_family("h")


@pytest.mark.parametrize("n,k", [(0, 0.5), (1, 0.5), (3, 2.5), (10, 1.5)])
def test_assoc_laguerre(n, k):
    rho = np.linspace(0.0, 20.0, 101)
    np.testing.assert_allclose(assoc_laguerre(n, k, rho), sp.eval_genlaguerre(n, k, rho), rtol=1e-10, atol=1e-8)
    expected = -sp.eval_genlaguerre(n - 1, k + 1, rho) if n else np.zeros_like(rho)
    np.testing.assert_allclose(assoc_laguerre_derivative(n, k, rho), expected, rtol=1e-10, atol=1e-8)


@pytest.mark.parametrize("n,l", [(0, 0), (2, 1), (1, -1), (3, 4)])
def test_radial_function_solves_its_equation(n, l):
    r = np.linspace(0.3, 5.0, 95)
    h = 1e-4
    u = radial_u(n, l, r)
    scale = np.max(np.abs(u))
    slope = (radial_u(n, l, r + h) - radial_u(n, l, r - h)) / (2 * h)
    curvature = (radial_u(n, l, r + h) - 2 * u + radial_u(n, l, r - h)) / h ** 2
    np.testing.assert_allclose(radial_u_derivative(n, l, r) / scale, slope / scale, atol=1e-6)
    residual = -curvature + (r ** 2 + l * (l + 1) / r ** 2) * u - radial_energy(n, l) * u
    np.testing.assert_allclose(residual / scale, 0.0, atol=1e-5)


def test_radial_energy():
    assert radial_energy(0, 0) == 3.0
    assert radial_energy(1, 2) == 11.0
    np.testing.assert_allclose(radial_u(0, -1, RHO[:20]), np.exp(-0.5 * RHO[:20] ** 2))


def test_family_ranges_and_eigenvalues():
    family = hermite_family()
    assert family.eigenvalue(3) == 3.5
    with pytest.raises(InvalidArgumentError):
        family.evaluate(-1, X)
    assert radial_family_in_l(2).lower == -1
    assert bessel_family("j").eigenvalue(4) == 1.0


def test_family_smooth_carries_second_derivative():
    phi = hermite_family().smooth(2)
    value, first, second = phi.jet(X, 2)
    np.testing.assert_allclose(value, hermite_fn(2, X))
    np.testing.assert_allclose(first, hermite_fn_derivative(2, X))
    np.testing.assert_allclose(second, (X ** 2 - 5.0) * value, atol=1e-12)
