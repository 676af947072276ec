import numpy as np
import pytest

from isospec.catalog import FreeSphericalModel, OscillatorModel
from isospec.errors import InvalidArgumentError, SingularityError
from isospec.grid import make_uniform_grid
from isospec.models import Verdict
from isospec.operators import (
    FactorizationScheme,
    FirstOrderOperator,
    SecondOrderOperator,
    annihilation_state,
    apply,
    check_factorization,
    compose,
    ladder_step_check,
)
from isospec.smooth import Smooth
from isospec.special import bessel_family, hermite_family, oscillator_operator

X = np.linspace(-3.0, 3.0, 61)


def test_compose_coefficients():
    x = Smooth.identity()
    left = FirstOrderOperator.raising(x, 1.0, name="x+D")
    right = FirstOrderOperator.lowering(x, 1.0, name="x-D")
    product = compose(left, right)
    np.testing.assert_allclose(product.P(X), -1.0)
    np.testing.assert_allclose(product.Q(X), 0.0, atol=1e-15)
    np.testing.assert_allclose(product.R(X), X ** 2 + 1.0)
    assert product.name == "x+D·x-D"


def test_act_matches_coefficients():
    x = Smooth.identity()
    op = SecondOrderOperator(Smooth.constant(-1.0), 2.0 * x, x * x)
    gauss = (-(x * x)).exp()
    g = np.exp(-X ** 2)
    expected = -(4 * X ** 2 - 2) * g + 2 * X * (-2 * X * g) + X ** 2 * g
    np.testing.assert_allclose(op.act(gauss)(X), expected, atol=1e-13)


def test_oscillator_factorization():
    grid = make_uniform_grid(-5.0, 5.0, 201)
    scheme = OscillatorModel().scheme("unique", None)
    direct = check_factorization(oscillator_operator(), scheme, grid)
    inverted = check_factorization(oscillator_operator(), scheme, grid, inverted=True)
    assert direct.verdict is Verdict.PASS
    assert inverted.verdict is Verdict.PASS
    assert direct.check_id == "factorization:oscillator:direct"
    assert direct.measured["coefficient_deviation"] < 1e-14


def test_wrong_constant_fails():
    grid = make_uniform_grid(-5.0, 5.0, 201)
    good = OscillatorModel().scheme("unique", None)
    bad = FactorizationScheme(good.left, good.right, 0.5, good.case, k_inverted=0.5, name="bad")
    report = check_factorization(oscillator_operator(), bad, grid)
    assert report.verdict is Verdict.FAIL
    np.testing.assert_allclose(report.measured["coefficient_deviation"], 1.0)


def test_missing_inverted_constant():
    scheme = OscillatorModel().scheme("unique", None)
    with pytest.raises(InvalidArgumentError):
        FactorizationScheme(scheme.left, scheme.right, -0.5).inverted()


# n_l blows up at the origin, so its grid starts further out
BESSEL_GRIDS = {"j": (0.5, 20.0), "n": (4.0, 20.0)}


@pytest.mark.parametrize("kind", ["j", "n"])
@pytest.mark.parametrize("l", range(9))
def test_spherical_bessel_raising(kind, l):
    grid = make_uniform_grid(*BESSEL_GRIDS[kind], 801)
    report = ladder_step_check(FreeSphericalModel.raising(l), bessel_family(kind), l, grid, tol=1e-10)
    assert report.passed
    np.testing.assert_allclose(report.measured["c"], 1.0, rtol=1e-10)


@pytest.mark.parametrize("kind", ["j", "n"])
@pytest.mark.parametrize("l", range(1, 9))
def test_spherical_bessel_lowering(kind, l):
    grid = make_uniform_grid(*BESSEL_GRIDS[kind], 801)
    report = ladder_step_check(FreeSphericalModel.lowering(l), bessel_family(kind), l, grid, tol=1e-10,
                               direction=-1)
    assert report.passed
    np.testing.assert_allclose(report.measured["c"], 1.0, rtol=1e-10)


@pytest.mark.parametrize("case", ["I", "II"])
@pytest.mark.parametrize("l", range(1, 9))
def test_free_spherical_factorizations(case, l):
    grid = make_uniform_grid(0.5, 20.0, 401)
    model = FreeSphericalModel()
    scheme = model.scheme(case, l)
    direct = check_factorization(model.target(case, l), scheme, grid, tol=1e-10)
    inverted = check_factorization(model.base(case, l), scheme, grid, tol=1e-10, inverted=True)
    for report in (direct, inverted):
        assert report.passed
        assert report.measured["coefficient_deviation"] < 1e-12


def test_lowering_annihilates_ground_state():
    grid = make_uniform_grid(-6.0, 6.0, 241)
    b = OscillatorModel().scheme("unique", None).left
    report = ladder_step_check(b, hermite_family(), 0, grid, direction=-1)
    assert report.passed
    assert report.measured["c"] == 0.0
    assert report.check_id.endswith("0->-1")


def test_ladder_index_out_of_range():
    grid = make_uniform_grid(-1.0, 1.0, 21)
    b = OscillatorModel().scheme("unique", None).left
    with pytest.raises(InvalidArgumentError):
        ladder_step_check(b, hermite_family(), 61, grid)


def test_annihilation_state_is_gaussian():
    b = OscillatorModel().scheme("unique", None).left
    chi = annihilation_state(b)
    np.testing.assert_allclose(chi(X), np.exp(-0.5 * X ** 2), rtol=1e-9)
    np.testing.assert_allclose(b.act(chi)(X), 0.0, atol=1e-12)


def test_apply_reports_singular_points():
    grid = make_uniform_grid(-1.0, 1.0, 21)
    op = FirstOrderOperator.raising(Smooth.power(-1.0), 1.0, name="1/x+D")
    with pytest.raises(SingularityError) as info:
        apply(op, Smooth.constant(1.0), grid)
    np.testing.assert_allclose(info.value.points, [0.0], atol=1e-15)


def test_vanishing_derivative_part():
    grid = make_uniform_grid(-1.0, 1.0, 21)
    op = FirstOrderOperator(Smooth.identity(), Smooth.constant(0.0), name="x")
    with pytest.raises(InvalidArgumentError):
        apply(op, Smooth.constant(1.0), grid)
