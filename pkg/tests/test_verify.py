import numpy as np
import pytest

from isospec.catalog import OscillatorModel, build_family, deformed_eigenfunction, ladder_spectrum, special_state
from isospec.eigensolver import solve_spectrum
from isospec.errors import InvalidArgumentError, UnsupportedError
from isospec.grid import make_uniform_grid
from isospec.models import Verdict
from isospec.operators import CaseTag, SecondOrderOperator, annihilation_state
from isospec.smooth import Smooth
from isospec.special import hermite_family, oscillator_operator
from isospec.verify import (
    annihilation_residual,
    box_caveat,
    check_grid,
    continuum_overlap,
    gram,
    gram_offdiagonal,
    norm_relation,
    normalized_gram,
    residual,
    spectrum_compare,
    verification_suite,
)

GRID = make_uniform_grid(-8.0, 8.0, 801)


def test_residual_of_exact_and_detuned_states():
    phi = hermite_family().smooth(0)
    assert residual(oscillator_operator(), phi, 0.5, GRID) < 1e-12
    np.testing.assert_allclose(residual(oscillator_operator(), phi, 1.5, GRID), 1.0, rtol=1e-12)


def test_residual_rejects_zero_function():
    with pytest.raises(InvalidArgumentError):
        residual(oscillator_operator(), Smooth.constant(0.0), 0.5, GRID)


def test_annihilation_residual():
    b = OscillatorModel().scheme("unique", None).left
    assert annihilation_residual(b, annihilation_state(b), GRID) < 1e-14
    assert annihilation_residual(b, Smooth.constant(1.0), GRID) > 1.0


def test_gram_of_sines():
    grid = make_uniform_grid(0.0, 2 * np.pi, 11)
    matrix = gram([np.sin, np.cos], grid)
    np.testing.assert_allclose(matrix, np.pi * np.eye(2), atol=1e-12)
    np.testing.assert_allclose(normalized_gram(matrix), np.eye(2), atol=1e-12)


class TestSpectrumCompare:
    def test_identical(self):
        report = spectrum_compare([0.5, 1.5, 2.5], [0.5, 1.5, 2.5 + 1e-4], 2e-3)
        assert report.verdict is Verdict.PASS
        assert report.measured["matched"] == 3
        np.testing.assert_allclose(report.measured["max_deviation"], 1e-4)

    def test_missing_ground_state(self):
        base, deformed = [0.5, 1.5, 2.5, 3.5], [1.5, 2.5, 3.5]
        report = spectrum_compare(base, deformed, 2e-3, CaseTag.II)
        assert report.passed
        assert report.measured["missing"] == [0.5]
        strict = spectrum_compare(base, deformed, 2e-3)
        assert strict.verdict is Verdict.FAIL
        assert strict.measured["unmatched_base"] == [0.5]

    def test_added_ground_state(self):
        report = spectrum_compare([3.0, 7.0, 11.0], [-3.0, 3.0, 7.0, 11.0], 2e-3, "I")
        assert report.passed
        assert report.measured["added"] == [-3.0]

    def test_levels_above_the_shorter_spectrum_are_ignored(self):
        report = spectrum_compare([1.0, 2.0, 3.0, 4.0, 5.0], [1.0, 2.0, 3.0], 2e-3)
        assert report.passed
        assert report.measured["matched"] == 3

    def test_shifted_level_fails(self):
        report = spectrum_compare([1.0, 2.0, 3.0], [1.0, 2.5, 3.0], 2e-3, CaseTag.II)
        assert report.verdict is Verdict.FAIL
        assert report.measured["unmatched_base"] == [2.0]
        assert report.measured["unmatched_deformed"] == [2.5]


def test_gram_offdiagonal_identity():
    # ground states of the oscillator and of its copy centred at x = -1
    c = np.pi ** -0.25
    shifted = Smooth.from_derivatives(
        lambda x: c * np.exp(-0.5 * (x + 1) ** 2),
        lambda x: -c * (x + 1) * np.exp(-0.5 * (x + 1) ** 2),
        lambda x: c * ((x + 1) ** 2 - 1) * np.exp(-0.5 * (x + 1) ** 2),
    )
    x = Smooth.identity()
    moved = SecondOrderOperator.schrodinger(0.5 * x * x + x, kinetic=0.5)
    grid = make_uniform_grid(-10.0, 10.0, 11)
    reports = gram_offdiagonal([hermite_family().smooth(0), shifted], [0.5, 0.0], [oscillator_operator(), moved], grid)
    assert reports[0].verdict is Verdict.INFO
    np.testing.assert_allclose(reports[0].measured["gram"][0][1], np.exp(-0.25), rtol=1e-10)
    assert reports[1].passed
    np.testing.assert_allclose(reports[1].measured["lhs"], -0.5 * np.exp(-0.25), rtol=1e-10)
    with pytest.raises(InvalidArgumentError):
        gram_offdiagonal([shifted], [0.0, 1.0], [moved], grid)


@pytest.mark.parametrize(
    "model,case,lam,index,ratio",
    [
        ("isotropic-l", "I", -1.0, (0, 1), 6.0),
        ("isotropic-l", "I", -1.0, (1, 2), 14.0),
        ("oscillator1d", None, 1.0, (1,), 2.0),
        ("free1d", "unique", 3.0, (0.5,), 0.25),
    ],
)
def test_norm_relation(model, case, lam, index, ratio):
    family = build_family(model, case, lam)
    report = norm_relation(family, index)
    assert report.passed
    np.testing.assert_allclose(report.measured["expected_ratio"], ratio)
    np.testing.assert_allclose(report.measured["ratio"], ratio, rtol=1e-6)


def test_norm_relation_needs_adjoint_ladders():
    with pytest.raises(UnsupportedError):
        norm_relation(build_family("isotropic-l", "II", -1.0, member=0), (0, -1))
    with pytest.raises(UnsupportedError):
        norm_relation(build_family("free3d", "I", -1.0), (1,))


@pytest.mark.parametrize("k,k_other", [(1.0, 2.0), (1.5, 1.5)])
def test_continuum_overlap(k, k_other):
    family = build_family("free1d", "unique", 3.0)
    report = continuum_overlap(family, k, k_other)
    assert report.passed
    assert report.measured["window"][0] == -2.0


def test_continuum_overlap_needs_plane_waves():
    with pytest.raises(UnsupportedError):
        continuum_overlap(build_family("oscillator1d", lam=1.0), 1.0, 2.0)


def test_check_grid_keeps_radial_models_off_the_origin():
    assert check_grid(build_family("isotropic-l", "I", -1.0)).lower == 0.05
    assert check_grid(build_family("oscillator1d", lam=1.0)).lower == -10.0


@pytest.mark.parametrize(
    "model,case,lam,levels",
    [("oscillator1d", None, -2.0, 3), ("free1d", "unique", 3.0, 3), ("isotropic-l", "I", -1.0, 2)],
)
def test_verification_suite_passes(model, case, lam, levels):
    reports = verification_suite(build_family(model, case, lam), levels)
    failed = [report.check_id for report in reports if not report.passed]
    assert not failed
    ids = [report.check_id for report in reports]
    assert any(i.startswith("factorization:") for i in ids)
    assert any(i.startswith("annihilation:") for i in ids)
    assert any(i.startswith("norm:") for i in ids)


def test_suite_reports_the_solver_spectrum():
    reports = verification_suite(build_family("isotropic-l", "I", -1.0), 2)
    solver = next(report for report in reports if report.check_id.endswith(":solver"))
    np.testing.assert_allclose(solver.measured["added"], [-3.0], atol=2e-3)


def test_semi_isospectral_check_is_included():
    reports = verification_suite(build_family("isotropic-n", lam=-1.0), 2)
    semi = [report for report in reports if report.check_id.endswith(":semi-isospectral")]
    assert len(semi) == 1
    assert semi[0].passed


def test_case_two_ladder_misses_exactly_the_ground_state():
    family = build_family("oscillator1d", lam=2.0)
    assert family.scheme.case is CaseTag.II
    grid = make_uniform_grid(-10.0, 10.0, 2001)
    base = solve_spectrum(family.base_operator, grid, 6)
    report = spectrum_compare(base, ladder_spectrum(family, 5), 1e-3, family.scheme.case)
    assert report.passed
    np.testing.assert_allclose(report.measured["missing"], [0.5], atol=1e-3)
    assert report.measured["matched"] == 5
    assert report.measured["added"] == []
    # the special state brings the ground state back into the operator's spectrum
    deformed = solve_spectrum(family.deformed_operator, grid, 6)
    restored = spectrum_compare(base, deformed, 1e-3)
    assert restored.passed
    assert restored.measured["matched"] == 6


def test_oscillator_special_state_is_orthogonal_to_the_ladder():
    family = build_family("oscillator1d", lam=2.0)
    chi = special_state(family)
    grid = make_uniform_grid(-10.0, 10.0, 2001)
    assert annihilation_residual(family.deformed_left, chi, grid) < 1e-10
    states = [chi] + [deformed_eigenfunction(family, n) for n in range(1, 6)]
    overlaps = normalized_gram(gram(states, grid))
    np.testing.assert_allclose(overlaps, np.eye(6), atol=1e-8)


def test_box_levels_move_under_a_deformed_potential():
    family = build_family("free1d", "unique", 3.0)
    report = box_caveat(family.deformed_operator, -2.0, 10.0)
    assert report.verdict is Verdict.PASS
    assert report.measured["deviation"] > 10.0 * report.measured["discretization_error"]
    assert report.measured["lowest"] > report.measured["box_level"]


def test_empty_box_keeps_its_levels():
    report = box_caveat(SecondOrderOperator.schrodinger(0.0, name="H_box"), -2.0, 10.0)
    assert report.verdict is Verdict.FAIL
    np.testing.assert_allclose(report.measured["lowest"], (np.pi / 12.0) ** 2, rtol=1e-6)


def test_suite_includes_the_box_check_for_the_free_particle():
    reports = verification_suite(build_family("free1d", "unique", 3.0), 2)
    box = [report for report in reports if report.check_id.startswith("box:")]
    assert len(box) == 1
    assert box[0].passed
