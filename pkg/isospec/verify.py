"""Machine-checkable reports for deformed families.

Every check returns a :class:`VerificationReport`; ``verification_suite``
assembles the set the ``verify`` command emits.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from isospec.catalog import (
    DeformedFamily,
    deformed_eigenfunction,
    ladder_spectrum,
    semi_isospectral_eigenvalue,
    semi_isospectral_operator,
    special_eigenvalue,
    special_state,
    spectrum_gap_check,
)
from isospec.config import settings
from isospec.eigensolver import Spectrum, discretize, eigen_lowest, solve_spectrum
from isospec.errors import InvalidArgumentError, UnsupportedError
from isospec.grid import Grid, make_uniform_grid
from isospec.models import Verdict, VerificationReport
from isospec.operators import CaseTag, FactorizationScheme, FirstOrderOperator, SecondOrderOperator, check_factorization
from isospec.quadrature import integrate
from isospec.riccati import riccati_residual
from isospec.smooth import Smooth

logger = logging.getLogger(__name__)

# radial checks start here so centrifugal terms stay moderate
RADIAL_CHECK_FLOOR = 0.05
EIGEN_RESIDUAL_TOL = 1e-7
SPECTRUM_TOL = 2e-3
NORM_TOL = 1e-6
GRAM_TOL = 1e-8


def residual(op: SecondOrderOperator, psi: Smooth, lam: float, grid: Grid, skip: Optional[int] = None) -> float:
    """‖(op − λ)ψ‖₂ / ‖ψ‖₂ over the grid interior."""
    x = grid.interior(skip)
    values = psi(x)
    norm = float(np.linalg.norm(values))
    if not np.isfinite(norm) or norm == 0.0:
        raise InvalidArgumentError(f"{psi.name} has zero or non-finite norm on the grid interior")
    image = op.act(psi)(x) - lam * values
    return float(np.linalg.norm(image)) / norm


def annihilation_residual(op: FirstOrderOperator, chi: Smooth, grid: Grid, skip: Optional[int] = None) -> float:
    """max |op χ| / max |χ| over the interior."""
    x = grid.interior(skip)
    scale = float(np.max(np.abs(chi(x))))
    if not np.isfinite(scale) or scale == 0.0:
        raise InvalidArgumentError(f"{chi.name} vanishes on the grid interior")
    return float(np.max(np.abs(op.act(chi)(x)))) / scale


def inner_product(f, g, lower: float, upper: float, tol: Optional[float] = None) -> float:
    return integrate(lambda x: f(x) * g(x), lower, upper, tol)


def gram(functions: Sequence, grid: Grid, tol: Optional[float] = None) -> np.ndarray:
    """Pairwise inner products over the grid domain by adaptive quadrature."""
    n = len(functions)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            matrix[i, j] = matrix[j, i] = inner_product(functions[i], functions[j], grid.lower, grid.upper, tol)
    return matrix


def normalized_gram(matrix: np.ndarray) -> np.ndarray:
    scale = np.sqrt(np.diag(matrix))
    return matrix / np.outer(scale, scale)


def _window(family: DeformedFamily, wave_numbers) -> tuple:
    # plane waves vanish at the lower edge; the window ends where every one vanishes again
    x0, upper = family.domain
    k = wave_numbers[0]
    count = int(np.floor((upper - x0) * k / np.pi))
    for n in range(count, 0, -1):
        width = n * np.pi / k
        if all(abs(q * width / np.pi - round(q * width / np.pi)) < 1e-9 for q in wave_numbers):
            return x0, x0 + width
    raise InvalidArgumentError(
        f"no window inside [{x0:g}, {upper:g}] holds whole half periods of k={list(wave_numbers)}"
    )


def _psi_for_seed(family: DeformedFamily, seed_indices: tuple):
    """Map seed indices to (family member, ψ indices)."""
    if family.model == "oscillator1d":
        return family, (int(seed_indices[0]) + 1,)
    if family.model == "isotropic-l":
        n, seed_l = int(seed_indices[0]), int(seed_indices[1])
        member = seed_l - 1 if family.case == "I" else seed_l + 1
        if member != family.member:
            family = family.with_member(member)
        return family, (n, member)
    return family, tuple(seed_indices)


def norm_relation(family: DeformedFamily, index, tol: float = NORM_TOL) -> VerificationReport:
    """(ψ, ψ) = (λ_seed − k1)(φ, φ) for the seed with indices ``index``.

    Plane waves are compared on a window of whole half periods.

    Raises:
        UnsupportedError: for families without adjoint ladder pairing
    """
    index = tuple(index) if isinstance(index, (tuple, list)) else (index,)
    if not family.is_adjoint():
        raise UnsupportedError(f"{family.label} has no adjoint ladder pairing, the norm relation does not apply")
    family, psi_indices = _psi_for_seed(family, index)
    if not family.is_adjoint():
        raise UnsupportedError(f"{family.label} has no adjoint ladder pairing, the norm relation does not apply")
    seed, seed_value, canonical = family.seed(psi_indices)
    psi = deformed_eigenfunction(family, canonical)
    if family.model == "free1d":
        lower, upper = _window(family, canonical)
    else:
        lower, upper = family.domain
    psi_norm = inner_product(psi, psi, lower, upper)
    seed_norm = inner_product(seed, seed, lower, upper)
    ratio = psi_norm / seed_norm
    expected = seed_value - family.k1
    return VerificationReport.judge(
        f"norm:{family.label}:{list(index)}",
        {"psi_norm": psi_norm, "seed_norm": seed_norm, "ratio": ratio, "expected_ratio": expected},
        tol,
        [(ratio - expected) / expected],
        provenance="deformed states keep the seed norm up to the factor lambda_seed - k1",
    )


def continuum_overlap(family: DeformedFamily, k: float, k_other: float, tol: float = GRAM_TOL) -> VerificationReport:
    """(χ_k, χ_k') = k²(φ_k, φ_k') on a window where both plane waves vanish."""
    if family.model != "free1d":
        raise UnsupportedError(f"{family.label} has no plane-wave continuum")
    lower, upper = _window(family, (k, k_other))
    chi, chi_other = deformed_eigenfunction(family, k), deformed_eigenfunction(family, k_other)
    phi, phi_other = family.seed(k)[0], family.seed(k_other)[0]
    lhs = inner_product(chi, chi_other, lower, upper)
    rhs = k * k * inner_product(phi, phi_other, lower, upper)
    return VerificationReport.judge(
        f"continuum-overlap:{family.label}:{k:g},{k_other:g}",
        {"window": [lower, upper], "chi_overlap": lhs, "k2_phi_overlap": rhs},
        tol,
        [lhs - rhs],
        provenance="deformed plane waves are orthogonal with the norms of their seeds scaled by k^2",
    )


def _values(spectrum) -> np.ndarray:
    values = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else spectrum
    return np.sort(np.asarray(values, dtype=float))


def spectrum_compare(a, b, tol: float, case: Optional[CaseTag] = None, check_id: str = "spectrum") -> VerificationReport:
    """Match base spectrum ``a`` against deformed spectrum ``b`` level by level.

    Entries above the smaller of the two maxima are ignored. Case II tolerates
    the lowest entry of ``a`` missing from ``b``; Case I tolerates one extra
    lowest entry in ``b``.
    """
    va, vb = _values(a), _values(b)
    cutoff = min(va[-1], vb[-1]) + tol if va.size and vb.size else -np.inf
    va, vb = va[va <= cutoff], vb[vb <= cutoff]
    i = j = 0
    matched, only_a, only_b = [], [], []
    while i < va.size and j < vb.size:
        if abs(va[i] - vb[j]) <= tol:
            matched.append((va[i], vb[j]))
            i, j = i + 1, j + 1
        elif va[i] < vb[j]:
            only_a.append(float(va[i]))
            i += 1
        else:
            only_b.append(float(vb[j]))
            j += 1
    missing, added = [], []
    case = None if case is None else CaseTag(case)
    if case is CaseTag.II and len(only_a) == 1 and only_a[0] == va[0]:
        missing = only_a
        only_a = []
    if case is CaseTag.I and len(only_b) == 1 and only_b[0] == vb[0]:
        added = only_b
        only_b = []
    deviation = max((abs(x - y) for x, y in matched), default=0.0)
    ok = not only_a and not only_b
    return VerificationReport(
        check_id,
        {
            "matched": len(matched),
            "max_deviation": float(deviation),
            "missing": missing,
            "added": added,
            "unmatched_base": only_a,
            "unmatched_deformed": only_b,
        },
        tol,
        Verdict.PASS if ok else Verdict.FAIL,
        "the deformed operator shares the spectrum of its base up to one removed or added ground state",
    )


def gram_offdiagonal(functions: Sequence, eigenvalues: Sequence, operators: Sequence, grid: Grid,
                     tol: float = GRAM_TOL) -> list:
    """Overlaps of eigenfunctions of different operators and the identity they obey.

    The raw overlaps carry no scale and are published with an ``info``
    verdict; (λ_n − λ_m)(ψ_m, ψ_n) = (ψ_m, (H_n − H_m) ψ_n) is judged.
    """
    if not len(functions) == len(eigenvalues) == len(operators):
        raise InvalidArgumentError("functions, eigenvalues and operators must have equal lengths")
    matrix = gram(functions, grid)
    reports = [
        VerificationReport(
            "gram-offdiagonal:overlaps",
            {"gram": matrix.tolist()},
            tol,
            Verdict.INFO,
            "eigenfunctions of different family members need not be orthogonal",
        )
    ]
    for m in range(len(functions)):
        for n in range(m + 1, len(functions)):
            difference = operators[n].act(functions[n]) - operators[m].act(functions[n])
            lhs = (eigenvalues[n] - eigenvalues[m]) * matrix[m, n]
            rhs = inner_product(functions[m], difference, grid.lower, grid.upper)
            reports.append(VerificationReport.judge(
                f"gram-offdiagonal:{m},{n}",
                {"lhs": lhs, "rhs": rhs},
                tol,
                [lhs - rhs],
                provenance="overlap of members m and n is fixed by the difference of their operators",
            ))
    return reports


def box_caveat(op: SecondOrderOperator, lower: float, upper: float, points: int = 2001,
               factor: float = 10.0) -> VerificationReport:
    """Lowest Dirichlet level of ``op`` on [lower, upper] against the empty box (π/L)².

    The discretization error is the Richardson estimate from halving the
    spacing. The check passes when the level sits more than ``factor`` times
    that error away from (π/L)².
    """
    coarse = make_uniform_grid(lower, upper, points)
    fine = make_uniform_grid(lower, upper, 2 * points - 1)
    e_coarse = float(eigen_lowest(discretize(op, coarse), 1, vectors=False).eigenvalues[0])
    e_fine = float(eigen_lowest(discretize(op, fine), 1, vectors=False).eigenvalues[0])
    error = abs(e_coarse - e_fine) / 3.0
    box_level = (np.pi / (upper - lower)) ** 2
    deviation = abs(e_fine - box_level)
    return VerificationReport(
        f"box:{op.name}",
        {"lowest": e_fine, "box_level": box_level, "deviation": deviation, "discretization_error": error},
        factor * error,
        Verdict.PASS if deviation > factor * error else Verdict.FAIL,
        f"{op.name} between Dirichlet walls does not have the levels of an empty box",
    )


def check_grid(family: DeformedFamily, points: int = 2001) -> Grid:
    lower, upper = family.domain
    if family.radial:
        lower = max(lower, RADIAL_CHECK_FLOOR)
    return make_uniform_grid(lower, upper, points)


def _eigen_report(family, op, psi, value, grid, label, tol):
    measured = residual(op, psi, value, grid)
    return VerificationReport.judge(
        f"eigen:{family.label}:{label}",
        {"eigenvalue": value, "residual": measured},
        tol,
        [measured],
        provenance=f"{psi.name} is an eigenfunction of {op.name}",
    )


def _deformed_scheme(family: DeformedFamily) -> FactorizationScheme:
    return FactorizationScheme(family.deformed_left, family.deformed_right, family.k1, family.scheme.case,
                               k_inverted=family.k2, name=f"{family.scheme.name}^lambda")


def verification_suite(family: DeformedFamily, levels: int = 6, grid: Optional[Grid] = None,
                       tol: float = EIGEN_RESIDUAL_TOL) -> list:
    """All checks that apply to ``family``."""
    grid = grid or check_grid(family)
    reports = []
    scheme = _deformed_scheme(family)

    # Step 1: factorization is preserved by the deformation
    reports.append(check_factorization(family.target_operator, scheme, grid, tol=1e-8))
    reports.append(check_factorization(family.deformed_operator, scheme, grid, tol=1e-8, inverted=True))
    riccati = riccati_residual(family.deformation, family.scheme, grid)
    reports.append(VerificationReport.judge(
        f"riccati:{family.label}", {"residual": riccati}, 1e-8, [riccati],
        provenance="the deformation solves the Riccati equation of the scheme",
    ))

    # Step 2: eigen-relations of the deformed states
    indices_list = family.sample_indices(levels)
    for indices in indices_list:
        psi = deformed_eigenfunction(family, indices)
        reports.append(_eigen_report(family, family.deformed_operator, psi, family.eigenvalue(indices), grid,
                                     list(indices), tol))
        reports.append(spectrum_gap_check(family, indices))

    # Step 3: the special state
    try:
        chi = special_state(family)
    except UnsupportedError:
        chi = None
    if chi is not None:
        measured = annihilation_residual(family.deformed_left, chi, grid)
        reports.append(VerificationReport.judge(
            f"annihilation:{family.label}", {"residual": measured}, 1e-10, [measured],
            provenance="the special state is annihilated by the deformed left factor",
        ))
        reports.append(_eigen_report(family, family.deformed_operator, chi, special_eigenvalue(family), grid,
                                     "special", tol))

    # Step 4: norm relation
    if family.is_adjoint():
        for indices in indices_list[:3]:
            seed_indices = _seed_indices(family, indices)
            reports.append(norm_relation(family, seed_indices))

    # Step 5: spectra and orthogonality for discrete ladders
    try:
        ladder = ladder_spectrum(family, levels)
    except UnsupportedError:
        ladder = None
    if ladder is not None and family.model != "isotropic-n":
        reports.extend(_spectral_reports(family, levels, ladder, chi))

    # Step 6: a box around a continuum model
    if family.model == "free1d":
        lower, upper = family.domain
        reports.append(box_caveat(family.deformed_operator, lower, upper))

    # Step 7: the semi-isospectral partner
    if family.semi_isospectral:
        psi = deformed_eigenfunction(family)
        reports.append(_eigen_report(family, semi_isospectral_operator(family), psi,
                                     semi_isospectral_eigenvalue(family), grid, "semi-isospectral", tol))

    failed = sum(1 for report in reports if not report.passed)
    logger.info(f"verification of {family.label}: {len(reports)} checks, {failed} failed")
    return reports


def _seed_indices(family: DeformedFamily, psi_indices: tuple) -> tuple:
    if family.model == "oscillator1d":
        return (psi_indices[0] - 1,)
    if family.model == "isotropic-l":
        n, l = psi_indices
        return (n, l + 1) if family.case == "I" else (n, l - 1)
    return tuple(psi_indices)


def _spectral_reports(family: DeformedFamily, levels: int, ladder: list, chi) -> list:
    lower, upper = family.domain
    grid = make_uniform_grid(lower, upper, 4001)
    count = levels + 1
    base = solve_spectrum(family.base_operator, grid, count)
    deformed = solve_spectrum(family.deformed_operator, grid, count)
    # a Case II special state restores the ground state the ladder misses
    solver_case = None if chi is not None and family.scheme.case is CaseTag.II else family.scheme.case
    reports = [
        spectrum_compare(base, deformed, SPECTRUM_TOL, solver_case, check_id=f"spectrum:{family.label}:solver"),
        spectrum_compare(base, ladder, SPECTRUM_TOL, family.scheme.case, check_id=f"spectrum:{family.label}:ladder"),
    ]
    states = [deformed_eigenfunction(family, indices) for indices in family.ladder_indices(min(levels, 5))]
    if chi is not None:
        states.insert(0, chi)
    overlaps = normalized_gram(gram(states, grid))
    off = float(np.max(np.abs(overlaps - np.eye(len(states)))))
    reports.append(VerificationReport.judge(
        f"gram:{family.label}", {"max_offdiagonal": off}, GRAM_TOL, [off],
        provenance="eigenfunctions of one deformed operator are mutually orthogonal",
    ))
    return reports
