"""Riccati deformation of a factorization.

A scheme ``H = L·R + k`` with L = mL + dL D and R = mR + dR D keeps the same
product when R's multiplicative part gains q and L's gains p = −dL q / dR,
provided q solves

    dL q' − (dL/dR)(mR q + q²) + mL q = 0,

whose general solution is q = e^G / (λ − ∫ e^G / dR) with
G = ∫ (mR/dR − mL/dL). The inverted product then becomes
``R·L + k_inverted + (dR p' − dL q')``.

Case I naming calls q the ν-function and p the η-function; Case II swaps the
names. Case I reports the bracket as a shift to subtract, Case II as a shift to
add, so both describe the same operator.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from isospec.config import settings
from isospec.errors import ValidityError
from isospec.grid import Grid
from isospec.operators import CaseTag, FactorizationScheme, FirstOrderOperator, SecondOrderOperator
from isospec.quadrature import antiderivative
from isospec.smooth import Smooth

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Root:
    lower: float
    upper: float
    location: float


@dataclass(frozen=True)
class DeformationParameter:
    lam: float
    roots: tuple = ()
    case: CaseTag = CaseTag.I

    @property
    def valid(self) -> bool:
        return not self.roots

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "singular"


@dataclass(frozen=True)
class DeformationResult:
    case: CaseTag
    lam: float
    nu: Smooth
    eta: Smooth
    shift: Smooth
    weight: Smooth
    denominator: Smooth
    parameter: DeformationParameter = field(default=None)

    @property
    def unknown(self) -> Smooth:
        """The Riccati unknown q (the function added to the right factor)."""
        return self.eta if self.case is CaseTag.II else self.nu

    @property
    def partner(self) -> Smooth:
        """p, the function added to the left factor."""
        return self.nu if self.case is CaseTag.II else self.eta

    @property
    def potential_change(self) -> Smooth:
        """What the inverted product adds to R: dR p' − dL q'."""
        return self.shift if self.case is CaseTag.II else -self.shift

    @property
    def exponent(self) -> Smooth:
        """Integrating-factor exponent: −G in Case I naming, G in Case II naming."""
        log_weight = self.weight.log()
        return log_weight if self.case is CaseTag.II else -log_weight


def riccati_coefficients(scheme: FactorizationScheme):
    """``(h, w)`` with h = mR/dR − mL/dL and w = 1/dR, so q' = w q² + h q."""
    left, right = scheme.left, scheme.right
    w = right.derivative.reciprocal()
    h = right.multiplicative * w - left.multiplicative * left.derivative.reciprocal()
    return h, w


def singularity_scan(denominator, domain, resolution: Optional[int] = None,
                     tol: Optional[float] = None) -> list:
    """Zeros of ``denominator`` on ``domain`` bracketed by sign changes and bisected.

    Non-finite samples carry no sign information and are skipped.
    """
    resolution = settings.scan_resolution if resolution is None else resolution
    tol = settings.bisection_tol if tol is None else tol
    a, b = float(domain[0]), float(domain[1])
    x = np.linspace(a, b, resolution + 1)
    with np.errstate(all="ignore"):
        f = np.asarray(denominator(x), dtype=float)
    finite = np.isfinite(f)
    roots = [Root(xi, xi, xi) for xi in x[finite & (f == 0.0)]]
    s = np.sign(f)
    change = finite[:-1] & finite[1:] & (s[:-1] * s[1:] < 0)
    lo, hi = x[:-1][change], x[1:][change]
    if lo.size:
        f_lo = f[:-1][change]
        for _ in range(200):
            if np.max(hi - lo) <= tol:
                break
            mid = 0.5 * (lo + hi)
            with np.errstate(all="ignore"):
                f_mid = np.asarray(denominator(mid), dtype=float)
            same = np.sign(f_mid) == np.sign(f_lo)
            lo = np.where(same, mid, lo)
            f_lo = np.where(same, f_mid, f_lo)
            hi = np.where(same, hi, mid)
        roots.extend(Root(float(l), float(h), float(0.5 * (l + h))) for l, h in zip(lo, hi))
    roots.sort(key=lambda root: root.location)
    logger.debug(f"singularity scan on [{a:g}, {b:g}]: {len(roots)} root(s)")
    return roots


def check_validity(denominator: Smooth, domain, lam: float, case: CaseTag = CaseTag.I,
                   resolution: Optional[int] = None) -> DeformationParameter:
    a, b = float(domain[0]), float(domain[1])
    inside = tuple(r for r in singularity_scan(denominator, (a, b), resolution) if a < r.location < b)
    return DeformationParameter(float(lam), inside, case)


def raise_if_singular(parameter: DeformationParameter, label: str = "deformation"):
    if not parameter.valid:
        where = ", ".join(f"x={root.location:.12g}" for root in parameter.roots)
        raise ValidityError(
            f"{label} with lambda={parameter.lam:g} has a vanishing denominator inside the domain at {where}",
            roots=parameter.roots,
        )


def deform(scheme: FactorizationScheme, lam: float, weight: Smooth, denominator: Smooth,
           case: Optional[CaseTag] = None, domain=None, resolution: Optional[int] = None) -> DeformationResult:
    """Assemble the deformation q = weight / denominator for ``scheme``.

    When ``domain`` is given the denominator is scanned for zeros and a
    ValidityError lists any found strictly inside.
    """
    case = scheme.case if case is None else CaseTag(case)
    parameter = None
    if domain is not None:
        parameter = check_validity(denominator, domain, lam, case, resolution)
        raise_if_singular(parameter, scheme.name or "deformation")
    dL, dR = scheme.left.derivative, scheme.right.derivative
    q = weight * denominator.reciprocal()
    p = -(dL * dR.reciprocal()) * q
    change = dR * p.derivative() - dL * q.derivative()
    if case is CaseTag.II:
        nu, eta, shift = p, q, change
    else:
        nu, eta, shift = q, p, -change
    return DeformationResult(case, float(lam), nu, eta, shift, weight, denominator, parameter)


def _default_origin(grid: Grid, origin: Optional[float]) -> float:
    if origin is not None:
        return float(origin)
    if grid.lower < 0.0 < grid.upper:
        return 0.0
    return max(grid.lower, settings.radial_origin)


def _quadrature_deformation(scheme, lam, grid, origin, case, tol):
    h, w = riccati_coefficients(scheme)
    origin = _default_origin(grid, origin)
    exponent = antiderivative(h, origin, tol=tol, name="G")
    weight = exponent.exp()
    denominator = lam - antiderivative(weight * w, origin, tol=tol, name="J")
    logger.info(f"quadrature deformation of {scheme.name or 'scheme'}: lambda={lam:g}, origin={origin:g}")
    return deform(scheme, lam, weight, denominator, case, domain=(grid.lower, grid.upper))


def nu_general(scheme: FactorizationScheme, lam: float, grid: Grid, origin: Optional[float] = None,
               tol: Optional[float] = None) -> DeformationResult:
    """General Riccati solution by quadrature, in Case I naming (ν on the right factor).

    The integration origin is 0 when the grid straddles it and a small offset
    from the left edge otherwise; moving the origin rescales λ.
    """
    return _quadrature_deformation(scheme, lam, grid, origin, CaseTag.I, tol)


def eta_case2(scheme: FactorizationScheme, lam: float, grid: Grid, origin: Optional[float] = None,
              tol: Optional[float] = None) -> DeformationResult:
    """As :func:`nu_general` in Case II naming: η is solved first and ν follows from it."""
    return _quadrature_deformation(scheme, lam, grid, origin, CaseTag.II, tol)


def riccati_residual(result: DeformationResult, scheme: FactorizationScheme, grid: Grid,
                     skip: Optional[int] = None) -> float:
    """Max-norm of dL q' − (dL/dR)(mR q + q²) + mL q over the grid interior."""
    x = grid.interior(skip)
    q, dq = result.unknown.jet(x, 1)
    mL, dL = scheme.left.multiplicative(x), scheme.left.derivative(x)
    mR, dR = scheme.right.multiplicative(x), scheme.right.derivative(x)
    residual = dL * dq - (dL / dR) * (mR * q + q * q) + mL * q
    return float(np.max(np.abs(residual)))


def deformed_operator(base: SecondOrderOperator, result: DeformationResult) -> SecondOrderOperator:
    """``base`` with R replaced by R − shift (Case I) or R + shift (Case II)."""
    return base.with_potential(result.potential_change, name=f"{base.name}^lambda")


def deformed_factors(scheme: FactorizationScheme, result: DeformationResult):
    """(left + p, right + q): the factors of the deformed scheme."""
    left = scheme.left.shifted(result.partner, name=f"{scheme.left.name}^lambda")
    right = scheme.right.shifted(result.unknown, name=f"{scheme.right.name}^lambda")
    return left, right
