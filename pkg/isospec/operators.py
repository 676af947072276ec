"""First- and second-order differential operators and their factorizations.

A first-order operator is ``m(x) + d(x) D`` and a second-order one is
``P(x) D^2 + Q(x) D + R(x)``. Raising-type operators are written α + βD and
lowering-type ones γ − δD; both are stored in the ``m + dD`` form.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

import numpy as np

from isospec.config import settings
from isospec.errors import InvalidArgumentError, SingularityError
from isospec.grid import Grid, SampledFunction
from isospec.models import VerificationReport
from isospec.quadrature import antiderivative
from isospec.smooth import Smooth

logger = logging.getLogger(__name__)


class CaseTag(str, Enum):
    """Which factorization is being deformed.

    Case I deforms a raising·lowering product, Case II a lowering·raising one,
    and GENERIC is the index-free B·C form.
    """

    I = "I"
    II = "II"
    GENERIC = "generic"


@dataclass(frozen=True)
class FirstOrderOperator:
    multiplicative: Smooth
    derivative: Smooth
    index: Optional[int] = None
    step: Optional[float] = None
    name: str = "A"

    @classmethod
    def raising(cls, alpha, beta, **kwargs) -> "FirstOrderOperator":
        """α + β D."""
        return cls(Smooth.coerce(alpha), Smooth.coerce(beta), **kwargs)

    @classmethod
    def lowering(cls, gamma, delta, **kwargs) -> "FirstOrderOperator":
        """γ − δ D."""
        return cls(Smooth.coerce(gamma), -Smooth.coerce(delta), **kwargs)

    def act(self, f: Smooth) -> Smooth:
        return self.multiplicative * f + self.derivative * f.derivative()

    def shifted(self, q: Smooth, name: Optional[str] = None) -> "FirstOrderOperator":
        """Same derivative part, multiplicative part plus ``q``."""
        return replace(self, multiplicative=self.multiplicative + q, name=name or f"{self.name}+q")

    def check_derivative_part(self, points: np.ndarray):
        if not np.any(self.derivative(points)):
            raise InvalidArgumentError(f"{self.name} has a derivative coefficient that vanishes on the whole grid")


@dataclass(frozen=True)
class SecondOrderOperator:
    P: Smooth
    Q: Smooth
    R: Smooth
    index: Optional[int] = None
    name: str = "H"

    @classmethod
    def schrodinger(cls, potential, kinetic: float = 1.0, first=0.0, **kwargs) -> "SecondOrderOperator":
        """``-kinetic D^2 + first D + potential``."""
        return cls(Smooth.constant(-kinetic), Smooth.coerce(first), Smooth.coerce(potential), **kwargs)

    def act(self, f: Smooth) -> Smooth:
        return self.P * f.derivative(2) + self.Q * f.derivative() + self.R * f

    def shifted(self, k: float) -> "SecondOrderOperator":
        return replace(self, R=self.R + k)

    def with_potential(self, delta: Smooth, name: Optional[str] = None) -> "SecondOrderOperator":
        """Same operator with ``delta`` added to R."""
        return replace(self, R=self.R + delta, name=name or self.name)

    def eigenfunction(self, value, first, eigenvalue: float, name: str = "phi") -> Smooth:
        """Smooth eigenfunction from its value and slope; higher derivatives follow this equation."""
        return Smooth.from_ode(value, first, self.P, self.Q, self.R, eigenvalue, name)


Operator = Union[FirstOrderOperator, SecondOrderOperator]


@dataclass(frozen=True)
class FactorizationScheme:
    """``target = left·right + k`` and, inverted, ``right·left + k_inverted``."""

    left: FirstOrderOperator
    right: FirstOrderOperator
    k: float
    case: CaseTag = CaseTag.GENERIC
    k_inverted: Optional[float] = None
    name: str = ""

    def product(self) -> SecondOrderOperator:
        return compose(self.left, self.right).shifted(self.k)

    def inverted(self) -> SecondOrderOperator:
        if self.k_inverted is None:
            raise InvalidArgumentError(f"scheme {self.name or '?'} has no inverted-product constant")
        return compose(self.right, self.left).shifted(self.k_inverted)


def compose(left: FirstOrderOperator, right: FirstOrderOperator) -> SecondOrderOperator:
    """Coefficients of the product ``left·right``.

    With left = mL + dL D and right = mR + dR D:
    P = dL dR, Q = mL dR + dL mR + dL dR', R = mL mR + dL mR'.
    """
    mL, dL = left.multiplicative, left.derivative
    mR, dR = right.multiplicative, right.derivative
    P = dL * dR
    Q = mL * dR + dL * mR + dL * dR.derivative()
    R = mL * mR + dL * mR.derivative()
    return SecondOrderOperator(P, Q, R, name=f"{left.name}·{right.name}")


def apply(op: Operator, f: Smooth, grid: Grid) -> SampledFunction:
    """Sample ``op f`` (and its slope, when available) on the grid."""
    points = grid.points
    if isinstance(op, FirstOrderOperator):
        op.check_derivative_part(points)
    image = op.act(f)
    n = 1 if image.order >= 1 else 0
    jet = image.jet(points, n)
    bad = ~np.isfinite(jet[0])
    if np.any(bad):
        raise SingularityError(
            f"{op.name} applied to {f.name} is singular at x={points[bad][0]:.17g}"
            + (f" and {np.count_nonzero(bad) - 1} other point(s)" if np.count_nonzero(bad) > 1 else ""),
            points=points[bad],
        )
    return SampledFunction(grid, jet[0], jet[1] if n else None)


def _sample_functions():
    sine = Smooth.from_derivatives(np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), name="sin")
    wave = Smooth.from_derivatives(
        lambda x: np.cos(0.7 * x),
        lambda x: -0.7 * np.sin(0.7 * x),
        lambda x: -0.49 * np.cos(0.7 * x),
        lambda x: 0.343 * np.sin(0.7 * x),
        name="cos(0.7x)",
    )
    bump = (Smooth.identity() ** 2 * (-0.125)).exp()
    return sine, wave, bump


def _max_abs(values) -> float:
    return float(np.max(np.abs(values))) if np.size(values) else 0.0


def check_factorization(target: SecondOrderOperator, scheme: FactorizationScheme, grid: Grid,
                        tol: float = 1e-9, inverted: bool = False) -> VerificationReport:
    """Compare ``left·right + k`` (or the inverted product) with ``target``.

    Deviations are measured on the coefficients and on a few sample functions.
    """
    composed = scheme.inverted() if inverted else scheme.product()
    x = grid.points
    coefficient_deviation = max(
        _max_abs(getattr(composed, c)(x) - getattr(target, c)(x)) for c in ("P", "Q", "R")
    )
    action_deviation = max(
        _max_abs(composed.act(p)(x) - target.act(p)(x)) for p in _sample_functions()
    )
    ordering = "right·left + k_inverted" if inverted else "left·right + k"
    logger.debug(f"factorization {scheme.name}: coefficients {coefficient_deviation:.3g}, sample functions {action_deviation:.3g}")
    return VerificationReport.judge(
        f"factorization:{scheme.name or target.name}:{'inverted' if inverted else 'direct'}",
        {"coefficient_deviation": coefficient_deviation, "action_deviation": action_deviation},
        tol,
        [coefficient_deviation, action_deviation],
        provenance=f"{ordering} reproduces {target.name}",
    )


def ladder_step_check(op: FirstOrderOperator, family, n: int, grid: Grid, tol: float = 1e-8,
                      direction: int = 1, skip: Optional[int] = None) -> VerificationReport:
    """Fit ``op φ_n ≈ c φ_{n+direction}`` by least squares over the interior.

    A target below the family's lowest index means the step must annihilate
    φ_n, so the fitted constant is 0 and the residual is ``max |op φ_n|``.
    """
    if not family.lower <= n <= family.upper:
        raise InvalidArgumentError(f"index {n} outside {family.family_id} range [{family.lower}, {family.upper}]")
    target = n + direction
    if target > family.upper:
        raise InvalidArgumentError(f"target index {target} outside {family.family_id} range")
    skip = settings.boundary_skip if skip is None else skip
    image = apply(op, family.smooth(n), grid).values[skip:grid.count - skip]
    interior = grid.interior(skip)
    if target < family.lower:
        c = 0.0
        residual = _max_abs(image)
    else:
        reference = family.evaluate(target, interior)
        c = float(np.dot(image, reference) / np.dot(reference, reference))
        residual = _max_abs(image - c * reference)
    return VerificationReport.judge(
        f"ladder:{op.name}:{family.family_id}:{n}->{target}",
        {"c": c, "residual": residual},
        tol,
        [residual],
        provenance=f"{op.name} maps {family.family_id}[{n}] onto a multiple of {family.family_id}[{target}]",
    )


def annihilation_state(op: FirstOrderOperator, origin: float = 0.0, tol: Optional[float] = None) -> Smooth:
    """Solution of ``op χ = 0``: χ = exp(−∫ m/d) normalised to 1 at ``origin``."""
    ratio = op.multiplicative * op.derivative.reciprocal()
    exponent = antiderivative(ratio, origin, tol=tol, name=f"int({op.name})")
    return (-exponent).exp()
