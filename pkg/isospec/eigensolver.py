"""Finite-difference spectra of second-order operators.

``P D² + Q D + R`` with P < 0 is brought to Liouville normal form
``−g'' + V g = E ω g`` with ω = −1/P and

    V = −R/P + ¼ (Q/P)² + ½ (Q/P)',

then symmetrised with ω^{-1/2} on both sides so the three-point stencil gives
a symmetric tridiagonal matrix. Dirichlet walls drop the two edge rows.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from isospec.config import settings
from isospec.errors import AccuracyError, InvalidArgumentError, SingularityError, UnsupportedOperatorError
from isospec.grid import Boundary, Grid, make_uniform_grid
from isospec.operators import SecondOrderOperator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscretizedOperator:
    grid: Grid
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    weight: np.ndarray
    potential: np.ndarray
    boundary: Boundary = Boundary.DIRICHLET
    symmetric: bool = True

    @property
    def points(self) -> np.ndarray:
        return self.grid.points[1:-1]

    @property
    def size(self) -> int:
        return self.diagonal.size

    def shifted(self, c: float) -> "DiscretizedOperator":
        """The matrix plus c times the identity."""
        return replace(self, diagonal=self.diagonal + c)


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenvalues, nondecreasing, with optional interior eigenvectors.

    Eigenvectors are samples of the Liouville-form function g, normalised so
    that the sum of ω g² h over the interior is 1.
    """

    eigenvalues: np.ndarray
    grid: Grid
    tol: float
    eigenvectors: Optional[np.ndarray] = None
    method: str = "stebz/stein"
    truncation_change: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.eigenvalues)

    def count_below(self, mu: float) -> int:
        return int(np.count_nonzero(self.eigenvalues < mu))


def discretize(op: SecondOrderOperator, grid: Grid, bc: Boundary = Boundary.DIRICHLET) -> DiscretizedOperator:
    """Symmetric tridiagonal form of ``op`` on the interior of ``grid``.

    Raises:
        UnsupportedOperatorError: unless P < 0 at every interior point
        SingularityError: if a coefficient is not finite at an interior point
    """
    if Boundary(bc) is not Boundary.DIRICHLET:
        raise UnsupportedOperatorError(f"only Dirichlet walls are discretized, got {bc}")
    if grid.count < 3:
        raise InvalidArgumentError("a grid of at least 3 points is needed to keep an interior")
    x = grid.points[1:-1]
    P = np.asarray(op.P(x), dtype=float) * np.ones_like(x)
    if not np.all(P < 0):
        shape = "positive" if np.all(P > 0) else "sign-changing or vanishing"
        raise UnsupportedOperatorError(f"{op.name} has a {shape} leading coefficient; P < 0 is required")
    ratio = op.Q * op.P.reciprocal()
    q_over_p, slope = ratio.jet(x, 1)
    R = op.R(x)
    with np.errstate(all="ignore"):
        potential = -R / P + 0.25 * q_over_p ** 2 + 0.5 * slope
        weight = -1.0 / P
        h2 = grid.spacing ** 2
        diagonal = (2.0 / h2 + potential) / weight
        off_diagonal = -1.0 / (h2 * np.sqrt(weight[:-1] * weight[1:]))
    bad = ~np.isfinite(diagonal)
    if np.any(bad):
        raise SingularityError(
            f"{op.name} is not finite at {np.count_nonzero(bad)} interior point(s), first x={x[bad][0]:.17g}",
            points=x[bad],
        )
    logger.debug(f"discretized {op.name} on {x.size} interior points, h={grid.spacing:.3g}")
    return DiscretizedOperator(grid, diagonal, off_diagonal, weight, potential)


def eigen_lowest(d: DiscretizedOperator, m: int, tol: Optional[float] = None, vectors: bool = True) -> Spectrum:
    """The ``m`` lowest eigenvalues by Sturm bisection, eigenvectors by inverse iteration."""
    tol = settings.eigen_tol if tol is None else tol
    if not 1 <= m <= d.size:
        raise InvalidArgumentError(f"cannot extract {m} eigenvalues from a {d.size}-point interior")
    result = eigh_tridiagonal(
        d.diagonal,
        d.off_diagonal,
        eigvals_only=not vectors,
        select="i",
        select_range=(0, m - 1),
        lapack_driver="stebz",
        tol=tol,
    )
    if vectors:
        values, raw = result
        eigenvectors = raw / np.sqrt(d.weight[:, None] * d.grid.spacing)
    else:
        values, eigenvectors = result, None
    return Spectrum(np.asarray(values, dtype=float), d.grid, tol, eigenvectors)


def sturm_count(d: DiscretizedOperator, mu: float) -> int:
    """Number of eigenvalues of ``d`` below ``mu`` from the LDLᵀ pivot signs."""
    count = 0
    pivot = 1.0
    floor = np.finfo(float).tiny
    for i in range(d.size):
        pivot = d.diagonal[i] - mu - (d.off_diagonal[i - 1] ** 2 / pivot if i else 0.0)
        if pivot == 0.0:
            pivot = floor
        if pivot < 0.0:
            count += 1
    return count


def _wider(grid: Grid) -> Grid:
    # same spacing, twice the extent
    if grid.lower < 0.0 < grid.upper:
        return make_uniform_grid(2.0 * grid.lower, 2.0 * grid.upper, 2 * grid.count - 1, grid.boundary)
    return make_uniform_grid(grid.lower, grid.lower + 2.0 * (grid.upper - grid.lower), 2 * grid.count - 1,
                             grid.boundary)


def solve_spectrum(op: SecondOrderOperator, grid: Grid, m: int, doubling_check: bool = False,
                   tol: Optional[float] = None, truncation_tol: Optional[float] = None) -> Spectrum:
    """Discretize and solve; optionally re-solve on a domain twice as wide.

    With ``truncation_tol`` set, a change larger than it raises AccuracyError
    carrying the wider solution.
    """
    spectrum = eigen_lowest(discretize(op, grid), m, tol)
    logger.info(f"spectrum of {op.name}: {m} level(s) on [{grid.lower:g}, {grid.upper:g}] with {grid.count} points")
    if not doubling_check:
        return spectrum
    wider = eigen_lowest(discretize(op, _wider(grid)), m, tol, vectors=False)
    change = float(np.max(np.abs(wider.eigenvalues - spectrum.eigenvalues)))
    logger.debug(f"truncation check for {op.name}: largest eigenvalue change {change:.3g}")
    if truncation_tol is not None and change > truncation_tol:
        raise AccuracyError(
            f"domain truncation moves the spectrum of {op.name} by {change:.3g}",
            best_estimate=wider.eigenvalues,
        )
    return replace(spectrum, truncation_change=change)


def whole_line_extent(phi: Callable, threshold: float = 1e-12, start: float = 1.0, limit: float = 1e4) -> float:
    """Smallest X (to 1e-3) with |phi| below ``threshold`` on both tails beyond X."""

    def quiet_beyond(x, outer):
        pts = np.linspace(x, outer, 512)
        values = np.concatenate([np.abs(phi(pts)), np.abs(phi(-pts))])
        return bool(np.all(values < threshold))

    hi = float(start)
    while not quiet_beyond(hi, 2.0 * hi):
        hi *= 2.0
        if hi > limit:
            raise AccuracyError(f"function does not fall below {threshold:g} within |x| < {limit:g}")
    lo = 0.0
    outer = 2.0 * hi
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if quiet_beyond(mid, outer):
            hi = mid
        else:
            lo = mid
    return hi
