"""Adaptive Gauss-Kronrod quadrature on finite, semi-infinite and running intervals.

All interval work is vectorised: every pass evaluates the 15-point Kronrod rule
on all unconverged pieces at once and bisects the pieces whose embedded
7-point Gauss estimate disagrees.
"""

import logging
from typing import Callable, Optional

import numpy as np

from isospec.config import settings
from isospec.errors import AccuracyError, DivergenceError, InvalidArgumentError
from isospec.grid import Grid, SampledFunction
from isospec.smooth import Smooth

logger = logging.getLogger(__name__)

# Kronrod abscissae on [0, 1], descending; the Gauss nodes are the odd entries.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


def gauss_kronrod(f: Callable, a: np.ndarray, b: np.ndarray):
    """Kronrod estimate and error bound on each interval ``[a[i], b[i]]``.

    The error estimate follows the QUADPACK scaling so it is invariant under
    rescaling of ``f``.
    """
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)]
        raise AccuracyError(f"integrand is not finite at {bad.size} node(s), first at x={bad[0]:.17g}")
    resk = fx @ KRONROD_WEIGHTS
    resg = fx @ GAUSS_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    resasc = np.abs(fx - 0.5 * resk[:, None]) @ KRONROD_WEIGHTS
    scale = np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    resasc = resasc * scale
    resabs = resabs * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        shaped = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0.0) & (err != 0.0), shaped, err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > _TINY / (50.0 * _EPS), np.maximum(floor, err), err)
    return value, err


def integrate_pieces(f: Callable, a, b, tol: Optional[float] = None, rtol: Optional[float] = None,
                     budget: Optional[int] = None) -> np.ndarray:
    """Integrals over many intervals at once, each to its share of ``tol``.

    Each interval receives the absolute tolerance ``tol`` times its share of the
    total length; a piece is also accepted once its error is below ``rtol``
    relative to its own value.
    """
    tol = settings.quad_tol if tol is None else tol
    rtol = settings.quad_rtol if rtol is None else rtol
    budget = settings.quad_budget if budget is None else budget
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if tol <= 0:
        raise InvalidArgumentError(f"quadrature tolerance must be positive, got {tol}")
    totals = np.zeros(a.size)
    if a.size == 0:
        return totals
    span = np.sum(np.abs(b - a))
    if span == 0.0:
        return totals
    owner = np.arange(a.size)
    piece_tol = tol * np.abs(b - a) / span
    evaluations = 0
    passes = 0
    while a.size:
        value, err = gauss_kronrod(f, a, b)
        evaluations += 15 * a.size
        passes += 1
        narrow = np.abs(b - a) <= 64.0 * _EPS * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        done = (err <= np.maximum(piece_tol, rtol * np.abs(value))) | narrow
        np.add.at(totals, owner[done], value[done])
        if np.all(done):
            break
        if evaluations > budget:
            best = totals.copy()
            np.add.at(best, owner[~done], value[~done])
            raise AccuracyError(
                f"quadrature did not converge within {budget} evaluations "
                f"({np.count_nonzero(~done)} pieces left)",
                best_estimate=best if best.size > 1 else float(best[0]),
            )
        keep = ~done
        a, b, owner, piece_tol = a[keep], b[keep], owner[keep], piece_tol[keep]
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        owner = np.concatenate([owner, owner])
        piece_tol = np.concatenate([0.5 * piece_tol, 0.5 * piece_tol])
    logger.debug(f"quadrature: {evaluations} evaluations in {passes} passes")
    return totals


def integrate(f: Callable, a: float, b: float, tol: Optional[float] = None) -> float:
    """Definite integral of ``f`` over ``[a, b]`` with absolute error below ``tol``."""
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, tol)
    return float(integrate_pieces(f, [a], [b], tol)[0])


def integrate_semi_infinite(f: Callable, a: float, tol: Optional[float] = None) -> float:
    """Integral of ``f`` over ``[a, inf)`` through the map ``x = a + t/(1-t)``.

    Raises:
        DivergenceError: if the tail does not decay
    """
    tol = settings.quad_tol if tol is None else tol
    a = float(a)
    near = _tail_slice(f, a + 2.0 ** 20, a + 2.0 ** 21)
    far = _tail_slice(f, a + 2.0 ** 40, a + 2.0 ** 41)
    if not np.isfinite(far) or (far > tol and far > settings.tail_ratio * near):
        raise DivergenceError(
            f"integrand tail does not decay beyond x={a:g} (slice integrals {near:.3g}, {far:.3g})"
        )

    def mapped(t):
        one_minus = 1.0 - t
        return f(a + t / one_minus) / (one_minus * one_minus)

    return integrate(mapped, 0.0, 1.0, tol)


def _tail_slice(f, lo, hi):
    with np.errstate(all="ignore"):
        try:
            value, _ = gauss_kronrod(f, np.array([lo]), np.array([hi]))
        except AccuracyError:
            return np.inf
    return abs(float(value[0]))


def running_integral(f: Callable, origin: float, tol: Optional[float] = None) -> Callable:
    """Callable ``F(x) = integral of f from origin to x`` for arbitrary point sets.

    Points are sorted, the gaps between consecutive points are integrated in
    one vectorised pass and the pieces are accumulated outward from ``origin``.
    """
    origin = float(origin)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        knots = np.unique(np.concatenate([flat, [origin]]))
        pieces = integrate_pieces(f, knots[:-1], knots[1:], tol)
        cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
        cumulative -= cumulative[np.searchsorted(knots, origin)]
        return cumulative[np.searchsorted(knots, flat)].reshape(x.shape)

    return evaluate


def cumulative_integral(f: Callable, origin: float, grid: Grid, tol: Optional[float] = None) -> SampledFunction:
    if not grid.lower <= origin <= grid.upper:
        raise InvalidArgumentError(
            f"origin {origin} lies outside the grid domain [{grid.lower}, {grid.upper}]"
        )
    points = grid.points
    values = running_integral(f, origin, tol)(points)
    return SampledFunction(grid, values, np.asarray(f(points), dtype=float) * np.ones_like(points))


def antiderivative(integrand: Smooth, origin: float, constant: float = 0.0,
                   tol: Optional[float] = None, name: str = "F") -> Smooth:
    """``constant + integral of integrand from origin to x`` as a Smooth.

    The derivative jets are those of the integrand, so they are exact.
    """
    running = running_integral(integrand, origin, tol)
    return Smooth.primitive(lambda x: constant + running(x), integrand, name)


def tail_antiderivative(integrand: Smooth, anchor: float, tol: Optional[float] = None,
                        name: str = "T") -> Smooth:
    """``integral of integrand from x to infinity`` as a Smooth.

    Evaluated as the tail beyond a fixed ``anchor`` minus the running integral
    from the anchor, so every point set sees the same constant.
    """
    tail = integrate_semi_infinite(integrand, anchor, tol)
    return -antiderivative(integrand, anchor, constant=-tail, tol=tol, name=name)
