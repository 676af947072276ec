"""Reference eigenfunctions: Hermite functions, spherical Bessel functions,
associated Laguerre polynomials and radial oscillator functions.

All evaluators are vectorised over the argument and built from three-term
recurrences (downward for the regular spherical Bessel function where
rho < l, upward otherwise).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from isospec.errors import InvalidArgumentError, SingularityError
from isospec.operators import SecondOrderOperator
from isospec.smooth import Smooth

MAX_HERMITE = 60
MAX_BESSEL = 50
MAX_LAGUERRE = 60

_RESCALE_ABOVE = 1e250


def _check_index(name, value, lower, upper):
    if not float(value).is_integer() or not lower <= value <= upper:
        raise InvalidArgumentError(f"{name}={value} outside [{lower}, {upper}]")
    return int(value)


# Hermite functions

def hermite_fn(n: int, x):
    """L²-normalised oscillator eigenfunction φ_n(x) = H_n(x) e^{-x²/2} / sqrt(2^n n! sqrt(pi))."""
    n = _check_index("n", n, 0, MAX_HERMITE)
    x = np.asarray(x, dtype=float)
    previous = np.zeros_like(x)
    current = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        previous, current = current, np.sqrt(2.0 / (k + 1)) * x * current - np.sqrt(k / (k + 1)) * previous
    return current


def hermite_fn_derivative(n: int, x):
    n = _check_index("n", n, 0, MAX_HERMITE)
    x = np.asarray(x, dtype=float)
    upper = hermite_fn(n + 1, x) if n < MAX_HERMITE else _hermite_above(x)
    lower = hermite_fn(n - 1, x) if n > 0 else 0.0
    return np.sqrt(n / 2.0) * lower - np.sqrt((n + 1) / 2.0) * upper


def _hermite_above(x):
    # φ_61 from the last two members of the recurrence
    return np.sqrt(2.0 / 61) * x * hermite_fn(60, x) - np.sqrt(60 / 61) * hermite_fn(59, x)


# Spherical Bessel functions

def _j0(rho):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(rho == 0.0, 1.0, np.sin(rho) / rho)


def _j1(rho):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(rho == 0.0, 0.0, np.sin(rho) / rho ** 2 - np.cos(rho) / rho)


def _upward_j(l: int, rho: np.ndarray) -> np.ndarray:
    # stable for rho >= l
    previous, current = _j0(rho), _j1(rho)
    for k in range(1, l):
        previous, current = current, (2 * k + 1) / rho * current - previous
    return current


def _miller_j(l: int, rho: np.ndarray) -> np.ndarray:
    """Regular spherical Bessel function by downward recurrence.

    The recurrence starts at max(l, rho) + 20 + 10 rho^(1/3) from (0, tiny)
    and is rescaled whenever it threatens to overflow; the result is
    normalised against j_0 (or j_1 where j_0 is the smaller of the two).
    """
    top = float(np.max(rho)) if rho.size else 0.0
    start = int(np.ceil(max(l, top))) + 20 + int(10.0 * top ** (1.0 / 3.0))
    upper = np.zeros_like(rho)
    current = np.full_like(rho, 1e-30)
    kept = np.zeros_like(rho)
    f1 = np.zeros_like(rho)
    for k in range(start, 0, -1):
        lower = (2 * k + 1) / rho * current - upper
        upper, current = current, lower
        if k - 1 == l:
            kept = current.copy()
        if k - 1 == 1:
            f1 = current.copy()
        big = np.abs(current) > _RESCALE_ABOVE
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE_ABOVE, 1.0)
            current, upper, kept, f1 = current * scale, upper * scale, kept * scale, f1 * scale
    f0 = current
    j0, j1 = _j0(rho), _j1(rho)
    use_j0 = np.abs(j0) >= np.abs(j1)
    with np.errstate(divide="ignore", invalid="ignore"):
        norm = np.where(use_j0, j0 / f0, j1 / f1)
    return kept * norm


def spherical_bessel(kind: str, l: int, rho):
    """j_l(ρ) (kind "j") or n_l(ρ) (kind "n")."""
    l = _check_index("l", l, 0, MAX_BESSEL)
    rho = np.asarray(rho, dtype=float)
    if kind == "j":
        if l == 0:
            return _j0(rho)
        flat = rho.ravel()
        out = np.zeros_like(flat)
        inner = (flat > 0.0) & (flat < l)
        outer = flat >= l
        if np.any(inner):
            out[inner] = _miller_j(l, flat[inner])
        if np.any(outer):
            out[outer] = _upward_j(l, flat[outer])
        return out.reshape(rho.shape)
    if kind == "n":
        if np.any(rho == 0.0):
            raise SingularityError("n_l is singular at rho=0", points=[0.0])
        previous = -np.cos(rho) / rho
        if l == 0:
            return previous
        current = -np.cos(rho) / rho ** 2 - np.sin(rho) / rho
        for k in range(1, l):
            previous, current = current, (2 * k + 1) / rho * current - previous
        return current
    raise InvalidArgumentError(f"unknown spherical Bessel kind {kind!r}, expected 'j' or 'n'")


def spherical_bessel_derivative(kind: str, l: int, rho):
    """f_l' = f_{l-1} − (l+1) f_l / ρ, and f_0' = −f_1."""
    l = _check_index("l", l, 0, MAX_BESSEL)
    rho = np.asarray(rho, dtype=float)
    if l == 0:
        return -spherical_bessel(kind, 1, rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = spherical_bessel(kind, l - 1, rho) - (l + 1) / rho * spherical_bessel(kind, l, rho)
    if kind == "j":
        value = np.where(rho == 0.0, 1.0 / 3.0 if l == 1 else 0.0, value)
    return value


# Associated Laguerre polynomials

def assoc_laguerre(n: int, k: float, rho):
    n = _check_index("n", n, 0, MAX_LAGUERRE)
    rho = np.asarray(rho, dtype=float)
    previous = np.zeros_like(rho)
    current = np.ones_like(rho)
    for m in range(n):
        previous, current = current, ((2 * m + k + 1 - rho) * current - (m + k) * previous) / (m + 1)
    return current


def assoc_laguerre_derivative(n: int, k: float, rho):
    """d/dρ L^k_n(ρ) = −L^{k+1}_{n−1}(ρ)."""
    n = _check_index("n", n, 0, MAX_LAGUERRE)
    rho = np.asarray(rho, dtype=float)
    if n == 0:
        return np.zeros_like(rho)
    return -assoc_laguerre(n - 1, k + 1, rho)


# Radial oscillator functions

def radial_u(n: int, l: int, r):
    """u_nl(r) = r^{l+1} e^{−r²/2} L_n^{l+1/2}(r²), unnormalised; l = −1 is allowed."""
    n = _check_index("n", n, 0, MAX_LAGUERRE)
    l = _check_index("l", l, -1, MAX_BESSEL)
    r = np.asarray(r, dtype=float)
    return r ** (l + 1) * np.exp(-0.5 * r * r) * assoc_laguerre(n, l + 0.5, r * r)


def radial_u_derivative(n: int, l: int, r):
    n = _check_index("n", n, 0, MAX_LAGUERRE)
    l = _check_index("l", l, -1, MAX_BESSEL)
    r = np.asarray(r, dtype=float)
    gauss = np.exp(-0.5 * r * r)
    rho = r * r
    envelope = (l + 1) * r ** l - r ** (l + 2) if l >= 0 else -r
    value = envelope * gauss * assoc_laguerre(n, l + 0.5, rho)
    if n > 0:
        value = value - 2.0 * r ** (l + 2) * gauss * assoc_laguerre(n - 1, l + 1.5, rho)
    return value


def radial_energy(n: int, l: int) -> float:
    """ε_nl = 4n + 2l + 3."""
    return 4.0 * n + 2.0 * l + 3.0


# Families

def oscillator_operator() -> SecondOrderOperator:
    x = Smooth.identity()
    return SecondOrderOperator.schrodinger(0.5 * x * x, kinetic=0.5, name="H_osc")


def _centrifugal(l: int) -> Smooth:
    weight = float(l * (l + 1))
    return Smooth.constant(0.0) if weight == 0.0 else Smooth.power(-2.0, scale=weight)


def bessel_operator(l: int) -> SecondOrderOperator:
    """−D² − (2/ρ) D + l(l+1)/ρ², whose regular and irregular solutions at energy 1 are j_l, n_l."""
    return SecondOrderOperator(
        Smooth.constant(-1.0),
        Smooth.power(-1.0, scale=-2.0),
        _centrifugal(l),
        index=l,
        name=f"H_{l}",
    )


def radial_operator(l: int) -> SecondOrderOperator:
    """−D² + r² + l(l+1)/r²."""
    r = Smooth.identity()
    potential = r * r + _centrifugal(l)
    return SecondOrderOperator.schrodinger(potential, index=l, name=f"H_{l}")


@dataclass(frozen=True)
class EigenfunctionFamily:
    """An indexed family of eigenfunctions with analytic first derivatives.

    ``equation(index)`` returns the defining operator and eigenvalue, from which
    higher derivatives are generated.
    """

    family_id: str
    lower: int
    upper: int
    evaluator: Callable
    derivative: Callable
    normalization: str
    equation: Optional[Callable] = None

    def _check(self, index):
        if not self.lower <= index <= self.upper:
            raise InvalidArgumentError(f"index {index} outside {self.family_id} range [{self.lower}, {self.upper}]")

    def evaluate(self, index, x):
        self._check(index)
        return self.evaluator(index, x)

    def eigenvalue(self, index) -> float:
        self._check(index)
        return self.equation(index)[1]

    def smooth(self, index) -> Smooth:
        self._check(index)
        value = lambda x: self.evaluator(index, x)
        first = lambda x: self.derivative(index, x)
        name = f"{self.family_id}[{index}]"
        if self.equation is None:
            return Smooth.from_derivatives(value, first, name=name)
        operator, eigenvalue = self.equation(index)
        return operator.eigenfunction(value, first, eigenvalue, name=name)


def hermite_family() -> EigenfunctionFamily:
    operator = oscillator_operator()
    return EigenfunctionFamily(
        "hermite",
        0,
        MAX_HERMITE,
        hermite_fn,
        hermite_fn_derivative,
        "L2-normalised on the real line",
        lambda n: (operator, n + 0.5),
    )


def bessel_family(kind: str = "j") -> EigenfunctionFamily:
    if kind not in ("j", "n"):
        raise InvalidArgumentError(f"unknown spherical Bessel kind {kind!r}, expected 'j' or 'n'")
    return EigenfunctionFamily(
        f"bessel_{kind}",
        0,
        MAX_BESSEL,
        lambda l, rho: spherical_bessel(kind, l, rho),
        lambda l, rho: spherical_bessel_derivative(kind, l, rho),
        "standard spherical Bessel normalisation (j_0 = sin ρ/ρ)",
        lambda l: (bessel_operator(l), 1.0),
    )


def radial_family_in_l(n: int) -> EigenfunctionFamily:
    """u_{n,l} indexed by l = −1 .. 50."""
    return EigenfunctionFamily(
        f"radial_n{n}",
        -1,
        MAX_BESSEL,
        lambda l, r: radial_u(n, l, r),
        lambda l, r: radial_u_derivative(n, l, r),
        "unnormalised: r^{l+1} e^{-r^2/2} L_n^{l+1/2}(r^2)",
        lambda l: (radial_operator(l), radial_energy(n, l)),
    )


def radial_family_in_n(l: int) -> EigenfunctionFamily:
    """u_{n,l} indexed by n = 0 .. 60."""
    return EigenfunctionFamily(
        f"radial_l{l}",
        0,
        MAX_LAGUERRE,
        lambda n, r: radial_u(n, l, r),
        lambda n, r: radial_u_derivative(n, l, r),
        "unnormalised: r^{l+1} e^{-r^2/2} L_n^{l+1/2}(r^2)",
        lambda n: (radial_operator(l), radial_energy(n, l)),
    )
