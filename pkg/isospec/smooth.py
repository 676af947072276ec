"""Real functions carried together with their analytic derivatives.

A :class:`Smooth` evaluates a *jet*: the list ``[f, f', f'', ...]`` at a set of
points. Jets compose exactly under the arithmetic below (Leibniz rule for
products, recursive formulas for reciprocals and exponentials), so coefficient
derivatives needed by operator composition never fall back to finite
differences.
"""

from math import comb
from numbers import Real
from typing import Callable, Sequence

import numpy as np

from isospec.errors import InvalidArgumentError, MissingDerivativeError
from isospec.grid import Grid, SampledFunction

MAX_ORDER = 6

Jet = list


def _full(x, value):
    return np.full(np.shape(x), float(value))


def _label(text):
    return text if len(text) <= 60 else text[:57] + "..."


def leibniz(a: Sequence, b: Sequence, n: int) -> Jet:
    """Jet of a product from the jets of its factors."""
    return [sum(comb(k, j) * a[j] * b[k - j] for j in range(k + 1)) for k in range(n + 1)]


def reciprocal_jet(g: Sequence, n: int) -> Jet:
    y = [1.0 / g[0]]
    for k in range(1, n + 1):
        acc = sum(comb(k, j) * g[j] * y[k - j] for j in range(1, k + 1))
        y.append(-y[0] * acc)
    return y


def exp_jet(g: Sequence, n: int) -> Jet:
    y = [np.exp(g[0])]
    for k in range(n):
        y.append(sum(comb(k, j) * g[j + 1] * y[k - j] for j in range(k + 1)))
    return y


def log_jet(g: Sequence, n: int) -> Jet:
    if n == 0:
        return [np.log(g[0])]
    return [np.log(g[0])] + leibniz(g[1:], reciprocal_jet(g, n - 1), n - 1)


class Smooth:
    """A real function of one variable with derivatives up to ``order``.

    Args:
        jet: callable ``(x, n) -> [f, f', ..., f^(n)]`` on numpy arrays
        order: highest derivative the jet can deliver
        name: label used in error messages
    """

    __slots__ = ("_jet", "order", "name")
    __array_ufunc__ = None

    def __init__(self, jet: Callable[[np.ndarray, int], Jet], order: int, name: str = "f"):
        self._jet = jet
        self.order = min(int(order), MAX_ORDER)
        self.name = name

    # Evaluation

    def jet(self, x, n: int = 0) -> Jet:
        if n > self.order:
            raise MissingDerivativeError(
                f"{self.name} carries derivatives up to order {self.order}, order {n} was requested"
            )
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._jet(x, n)

    def __call__(self, x):
        return self.jet(x, 0)[0]

    def derivative(self, k: int = 1) -> "Smooth":
        if k > self.order:
            raise MissingDerivativeError(
                f"{self.name} carries derivatives up to order {self.order}, derivative {k} was requested"
            )
        parent = self
        return Smooth(lambda x, n: parent._jet(x, n + k)[k:], self.order - k, _label(f"{self.name}" + "'" * k))

    def sample(self, grid: Grid, with_derivative: bool = True) -> SampledFunction:
        n = 1 if with_derivative and self.order >= 1 else 0
        values = self.jet(grid.points, n)
        return SampledFunction(grid, values[0], values[1] if n else None)

    # Constructors

    @classmethod
    def constant(cls, c: float) -> "Smooth":
        c = float(c)
        return cls(lambda x, n: [_full(x, c)] + [_full(x, 0.0) for _ in range(n)], MAX_ORDER, repr(c))

    @classmethod
    def identity(cls) -> "Smooth":
        def jet(x, n):
            out = [x.copy()]
            if n >= 1:
                out.append(_full(x, 1.0))
            out.extend(_full(x, 0.0) for _ in range(n - 1))
            return out

        return cls(jet, MAX_ORDER, "x")

    @classmethod
    def power(cls, p: float, scale: float = 1.0) -> "Smooth":
        """``scale * x**p`` with exact derivatives of every order."""
        p = float(p)
        integral = p.is_integer() and p >= 0

        def jet(x, n):
            out = []
            coefficient = scale
            for k in range(n + 1):
                if integral and k > p:
                    out.append(_full(x, 0.0))
                else:
                    out.append(coefficient * np.power(x, p - k))
                coefficient *= p - k
            return out

        return cls(jet, MAX_ORDER, f"x^{p:g}")

    @classmethod
    def from_derivatives(cls, *functions: Callable, name: str = "f") -> "Smooth":
        if not functions:
            raise InvalidArgumentError("at least the function value is required")

        def jet(x, n):
            return [np.asarray(functions[k](x), dtype=float) * np.ones_like(x) for k in range(n + 1)]

        return cls(jet, len(functions) - 1, name)

    @classmethod
    def primitive(cls, value: Callable, derivative: "Smooth", name: str = "F") -> "Smooth":
        """A function given by its values whose derivative is ``derivative``."""

        def jet(x, n):
            out = [np.asarray(value(x), dtype=float)]
            if n >= 1:
                out.extend(derivative._jet(x, n - 1))
            return out

        return cls(jet, derivative.order + 1, name)

    @classmethod
    def from_ode(cls, value: Callable, first: Callable, P: "Smooth", Q: "Smooth", R: "Smooth",
                 eigenvalue: float, name: str = "phi") -> "Smooth":
        """Solution of ``P f'' + Q f' + R f = eigenvalue * f`` given f and f'.

        Higher derivatives come from differentiating the equation, so the order
        is limited only by the coefficient jets.
        """
        S = R - eigenvalue

        def jet(x, n):
            f = [np.asarray(value(x), dtype=float), np.asarray(first(x), dtype=float)][: n + 1]
            if n < 2:
                return f
            m = n - 2
            p, q, s = P._jet(x, m), Q._jet(x, m), S._jet(x, m)
            for k in range(m + 1):
                acc = sum(comb(k, j) * p[j] * f[k + 2 - j] for j in range(1, k + 1))
                acc = acc + sum(comb(k, j) * (q[j] * f[k + 1 - j] + s[j] * f[k - j]) for j in range(k + 1))
                f.append(-acc / p[0])
            return f

        return cls(jet, 2 + min(P.order, Q.order, R.order), name)

    # Arithmetic

    @staticmethod
    def coerce(value) -> "Smooth":
        if isinstance(value, Smooth):
            return value
        if isinstance(value, Real):
            return Smooth.constant(value)
        raise TypeError(f"cannot combine Smooth with {type(value).__name__}")

    def __add__(self, other):
        other = Smooth.coerce(other)
        a, b = self, other
        return Smooth(lambda x, n: [u + v for u, v in zip(a._jet(x, n), b._jet(x, n))],
                      min(a.order, b.order), _label(f"({a.name} + {b.name})"))

    __radd__ = __add__

    def __neg__(self):
        a = self
        return Smooth(lambda x, n: [-u for u in a._jet(x, n)], a.order, _label(f"-{a.name}"))

    def __sub__(self, other):
        return self + (-Smooth.coerce(other))

    def __rsub__(self, other):
        return Smooth.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Real):
            c, a = float(other), self
            return Smooth(lambda x, n: [c * u for u in a._jet(x, n)], a.order, _label(f"{c:g}*{a.name}"))
        other = Smooth.coerce(other)
        a, b = self, other
        return Smooth(lambda x, n: leibniz(a._jet(x, n), b._jet(x, n), n),
                      min(a.order, b.order), _label(f"{a.name}*{b.name}"))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self * (1.0 / float(other))
        return self * Smooth.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return Smooth.coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise InvalidArgumentError("only non-negative integer powers of a Smooth are supported")
        result = Smooth.constant(1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def reciprocal(self) -> "Smooth":
        a = self
        return Smooth(lambda x, n: reciprocal_jet(a._jet(x, n), n), a.order, _label(f"1/{a.name}"))

    def exp(self) -> "Smooth":
        a = self
        return Smooth(lambda x, n: exp_jet(a._jet(x, n), n), a.order, _label(f"exp({a.name})"))

    def log(self) -> "Smooth":
        a = self
        return Smooth(lambda x, n: log_jet(a._jet(x, n), n), a.order, _label(f"log({a.name})"))

    def __repr__(self):
        return f"Smooth({self.name}, order={self.order})"
