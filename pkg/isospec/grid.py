"""Uniform sample grids and sampled functions."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from isospec.config import settings
from isospec.errors import InvalidArgumentError


class Boundary(str, Enum):
    DIRICHLET = "dirichlet"
    NATURAL = "natural"


@dataclass(frozen=True)
class Grid:
    lower: float
    upper: float
    count: int
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)) or not self.lower < self.upper:
            raise InvalidArgumentError(f"grid bounds must satisfy lower < upper, got [{self.lower}, {self.upper}]")
        if self.count < 2:
            raise InvalidArgumentError(f"a grid needs at least 2 points, got {self.count}")

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / (self.count - 1)

    @property
    def points(self) -> np.ndarray:
        x = np.linspace(self.lower, self.upper, self.count)
        x[-1] = self.upper
        return x

    def interior(self, skip: Optional[int] = None) -> np.ndarray:
        """Points with ``skip`` samples dropped at each edge."""
        skip = settings.boundary_skip if skip is None else skip
        if self.count <= 2 * skip:
            raise InvalidArgumentError(f"grid of {self.count} points has no interior after skipping {skip} per edge")
        return self.points[skip:self.count - skip]


@dataclass(frozen=True)
class SampledFunction:
    grid: Grid
    values: np.ndarray
    derivative: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.values) != self.grid.count:
            raise InvalidArgumentError(
                f"{len(self.values)} values supplied for a grid of {self.grid.count} points"
            )
        if self.derivative is not None and len(self.derivative) != self.grid.count:
            raise InvalidArgumentError("derivative samples do not match the grid")


def make_uniform_grid(lower, upper, count, boundary=Boundary.DIRICHLET) -> Grid:
    return Grid(float(lower), float(upper), int(count), Boundary(boundary))


def differentiate(f: SampledFunction) -> SampledFunction:
    """Second-order finite-difference derivative (central inside, one-sided at the edges)."""
    if f.grid.count < 3:
        raise InvalidArgumentError("differentiation needs at least 3 grid points")
    slope = np.gradient(np.asarray(f.values, dtype=float), f.grid.spacing, edge_order=2)
    return SampledFunction(f.grid, slope)
