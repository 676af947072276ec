import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


@dataclass(frozen=True)
class Settings:
    """Numerical tolerances and run-time defaults.

    Values come from ``ISOSPEC_*`` environment variables (a ``.env`` file is
    honoured) and fall back to the defaults below.
    """

    quad_tol: float = 1e-10
    quad_rtol: float = 1e-13
    quad_budget: int = 1_000_000
    tail_ratio: float = 0.1
    bisection_tol: float = 1e-12
    scan_resolution: int = 4000
    eigen_tol: float = 1e-10
    boundary_skip: int = 10
    radial_origin: float = 1e-8
    radial_floor: float = 1e-6
    workers: int = 4
    log_dir: str = "logs"

    @classmethod
    def from_env(cls) -> "Settings":
        defaults = cls()
        return cls(
            quad_tol=_env_float("ISOSPEC_QUAD_TOL", defaults.quad_tol),
            quad_rtol=_env_float("ISOSPEC_QUAD_RTOL", defaults.quad_rtol),
            quad_budget=_env_int("ISOSPEC_QUAD_BUDGET", defaults.quad_budget),
            tail_ratio=_env_float("ISOSPEC_TAIL_RATIO", defaults.tail_ratio),
            bisection_tol=_env_float("ISOSPEC_BISECTION_TOL", defaults.bisection_tol),
            scan_resolution=_env_int("ISOSPEC_SCAN_RESOLUTION", defaults.scan_resolution),
            eigen_tol=_env_float("ISOSPEC_EIGEN_TOL", defaults.eigen_tol),
            boundary_skip=_env_int("ISOSPEC_BOUNDARY_SKIP", defaults.boundary_skip),
            radial_origin=_env_float("ISOSPEC_RADIAL_ORIGIN", defaults.radial_origin),
            radial_floor=_env_float("ISOSPEC_RADIAL_FLOOR", defaults.radial_floor),
            workers=_env_int("ISOSPEC_WORKERS", defaults.workers),
            log_dir=os.getenv("ISOSPEC_LOG_DIR", defaults.log_dir),
        )


settings = Settings.from_env()
