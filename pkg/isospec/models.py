"""Plain records shared across the package: reports, tables and run settings."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from isospec.errors import InvalidArgumentError


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``measured`` maps quantity names to numbers (or lists of numbers) in a fixed
    insertion order; ``provenance`` names the claim the check certifies.
    """

    check_id: str
    measured: dict
    tolerance: float
    verdict: Verdict
    provenance: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is not Verdict.FAIL

    @classmethod
    def judge(cls, check_id, measured, tolerance, deviations, provenance="") -> "VerificationReport":
        """Build a report whose verdict is pass iff every deviation is within tolerance."""
        ok = all(abs(value) <= tolerance for value in deviations)
        return cls(check_id, dict(measured), tolerance, Verdict.PASS if ok else Verdict.FAIL, provenance)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "measured": self.measured,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class Table:
    columns: tuple
    rows: tuple = ()
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise InvalidArgumentError(
                    f"row of length {len(row)} does not match {len(self.columns)} columns"
                )

    def column(self, name) -> list:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


@dataclass(frozen=True)
class LambdaSweep:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise InvalidArgumentError(f"sweep count must be at least 1, got {self.count}")

    def values(self) -> list:
        if self.count == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.count - 1)
        return [float(self.start + i * step) for i in range(self.count)]


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run depends on; identical configs give identical artifacts."""

    command: str
    model: str
    case: Optional[str] = None
    lam: Optional[float] = None
    sweep: Optional[LambdaSweep] = None
    domain: Optional[tuple] = None
    points: int = 2001
    member: Optional[int] = None
    levels: int = 6
    indices: tuple = ()
    seed_kind: str = "j"
    tol: Optional[float] = None
    output: Optional[str] = None
    fmt: str = "csv"
    workers: int = 1
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol is not None and self.tol <= 0:
            raise InvalidArgumentError(f"tolerance must be positive, got {self.tol}")
        if self.points < 3:
            raise InvalidArgumentError(f"at least 3 grid points are needed, got {self.points}")
        if self.levels < 1:
            raise InvalidArgumentError(f"levels must be at least 1, got {self.levels}")
        if self.fmt not in ("csv", "json"):
            raise InvalidArgumentError(f"unknown output format {self.fmt!r}")
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be at least 1, got {self.workers}")

    def lambdas(self) -> list:
        if self.sweep is not None:
            return self.sweep.values()
        if self.lam is None:
            raise InvalidArgumentError(f"{self.command} needs --lambda or --lambda-sweep")
        return [float(self.lam)]

    def describe(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "model": self.model,
            "case": self.case,
            "lambda": self.lam,
            "domain": list(self.domain) if self.domain else None,
            "points": self.points,
            "member": self.member,
        }
