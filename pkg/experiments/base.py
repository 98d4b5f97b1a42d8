"""experiments/base.py — Abstract base class and result type for runners.

Every runner subclasses :class:`BaseRunner` and implements :meth:`run`,
returning a :class:`RunResult` whose table becomes the CSV artifact.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from estimators.base import Estimator
from experiments.artifacts import PlotSpec


@dataclass
class Check:
    """One in-run assertion and its outcome."""

    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class RunResult:
    """Structured result returned by every runner."""

    success: bool
    name: str
    header: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    plot: Optional[PlotSpec] = None
    error: Optional[str] = None
    #: Trained estimators keyed by a file-name-safe label.
    estimators: Dict[str, Estimator] = field(default_factory=dict)

    @property
    def checks_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def column(self, name: str) -> List[Any]:
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def __str__(self) -> str:
        if not self.success:
            return f"[Error] {self.name}: {self.error}"
        lines = [f"{self.name}: {len(self.rows)} rows"]
        lines.extend(str(c) for c in self.checks)
        return "\n".join(lines)


def check(name: str, passed: bool, detail: str = "") -> Check:
    return Check(name=name, passed=bool(passed), detail=detail)


class BaseRunner(ABC):
    """Abstract base class for experiment runners.

    Subclasses set :attr:`name` (the CLI command) and :attr:`description`,
    and implement :meth:`run`.
    """

    name: str = ""
    description: str = ""
    #: Keyword arguments :meth:`run` accepts; used to validate configuration.
    options: Sequence[str] = ()

    @abstractmethod
    def run(self, **kwargs: Any) -> RunResult:
        """Execute the experiment and return its table and checks."""

    def describe(self) -> Dict[str, str]:
        return {"name": self.name, "description": self.description}
