"""
Core data models
Plain records shared by the library, the report printers and the CLI
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class IsoStatus(Enum):
    """Outcome of an isomorphism search"""
    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    UNDECIDED = "undecided"


@dataclass
class ErrorInfo:
    """User-facing description of a problem"""
    code: str
    message: str
    solution: str = ""
    severity: str = "error"  # error, warning, info
    witness: Optional[Any] = None

    def __str__(self) -> str:
        return f"[{self.severity.upper()}] {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "solution": self.solution,
            "severity": self.severity,
            "witness": _plain(self.witness),
        }


@dataclass
class CheckResult:
    """One line of a validation report"""
    name: str
    passed: bool
    message: str
    witness: Optional[Any] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "message": self.message,
            "witness": _plain(self.witness),
        }


@dataclass
class ValidationReport:
    """Every invariant check run against a module, in order"""
    summary: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_errors(self) -> List[ErrorInfo]:
        """Failed checks as ErrorInfo records for the error summary printer"""
        return [
            ErrorInfo(
                code=f"check_{c.name}",
                message=f"{c.name}: {c.message}",
                solution="fix the Frobenius matrix or raise the height bound r",
                witness=c.witness,
            )
            for c in self.failures()
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "module": self.summary,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass
class ScenarioCheck:
    """A single expected-versus-actual comparison inside a scenario"""
    label: str
    expected: Any
    actual: Any

    @property
    def ok(self) -> bool:
        return bool(self.expected == self.actual)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
            "ok": self.ok,
        }


@dataclass
class ScenarioResult:
    """Outcome of a reproduction scenario"""
    name: str
    description: str
    checks: List[ScenarioCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def expect(self, label: str, expected: Any, actual: Any) -> bool:
        check = ScenarioCheck(label, expected, actual)
        self.checks.append(check)
        return check.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.name,
            "description": self.description,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def _plain(value: Any) -> Any:
    """Best-effort conversion to JSON-friendly values"""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)
