"""
Error handling
Exception hierarchy for the library plus the console handler used by the CLI
"""

import logging
import sys
import traceback
from types import TracebackType
from typing import Any, Callable, Dict, List, Optional, Type

from colorama import Fore, Style

from .models import ErrorInfo

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


class KisinError(Exception):
    """Base class of every error raised by kisinlab"""

    code = "kisin_error"
    exit_code = EXIT_MATH
    default_solution = ""

    def __init__(self, message: str, *, solution: Optional[str] = None, witness: Any = None):
        super().__init__(message)
        self.message = message
        self.solution = solution if solution is not None else self.default_solution
        self.witness = witness

    def to_error_info(self) -> ErrorInfo:
        return ErrorInfo(
            code=self.code,
            message=self.message,
            solution=self.solution,
            severity="error",
            witness=self.witness,
        )


class ParseError(KisinError):
    code = "parse_error"
    exit_code = EXIT_INPUT
    default_solution = "check the module file against the series literal grammar"


class ParameterMismatchError(KisinError):
    code = "parameter_mismatch"
    exit_code = EXIT_INPUT
    default_solution = "operands must share p, f, the field modulus and e"


class DimensionMismatchError(ParameterMismatchError):
    code = "dimension_mismatch"
    default_solution = "check matrix shapes"


class FieldDefinitionError(KisinError):
    code = "field_definition"
    exit_code = EXIT_INPUT
    default_solution = "p must be prime and the modulus monic irreducible of degree f"


class PrecisionError(KisinError):
    code = "precision_insufficient"
    exit_code = EXIT_INPUT
    default_solution = "rerun with a larger working precision (--prec)"


class PrecisionNotStabilizedError(PrecisionError):
    code = "precision_not_stabilized"


class SingularMatrixError(KisinError):
    code = "singular_matrix"
    default_solution = "the matrix has zero determinant"


class RankDeficientError(SingularMatrixError):
    code = "rank_deficient"
    default_solution = "generators must span the whole ambient space over k((u))"


class HeightViolationError(KisinError):
    code = "height_violated"
    default_solution = "the assembled module is not of height r; raise r or change the data"


class NotAMorphismError(KisinError):
    code = "not_a_morphism"
    default_solution = "the matrix must satisfy F*A_source = A_target*phi(F) with integral entries"


class UnboundedHeightError(KisinError):
    code = "r_unbounded"
    default_solution = "duality and Min need a finite height bound r"


class CensusTooLargeError(KisinError):
    code = "census_too_large"
    default_solution = "instance too large for exhaustive census; raise census_guard_bits at your own risk"


class NotInSError(KisinError):
    code = "not_in_S"
    default_solution = "the sequence's t_i are not pairwise distinct mod Z"


class NotMaximalError(KisinError):
    code = "not_maximal"
    default_solution = "apply max_r to the source and target first"


class NotMinimalError(KisinError):
    code = "not_minimal"
    default_solution = "apply min_r to the source and target first"


class ScenarioFailure(KisinError):
    code = "scenario_failed"


class ErrorHandler:
    """Console error handler: coloured messages, solution hints, exit codes"""

    def __init__(self, stream: Any = None):
        self.stream = stream
        self.error_handlers: Dict[str, Callable[[ErrorInfo], None]] = {}

    def register_error_handler(self, error_code: str, handler: Callable[[ErrorInfo], None]) -> None:
        """Register an extra callback for an error code"""
        self.error_handlers[error_code] = handler

    def _out(self) -> Any:
        return self.stream if self.stream is not None else sys.stderr

    def handle_error(self, error: ErrorInfo) -> None:
        """Print one error with its solution hint"""
        out = self._out()
        color = _severity_color(error.severity)
        print(f"{color}{_get_error_icon(error.severity)} {error.message}{Style.RESET_ALL}", file=out)
        if error.witness is not None:
            print(f"   witness: {error.witness}", file=out)
        if error.solution:
            print(f"💡 {error.solution}", file=out)

        if error.code in self.error_handlers:
            try:
                self.error_handlers[error.code](error)
            except Exception as e:  # noqa: BLE001
                logger.warning("error callback for %s failed: %s", error.code, e)

    def handle_exception(self, exc: BaseException, verbose: bool = False) -> int:
        """Report an exception and return the process exit code"""
        if isinstance(exc, KisinError):
            logger.debug("kisin error %s: %s", exc.code, exc.message)
            self.handle_error(exc.to_error_info())
            code = exc.exit_code
        else:
            logger.error("unexpected error: %s", exc)
            self.handle_error(ErrorInfo(
                code="unexpected",
                message=f"{type(exc).__name__}: {exc}",
                solution="rerun with --verbose and check the log file",
            ))
            code = EXIT_MATH
        if verbose:
            traceback.print_exception(type(exc), exc, exc.__traceback__, file=self._out())
        return code

    def show_error_summary(self, errors: List[ErrorInfo]) -> None:
        """Summary grouped by severity"""
        out = self._out()
        if not errors:
            print(f"{Fore.GREEN}✅ no problems found{Style.RESET_ALL}", file=out)
            return

        print(f"\n📋 {len(errors)} problem(s)", file=out)
        print("=" * 50, file=out)
        for severity, title in (("error", "errors"), ("warning", "warnings"), ("info", "notes")):
            group = [e for e in errors if e.severity == severity]
            if not group:
                continue
            color = _severity_color(severity)
            print(f"\n{color}{_get_error_icon(severity)} {title} ({len(group)}):{Style.RESET_ALL}", file=out)
            for error in group:
                print(f"   • {error.message}", file=out)
                if error.witness is not None:
                    print(f"     witness: {error.witness}", file=out)


def _get_error_icon(severity: str) -> str:
    icons = {
        "error": "❌",
        "warning": "⚠️",
        "info": "ℹ️",
    }
    return icons.get(severity, "❓")


def _severity_color(severity: str) -> str:
    return {
        "error": Fore.RED,
        "warning": Fore.YELLOW,
        "info": Fore.CYAN,
    }.get(severity, "")


global_error_handler = ErrorHandler()


def handle_exception(
    exc_type: Type[BaseException],
    exc_value: BaseException,
    exc_traceback: Optional[TracebackType],
) -> None:
    """sys.excepthook replacement"""
    if issubclass(exc_type, KeyboardInterrupt):
        print("\n\n👋 cancelled", file=sys.stderr)
        sys.exit(0)

    code = global_error_handler.handle_exception(exc_value)
    tb_lines = traceback.format_tb(exc_traceback)
    relevant = [line for line in tb_lines[-3:] if "kisinlab" in line]
    if relevant:
        print("\n📍 location:", file=sys.stderr)
        for line in relevant:
            print(f"   {line.strip()}", file=sys.stderr)
    sys.exit(code)


def install_global_exception_handler() -> None:
    """Install the friendly excepthook"""
    sys.excepthook = handle_exception
