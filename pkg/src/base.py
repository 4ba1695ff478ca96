"""Base operation class and error hierarchy for curve operations."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional
import logging

logger = logging.getLogger(__name__)


class OperationError(Exception):
    """Base exception for operation errors."""

    def __init__(self, code: str, message: str, details: Optional[Dict] = None):
        self.code = code
        self.message = message
        self.details = details or {}
        super().__init__(message)


class _CodedError(OperationError):
    """OperationError whose code is fixed by the subclass."""

    code_name = "OPERATION_ERROR"

    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(self.code_name, message, details)


class FieldMismatchError(_CodedError):
    code_name = "FIELD_MISMATCH"


class PreconditionError(_CodedError):
    code_name = "PRECONDITION_FAILED"


class SingularError(_CodedError):
    code_name = "SINGULAR"


class DegeneracyError(_CodedError):
    """A sample landed on a thin set; ``details["condition"]`` says which."""

    code_name = "DEGENERACY"

    def __init__(self, condition: str, message: Optional[str] = None, details: Optional[Dict] = None):
        merged = {"condition": condition}
        merged.update(details or {})
        super().__init__(message or f"Degenerate sample: {condition}", merged)
        self.condition = condition


class UnsupportedFamilyError(_CodedError):
    code_name = "UNSUPPORTED_FAMILY"


class BadReductionError(_CodedError):
    """Prime is bad for the curve; ``details["condition"]`` names the violation."""

    code_name = "BAD_REDUCTION"

    def __init__(self, condition: str, p: int, message: Optional[str] = None):
        super().__init__(
            message or f"Bad reduction at p={p}: {condition}",
            {"condition": condition, "p": p},
        )
        self.condition = condition


class CurveMismatchError(_CodedError):
    code_name = "CURVE_MISMATCH"


class BudgetExceededError(_CodedError):
    code_name = "BUDGET_EXCEEDED"


class IndeterminateError(_CodedError):
    code_name = "INDETERMINATE"


class ParseError(_CodedError):
    code_name = "PARSE_ERROR"


class RetriesExhaustedError(_CodedError):
    code_name = "RETRIES_EXHAUSTED"


class BaseOperation(ABC):
    """One area of CLI actions with shared validation and response shaping.

    Subclasses list their actions, validate parameters per action and run
    them; ``execute`` turns every outcome into a response dict.
    """

    def __init__(self):
        self.area_name = self.__class__.__name__.replace("Operations", "").lower()

    @abstractmethod
    def get_supported_actions(self) -> List[str]:
        """Action names accepted by ``execute``."""

    @abstractmethod
    def _validate_action_params(self, action: str, params: Dict) -> None:
        """Raise OperationError if ``params`` cannot drive ``action``."""

    @abstractmethod
    def _execute_action(self, action: str, params: Dict) -> Any:
        """Run a validated action and return its result data."""

    def execute(self, action: str, params: Dict) -> Dict:
        """Validate and run an action.

        Returns:
            ``{"success", "data" | "error", "metadata"}``. Domain errors keep
            their code; OSError becomes IO_ERROR, anything else INTERNAL_ERROR.
        """
        try:
            if action not in self.get_supported_actions():
                raise OperationError(
                    code="INVALID_ACTION",
                    message=f"Action '{action}' not supported in {self.area_name}_operations",
                    details={"action": action, "supported_actions": self.get_supported_actions()},
                )

            self._validate_action_params(action, params)
            logger.info(f"Executing {self.area_name}.{action} with params: {sorted(params.keys())}")
            result = self._execute_action(action, params)
            return self._format_response(True, action, data=result)

        except OperationError as e:
            logger.error(f"Operation error in {self.area_name}.{action}: {e.code} - {e.message}")
            error = {"code": e.code, "message": e.message, "details": e.details}
        except OSError as e:
            logger.error(f"I/O error in {self.area_name}.{action}: {e}")
            error = {"code": "IO_ERROR", "message": str(e), "details": {"type": type(e).__name__}}
        except Exception as e:
            logger.exception(f"Unexpected error in {self.area_name}.{action}")
            error = {"code": "INTERNAL_ERROR", "message": str(e), "details": {"type": type(e).__name__}}
        return self._format_response(False, action, error=error)

    def _format_response(self, success: bool, action: str, data: Any = None, error: Optional[Dict] = None) -> Dict:
        # no timestamp: identical inputs give byte-identical outputs
        response: Dict[str, Any] = {
            "success": success,
            "metadata": {"action": action, "area": f"{self.area_name}_operations"},
        }
        if success:
            response["data"] = data
        else:
            response["error"] = error
        return response

    def _require_param(self, params: Dict, param_name: str, param_type: Optional[type] = None) -> Any:
        """Return ``params[param_name]``, raising MISSING_PARAM or INVALID_PARAM_TYPE."""
        value = params.get(param_name)
        if value is None:
            raise OperationError(
                code="MISSING_PARAM",
                message=f"Required parameter '{param_name}' not provided",
                details={"param": param_name},
            )
        if param_type is not None and not isinstance(value, param_type):
            raise OperationError(
                code="INVALID_PARAM_TYPE",
                message=f"Parameter '{param_name}' must be of type {param_type.__name__}",
                details={
                    "param": param_name,
                    "expected_type": param_type.__name__,
                    "actual_type": type(value).__name__,
                },
            )
        return value

    def _validate_choice(self, value: str, choices: List[str], param_name: str) -> None:
        if value not in choices:
            raise OperationError(
                code="INVALID_CHOICE",
                message=f"Parameter '{param_name}' must be one of: {', '.join(choices)}",
                details={"param": param_name, "value": value, "allowed_values": list(choices)},
            )

    def _validate_positive_int(self, value: Any, param_name: str, minimum: int = 1) -> int:
        """Integer parameter at least ``minimum``; bools are rejected."""
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise OperationError(
                code="INVALID_PARAM_VALUE",
                message=f"Parameter '{param_name}' must be an integer >= {minimum}",
                details={"param": param_name, "value": value, "minimum": minimum},
            )
        return value
