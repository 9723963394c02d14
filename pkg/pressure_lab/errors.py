from typing import Any, Dict, List, Optional


class PressureLabError(Exception):
    """Base class for every error raised by pressure-lab."""


class ConfigValidationError(PressureLabError):
    """An experiment config failed schema or model validation."""

    def __init__(self, detail: str, errors: Optional[List[Dict[str, Any]]] = None):
        super().__init__(detail)
        self.detail = detail
        self.errors = errors or []


class OverflowGuardError(PressureLabError, ArithmeticError):
    """A cocycle partial product grew past the overflow guard."""

    def __init__(self, step: int, norm: float):
        super().__init__(f"cocycle norm {norm:.3e} exceeded guard at step {step}; use the log-accumulating variant")
        self.step = step
        self.norm = norm


class EmptyCatalogError(PressureLabError, ValueError):
    pass


class NoSaddleError(PressureLabError, ValueError):
    pass


class NonPositiveDenominatorError(PressureLabError, ArithmeticError):
    pass


class IndeterminateVerdictError(PressureLabError):
    """Domination cannot be decided for a (near-)parabolic orbit."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
