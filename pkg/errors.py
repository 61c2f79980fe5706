"""Exception hierarchy shared by every module.

Each error carries a machine-readable ``code`` plus free-form context, which
the CLI serializes as its error object.
"""
from typing import Any, Dict


class JacobiDensityError(Exception):
    code = "JACOBI_DENSITY_ERROR"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        payload = {"error": self.code, "message": str(self)}
        payload.update({k: v for k, v in self.context.items() if v is not None})
        return payload


class CoefficientError(JacobiDensityError, ValueError):
    code = "INVALID_COEFFICIENTS"


class ScalingError(JacobiDensityError, ValueError):
    code = "INVALID_SCALING"


class BandStructureError(JacobiDensityError):
    code = "BAND_STRUCTURE_FAILURE"


class QuadratureError(JacobiDensityError):
    code = "NONCONVERGED_QUADRATURE"


class UnsupportedForEmpiricalError(JacobiDensityError):
    code = "UNSUPPORTED_FOR_EMPIRICAL"


class ConfigError(JacobiDensityError, ValueError):
    code = "CONFIG_ERROR"

    def __init__(self, message: str, field: str = None, **context: Any):
        super().__init__(message, field=field, **context)
        self.field = field
