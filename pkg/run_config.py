"""Run configuration: JSON document -> validated RunConfig.

Document layout::

    {
      "t": 2, "a": [0, 0], "b": [1, 2],
      "phi": {"kind": "power", "gamma": 1},          # or {"kind": "constant"},
                                                       # or {"kind": "table", "points": [[w, g], ...]}
      "grid": {"zmin": -3.2, "zmax": 3.2, "points": 512},   # optional
      "n": 2000, "moments_max": 6,                      # optional
      "format": "csv", "output": "out.csv",             # optional
      "ks_threshold": 0.05, "moment_tolerance": 0.02, "histogram_bins": 40
    }
"""
import dataclasses
import json
from dataclasses import dataclass
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, model_validator

from bands import band_structure
from coeffs import PeriodicCoefficients
from config import DensityConfig, OutputFormat
from density import scaled_support
from errors import CoefficientError, ConfigError, ScalingError
from scaling import ScalingSpec
from validation_checkers import ValidationChecker

PHI_TAGS = {"constant", "power", "table"}


def _nonzero(value: float) -> float:
    if value == 0.0:
        raise ValueError("must be nonzero")
    return value


NonzeroFloat = Annotated[float, AfterValidator(_nonzero)]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class ConstantPhi(_Document):
    kind: Literal["constant"]


class PowerPhi(_Document):
    kind: Literal["power"]
    gamma: float = Field(gt=0)


class TablePhi(_Document):
    kind: Literal["table"]
    points: List[Tuple[float, float]] = Field(min_length=2)


class GridDocument(_Document):
    zmin: float
    zmax: float
    points: int = Field(ge=2)

    @model_validator(mode="after")
    def check_order(self):
        if not self.zmin < self.zmax:
            raise ValueError("zmin must be below zmax")
        return self


class ConfigDocument(_Document):
    t: int = Field(ge=1)
    a: List[float]
    b: List[NonzeroFloat]
    phi: Annotated[Union[ConstantPhi, PowerPhi, TablePhi], Field(discriminator="kind")]
    grid: Optional[GridDocument] = None
    n: Optional[int] = Field(default=None, ge=1)
    moments_max: Optional[int] = Field(default=None, ge=0)
    format: Literal["csv", "json"] = "csv"
    output: Optional[str] = None
    ks_threshold: float = Field(default=DensityConfig.KS_THRESHOLD, gt=0, le=1)
    moment_tolerance: float = Field(default=DensityConfig.MOMENT_TOLERANCE, gt=0)
    histogram_bins: int = Field(default=DensityConfig.HISTOGRAM_BINS, ge=1)


@dataclass(frozen=True)
class GridSpec:
    zmin: float
    zmax: float
    points: int


@dataclass(frozen=True)
class RunConfig:
    coeffs: PeriodicCoefficients
    scaling: ScalingSpec
    grid: GridSpec
    n: Optional[int] = None
    moments_max: Optional[int] = None
    format: OutputFormat = OutputFormat.CSV
    output: Optional[str] = None
    ks_threshold: float = DensityConfig.KS_THRESHOLD
    moment_tolerance: float = DensityConfig.MOMENT_TOLERANCE
    histogram_bins: int = DensityConfig.HISTOGRAM_BINS


def field_path(loc: Tuple[Any, ...]) -> str:
    """('b', 0) -> 'b[0]', ('phi', 'power', 'gamma') -> 'phi.gamma'"""
    parts = list(loc)
    if len(parts) > 1 and parts[0] == "phi" and parts[1] in PHI_TAGS:
        del parts[1]
    path = ""
    for part in parts:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def default_grid(coeffs: PeriodicCoefficients, scaling: ScalingSpec) -> GridSpec:
    """Scaled support padded on both sides"""
    lo, hi = scaled_support(band_structure(coeffs), scaling)
    pad = DensityConfig.GRID_PADDING * (hi - lo)
    return GridSpec(lo - pad, hi + pad, DensityConfig.DEFAULT_GRID_POINTS)


def _scaling_from(phi) -> ScalingSpec:
    try:
        if isinstance(phi, PowerPhi):
            return ScalingSpec.power(phi.gamma)
        if isinstance(phi, TablePhi):
            return ScalingSpec.tabulated(phi.points)
        return ScalingSpec.constant()
    except ScalingError as exc:
        field = exc.context.get("field")
        raise ConfigError(str(exc), field=f"phi.{field}" if field else "phi") from exc


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        document = ConfigDocument.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(first["msg"], field=field_path(first["loc"])) from exc

    try:
        coeffs = PeriodicCoefficients(document.t, tuple(document.a), tuple(document.b))
    except CoefficientError as exc:
        raise ConfigError(str(exc), field=exc.context.get("field")) from exc
    scaling = _scaling_from(document.phi)

    if document.grid is None:
        grid = default_grid(coeffs, scaling)
    else:
        grid = GridSpec(document.grid.zmin, document.grid.zmax, document.grid.points)
    return RunConfig(
        coeffs=coeffs,
        scaling=scaling,
        grid=grid,
        n=document.n,
        moments_max=document.moments_max,
        format=OutputFormat(document.format),
        output=document.output,
        ks_threshold=document.ks_threshold,
        moment_tolerance=document.moment_tolerance,
        histogram_bins=document.histogram_bins,
    )


def emit_config(config: RunConfig) -> str:
    """Canonical JSON; parse_config(emit_config(c)) == c"""
    data: Dict[str, Any] = {
        "t": config.coeffs.t,
        "a": list(config.coeffs.a),
        "b": list(config.coeffs.b),
        "phi": config.scaling.to_dict(),
        "grid": dataclasses.asdict(config.grid),
        "format": config.format.value,
        "ks_threshold": config.ks_threshold,
        "moment_tolerance": config.moment_tolerance,
        "histogram_bins": config.histogram_bins,
    }
    for key in ("n", "moments_max", "output"):
        value = getattr(config, key)
        if value is not None:
            data[key] = value
    return json.dumps(data, sort_keys=True)


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Command-line values replace config values; None means not given"""
    given = {k: v for k, v in overrides.items() if v is not None}
    grid = config.grid
    grid_changes = {k: given.pop(k) for k in ("zmin", "zmax", "points") if k in given}
    if grid_changes:
        grid = dataclasses.replace(grid, **grid_changes)
        ok, errors = ValidationChecker.check_grid(grid.zmin, grid.zmax, grid.points)
        if not ok:
            raise ConfigError("; ".join(errors), field="grid")
    if "n" in given and given["n"] < 1:
        raise ConfigError("n must be at least 1", field="n")
    if "moments_max" in given and given["moments_max"] < 0:
        raise ConfigError("moments_max must be nonnegative", field="moments_max")
    if "ks_threshold" in given and not 0.0 < given["ks_threshold"] <= 1.0:
        raise ConfigError("ks_threshold must lie in (0, 1]", field="ks_threshold")
    if "format" in given:
        given["format"] = OutputFormat(given["format"])
    return dataclasses.replace(config, grid=grid, **given)
