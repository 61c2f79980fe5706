"""One stage per subcommand."""
import asyncio
from pathlib import Path

from config import DensityConfig
from density import DensityCdf, rho_curve
from errors import ConfigError
from moments import moment_table
from pipeline import BaseStage, RunContext, StageResult
from spectrum import histogram, ks_distance, scaled_spectrum
from tools import RenderScriptBuilder, TableBuilder
from validation_checkers import ValidationChecker


def _require_n(context: RunContext) -> int:
    if context.config.n is None:
        raise ConfigError("this subcommand needs a block count n", field="n")
    return context.config.n


class BandsStage(BaseStage):
    def __init__(self):
        super().__init__("BandsStage")

    async def process(self, context: RunContext) -> StageResult:
        bands = await context.offload(lambda: context.bands)
        self.logger.info(f"{bands.t} band(s), touching at {list(bands.touching_points)}")
        return StageResult(self.name, "bands", {
            "bands": TableBuilder.bands(bands),
            "coefficients": TableBuilder.coefficients(bands),
        })


class DensityStage(BaseStage):
    def __init__(self):
        super().__init__("DensityStage")

    async def process(self, context: RunContext) -> StageResult:
        config = context.config
        grid = config.grid
        curve = await context.offload(rho_curve, context.bands, config.scaling,
                                      grid.zmin, grid.zmax, grid.points, executor=context.executor)
        self.logger.info(f"evaluated rho at {grid.points} points, {int(curve.singular.sum())} singular")
        return StageResult(self.name, "density", {"density": TableBuilder.density(curve)})


class SpectrumStage(BaseStage):
    def __init__(self):
        super().__init__("SpectrumStage")

    async def process(self, context: RunContext) -> StageResult:
        config = context.config
        n = _require_n(context)
        spec = await context.offload(scaled_spectrum, config.coeffs, config.scaling, n,
                                     executor=context.executor)
        self.logger.info(f"{spec.values.size} eigenvalues in [{spec.values[0]:.6g}, {spec.values[-1]:.6g}]")
        return StageResult(self.name, "spectrum", {"spectrum": TableBuilder.spectrum(spec)})


class MomentsStage(BaseStage):
    def __init__(self):
        super().__init__("MomentsStage")

    async def process(self, context: RunContext) -> StageResult:
        config = context.config
        max_order = config.moments_max if config.moments_max is not None else DensityConfig.DEFAULT_MAX_ORDER
        spec = None
        if config.n is not None:
            spec = await context.offload(scaled_spectrum, config.coeffs, config.scaling, config.n,
                                         executor=context.executor)
        reports = moment_table(config.coeffs, config.scaling, max_order, spec)
        return StageResult(self.name, "moments", {"moments": TableBuilder.moments(reports)})


class ValidateStage(BaseStage):
    def __init__(self):
        super().__init__("ValidateStage")

    async def process(self, context: RunContext) -> StageResult:
        config = context.config
        n = _require_n(context)
        bands = context.bands
        max_order = config.moments_max if config.moments_max is not None else DensityConfig.DEFAULT_MAX_ORDER

        spec, cdf = await asyncio.gather(
            context.offload(scaled_spectrum, config.coeffs, config.scaling, n, executor=context.executor),
            context.offload(DensityCdf, bands, config.scaling, executor=context.executor),
        )
        distance = ks_distance(spec, bands, config.scaling, cdf)
        reports = moment_table(config.coeffs, config.scaling, max_order, spec)

        ks_ok, ks_errors = ValidationChecker.check_ks(distance, config.ks_threshold)
        moments_ok, moment_errors = ValidationChecker.check_moments(
            reports, config.moment_tolerance, config.coeffs.scale)
        oracle_ok, oracle_errors = ValidationChecker.check_oracle(
            config.coeffs, bands, max_order, DensityConfig.ORACLE_TOLERANCE)

        worst = max((r.abs_error / (config.moment_tolerance * config.coeffs.scale ** r.M)
                     for r in reports), default=0.0)
        rows = [
            {"check": "ks_distance", "value": distance, "threshold": config.ks_threshold, "passed": int(ks_ok)},
            {"check": "moments", "value": worst, "threshold": 1.0, "passed": int(moments_ok)},
            {"check": "oracle", "value": float(len(oracle_errors)), "threshold": 0.0, "passed": int(oracle_ok)},
        ]
        messages = ks_errors + moment_errors + oracle_errors
        for message in messages:
            self.logger.warning(message)
        self.logger.info(f"KS distance {distance:.4g} (threshold {config.ks_threshold:g})")
        return StageResult(self.name, "validation", {
            "validation": TableBuilder.validation(rows),
            "moments": TableBuilder.moments(reports),
        }, passed=ks_ok and moments_ok and oracle_ok, messages=messages)


class PlotStage(BaseStage):
    def __init__(self):
        super().__init__("PlotStage")

    async def process(self, context: RunContext) -> StageResult:
        config = context.config
        grid = config.grid
        output = Path(config.output or "density.csv")

        curve = await context.offload(rho_curve, context.bands, config.scaling,
                                      grid.zmin, grid.zmax, grid.points, executor=context.executor)
        tables = {"density": TableBuilder.density(curve)}
        histogram_csv = None
        if config.n is not None:
            spec = await context.offload(scaled_spectrum, config.coeffs, config.scaling, config.n,
                                         executor=context.executor)
            rows = histogram(spec, config.histogram_bins, grid.zmin, grid.zmax)
            tables["histogram"] = TableBuilder.histogram(rows)
            histogram_csv = f"{output.stem}.histogram.csv"
        script = RenderScriptBuilder.gnuplot(output.name, histogram_csv, image=f"{output.stem}.png")
        return StageResult(self.name, "density", tables, script=script)
