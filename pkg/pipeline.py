import asyncio
import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from bands import BandStructure, band_structure
from config import DensityConfig, Subcommand
from run_config import RunConfig


@dataclass
class StageResult:
    name: str
    primary: str
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    passed: bool = True
    messages: List[str] = field(default_factory=list)
    script: Optional[str] = None


class RunContext:
    """Configuration plus artifacts shared between stages of one run"""

    def __init__(self, config: RunConfig, executor: ThreadPoolExecutor):
        self.config = config
        self.executor = executor
        self._bands: Optional[BandStructure] = None

    @property
    def bands(self) -> BandStructure:
        if self._bands is None:
            self._bands = band_structure(self.config.coeffs)
        return self._bands

    async def offload(self, fn, *args, **kwargs):
        """Run blocking work off the event loop"""
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, functools.partial(fn, *args, **kwargs))


class BaseStage:
    """Base class for all pipeline stages"""

    def __init__(self, name: str):
        self.name = name
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logging.basicConfig(level=getattr(logging, DensityConfig.LOG_LEVEL, logging.INFO))
        return logging.getLogger(self.name)

    async def process(self, context: RunContext) -> StageResult:
        raise NotImplementedError("Subclasses must implement process method")


class PipelineOrchestrator(BaseStage):
    """Runs one subcommand against a parsed configuration"""

    def __init__(self, threads: int = 1):
        super().__init__("PipelineOrchestrator")
        self.threads = max(int(threads), 1)

        from stages import BandsStage, DensityStage, MomentsStage, PlotStage, SpectrumStage, ValidateStage

        self.stages: Dict[Subcommand, BaseStage] = {
            Subcommand.BANDS: BandsStage(),
            Subcommand.DENSITY: DensityStage(),
            Subcommand.SPECTRUM: SpectrumStage(),
            Subcommand.VALIDATE: ValidateStage(),
            Subcommand.MOMENTS: MomentsStage(),
            Subcommand.PLOT: PlotStage(),
        }

    async def run(self, subcommand: Subcommand, config: RunConfig) -> StageResult:
        stage = self.stages[subcommand]
        self.logger.info(f"running {subcommand.value} with {self.threads} thread(s)")
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            result = await stage.process(RunContext(config, executor))
        status = "passed" if result.passed else "failed"
        self.logger.info(f"{subcommand.value} {status}: {', '.join(result.tables)}")
        return result
