import os
from dataclasses import dataclass
from enum import Enum

from dotenv import load_dotenv

load_dotenv()


@dataclass
class DensityConfig:
    """Configuration for the density / spectrum pipeline"""
    # Quadrature
    QUAD_RTOL = 1e-8
    QUAD_INNER_RTOL = 1e-10
    QUAD_OUTER_RTOL = 1e-7
    QUAD_ATOL = 1e-14
    QUAD_MAX_NODES = 2 ** 14
    QUAD_T_MAX = 5.0
    GEOMETRIC_SPLIT_RATIO = 1e3

    # Band structure
    EDGE_RESIDUAL_TOL = 1e-12
    ROOT_IMAG_TOL = 1e-6
    TOUCH_TOL = 1e-10
    TOUCH_SNAP_WINDOW = 1e-7
    TOUCH_OFFSET = 1e-8
    MAX_PERIOD = 32

    # Density
    SUPPORT_EDGE_OFFSET = 1e-9
    DEFAULT_GRID_POINTS = 512
    GRID_PADDING = 0.025
    CDF_GRID_POINTS = 2049

    # Spectrum
    EIGEN_REL_TOL = 1e-12
    EIGEN_CHUNK_SIZE = 1024

    # Validation defaults
    KS_THRESHOLD = 0.05
    MOMENT_TOLERANCE = 0.02
    ORACLE_TOLERANCE = 1e-7
    DEFAULT_MAX_ORDER = 6
    HISTOGRAM_BINS = 40

    # Runtime settings
    THREADS = int(os.getenv("JACOBI_DENSITY_THREADS", "1"))
    LOG_LEVEL = os.getenv("JACOBI_DENSITY_LOG_LEVEL", "INFO").upper()
    DEBUG = os.getenv("DEBUG", "False").lower() == "true"


class ScalingKind(Enum):
    CONSTANT = "constant"
    POWER = "power"
    TABULATED = "table"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class Subcommand(Enum):
    BANDS = "bands"
    DENSITY = "density"
    SPECTRUM = "spectrum"
    VALIDATE = "validate"
    MOMENTS = "moments"
    PLOT = "plot"


def resolve_threads(cli_value=None) -> int:
    """Thread count: CLI flag, then JACOBI_DENSITY_THREADS, then 1"""
    if cli_value is not None:
        return max(int(cli_value), 1)
    env_value = os.getenv("JACOBI_DENSITY_THREADS")
    if env_value:
        return max(int(env_value), 1)
    return max(DensityConfig.THREADS, 1)
