"""Tables, writers and the render script used by the pipeline stages."""
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from bands import BandStructure
from config import OutputFormat
from density import DensityCurve
from moments import MomentReport
from spectrum import SpectrumResult

DENSITY_COLUMNS = ["z", "rho", "singular"]
BAND_COLUMNS = ["band", "mu", "nu"]
MOMENT_COLUMNS = ["M", "K_M", "omega_factor", "m_theory", "m_empirical", "abs_error"]


class TableBuilder:
    """DataFrames with the fixed column layout of every output table"""

    @staticmethod
    def bands(bands: BandStructure) -> pd.DataFrame:
        rows = [(i + 1, mu, nu) for i, (mu, nu) in enumerate(bands.bands)]
        return pd.DataFrame(rows, columns=BAND_COLUMNS)

    @staticmethod
    def coefficients(bands: BandStructure) -> pd.DataFrame:
        """Coefficients of S in increasing powers"""
        coef = bands.S.coef
        return pd.DataFrame({"power": np.arange(coef.size), "coefficient": coef})

    @staticmethod
    def density(curve: DensityCurve) -> pd.DataFrame:
        data = {"z": curve.z, "rho": curve.rho, "singular": curve.singular.astype(int)}
        return pd.DataFrame(data, columns=DENSITY_COLUMNS)

    @staticmethod
    def spectrum(spec: SpectrumResult) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(1, spec.values.size + 1), "z": spec.values})

    @staticmethod
    def histogram(rows: np.ndarray) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=["center", "density"])

    @staticmethod
    def moments(reports: Sequence[MomentReport]) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in reports], columns=MOMENT_COLUMNS)

    @staticmethod
    def validation(rows: List[Dict[str, Any]]) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=["check", "value", "threshold", "passed"])


def _json_value(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def frame_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """Rows as JSON-safe dicts; non-finite numbers become null"""
    records = []
    for row in frame.to_dict(orient="records"):
        record = {key: _json_value(value) for key, value in row.items()}
        if "singular" in record:
            record["singular"] = bool(record.get("singular"))
        records.append(record)
    return records


class ResultWriter:
    """Writes the tables of one stage result, all at once"""

    def __init__(self, output_format: OutputFormat, output: Optional[str] = None):
        self.output_format = output_format
        self.output = output

    @staticmethod
    def to_csv(frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, lineterminator="\n")

    def secondary_path(self, table: str) -> Path:
        path = Path(self.output)
        return path.with_name(f"{path.stem}.{table}.csv")

    def write(self, tables: Dict[str, pd.DataFrame], primary: str,
              extra: Optional[Dict[str, Any]] = None) -> List[Path]:
        """Primary table to the output path (stdout when unset), the rest next to it"""
        if self.output_format == OutputFormat.JSON:
            document = {name: frame_records(frame) for name, frame in tables.items()}
            document.update(extra or {})
            self._emit(json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n")
            return [Path(self.output)] if self.output else []

        written = []
        self._emit(self.to_csv(tables[primary]))
        if self.output:
            written.append(Path(self.output))
            for name, frame in tables.items():
                if name == primary:
                    continue
                path = self.secondary_path(name)
                path.write_text(self.to_csv(frame))
                written.append(path)
        return written

    def _emit(self, text: str) -> None:
        if self.output:
            Path(self.output).write_text(text)
        else:
            sys.stdout.write(text)


class RenderScriptBuilder:
    """Plain-text gnuplot script drawing rho(z) and, optionally, the eigenvalue histogram"""

    @staticmethod
    def gnuplot(density_csv: str, histogram_csv: Optional[str] = None,
                title: str = "eigenvalue density", image: str = "density.png") -> str:
        lines = [
            "set datafile separator ','",
            "set datafile missing 'inf'",
            "set key autotitle columnhead",
            "set terminal pngcairo size 900,600",
            f"set output '{image}'",
            f"set title '{title}'",
            "set xlabel 'z'",
            "set ylabel 'rho(z)'",
            "set style fill transparent solid 0.35 noborder",
        ]
        plot = [f"'{density_csv}' using 1:2 with lines lw 2 title 'rho(z)'"]
        if histogram_csv is not None:
            plot.insert(0, f"'{histogram_csv}' using 1:2 with boxes title 'eigenvalues'")
        lines.append("plot " + ", \\\n     ".join(plot))
        return "\n".join(lines) + "\n"
