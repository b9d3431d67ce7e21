"""
Result writers: plot-ready CSV tables and a JSON metadata sidecar.

CSV files hold only deterministic numbers (scientific notation, 9 significant
digits, header row) so identical configs give byte-identical tables.
Timestamps and run context go to <name>.meta.json next to each table.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from typing import Any, Sequence

import pandas as pd

from ..constants import (
    CHARACTERIZE_COLUMNS,
    CROSSOVER_COLUMNS,
    CSV_FLOAT_FORMAT,
    PLACEMENT_COLUMNS,
    SWEEP_COLUMNS,
)
from ..services.planner import PlacementResult, SweepCurve
from .errors import ConfigError


def sweep_frame(curve: SweepCurve) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "power_dBm": curve.powers_dbm,
            "skr_bps": curve.skr_bps,
            "qber": curve.qber,
            "raman_cps": curve.raman_cps,
            "fwm_cps": curve.fwm_cps,
            "leakage_cps": curve.leakage_cps,
        },
        columns=SWEEP_COLUMNS,
    ).astype(float)


def characterize_frame(curves: Sequence[SweepCurve]) -> pd.DataFrame:
    frames = []
    for curve in curves:
        frame = sweep_frame(curve)
        frame.insert(0, "channels", curve.channels)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)[CHARACTERIZE_COLUMNS]


def placement_frame(result: PlacementResult) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "spacing_ghz": result.spacing_grid,
            "raman_cps": result.raman_counts,
            "fwm_cps": result.fwm_counts,
            "leakage_cps": result.leakage_counts,
            "total_cps": result.noise_totals,
            "qber": result.qber,
        },
        columns=PLACEMENT_COLUMNS,
    ).astype(float)


def crossover_frame(spacing_ghz: float, crossover_dbm: float) -> pd.DataFrame:
    return pd.DataFrame([[spacing_ghz, crossover_dbm]], columns=CROSSOVER_COLUMNS).astype(float)


def _unwritable(out_dir: str, error: OSError) -> ConfigError:
    return ConfigError(f"output.directory: cannot write to '{out_dir}' ({error.strerror or error})")


def _output_path(out_dir: str, filename: str) -> str:
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise _unwritable(out_dir, e) from e
    return os.path.join(out_dir, filename)


def write_csv(frame: pd.DataFrame, out_dir: str, filename: str) -> str:
    """
    Write a table to out_dir/filename, creating the directory.

    Raises:
        ConfigError: out_dir cannot be created or written
    """
    path = _output_path(out_dir, filename)
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise _unwritable(out_dir, e) from e
    return path


def write_metadata(out_dir: str, filename: str, command: str, payload: dict[str, Any]) -> str:
    """Write the metadata sidecar; the only place a timestamp is recorded."""
    path = _output_path(out_dir, filename)
    document = {
        "command": command,
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **payload,
    }
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f, sort_keys=True, indent=2)
            f.write("\n")
    except OSError as e:
        raise _unwritable(out_dir, e) from e
    return path
