"""
Centralized configuration for all environments.

Select a config by setting:
  QCOEXIST_CONFIG=qcoexist.config.DevConfig      # local runs with debug logging
  QCOEXIST_CONFIG=qcoexist.config.ProdConfig     # default if unset
  QCOEXIST_CONFIG=qcoexist.config.TestConfig     # pytest

Notes:
- These are process-level settings. Physics inputs (fibre, band, filters,
  detector, sweep ranges) come from the scenario config document.
- RAMAN_TEMPERATURE_K and RAMAN_TABLE_PATH apply only when the document does
  not set raman.temperature_k / raman.table_path.
"""

from __future__ import annotations
import os


class BaseConfig:
    DEBUG = False
    TESTING = False
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Raman spectrum
    RAMAN_TEMPERATURE_K = float(os.getenv("RAMAN_TEMPERATURE_K", "293"))
    RAMAN_TABLE_PATH = os.getenv("RAMAN_TABLE_PATH", "")  # empty = bundled raman_silica_v1

    # Grid evaluation
    SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "4"))  # thread pool size for spacing/power grids

    # Root finding
    CALIBRATION_RTOL = float(os.getenv("CALIBRATION_RTOL", "1e-6"))
    CALIBRATION_MAXITER = int(os.getenv("CALIBRATION_MAXITER", "200"))
    CROSSOVER_TOLERANCE_DB = float(os.getenv("CROSSOVER_TOLERANCE_DB", "0.1"))

    # Output
    RESULTS_DIR = os.getenv("RESULTS_DIR", "results")  # used when neither --out nor output.directory is given


class ProdConfig(BaseConfig):
    """Default settings (selected if QCOEXIST_CONFIG is unset)."""
    pass


class DevConfig(BaseConfig):
    """Developer-friendly settings."""
    DEBUG = True
    LOG_LEVEL = "DEBUG"
    SWEEP_WORKERS = 1


class TestConfig(BaseConfig):
    """CI/pytest settings."""
    TESTING = True
    LOG_LEVEL = "WARNING"
    # Serial evaluation keeps tracebacks readable; results are identical either way
    SWEEP_WORKERS = 1
