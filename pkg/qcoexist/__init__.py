"""
Application factory and global configuration.

Creates the Flask app that hosts the qcoexist command-line interface: loads
.env, applies the selected config object, validates the numeric settings,
configures logging and registers the CLI commands. Physics lives in
qcoexist.services; nothing here touches it.
"""

from __future__ import annotations
import os
from flask import Flask
from dotenv import load_dotenv


def _validate_runtime_config(app: Flask, cfg_path: str) -> None:
    """
    Validate numeric settings before any command runs.

    Raises RuntimeError listing every bad setting, so a typo in an
    environment variable fails at startup instead of deep inside a sweep.

    Checks:
    - SWEEP_WORKERS >= 1
    - RAMAN_TEMPERATURE_K > 0
    - CALIBRATION_RTOL, CROSSOVER_TOLERANCE_DB > 0
    - CALIBRATION_MAXITER >= 1

    Args:
        app: Flask application instance
        cfg_path: Config path being used (e.g., "qcoexist.config.ProdConfig")
    """
    errors = []

    if app.config.get("SWEEP_WORKERS", 1) < 1:
        errors.append("SWEEP_WORKERS must be >= 1")
    if app.config.get("RAMAN_TEMPERATURE_K", 293.0) <= 0:
        errors.append("RAMAN_TEMPERATURE_K must be > 0 kelvin")
    if app.config.get("CALIBRATION_RTOL", 1e-6) <= 0:
        errors.append("CALIBRATION_RTOL must be > 0")
    if app.config.get("CALIBRATION_MAXITER", 200) < 1:
        errors.append("CALIBRATION_MAXITER must be >= 1")
    if app.config.get("CROSSOVER_TOLERANCE_DB", 0.1) <= 0:
        errors.append("CROSSOVER_TOLERANCE_DB must be > 0 dB")

    if errors:
        error_msg = f"\n\n[ERROR] CONFIG VALIDATION FAILED ({cfg_path}):\n\n" + "\n".join(f"  * {err}" for err in errors)
        raise RuntimeError(error_msg)

    app.logger.debug("[OK] Runtime config validation passed")


def create_app() -> Flask:
    # override=False so real environment variables win over a stale .env file
    load_dotenv(override=False)

    app = Flask(__name__)

    cfg_path = os.getenv("QCOEXIST_CONFIG", "qcoexist.config.ProdConfig")
    try:
        app.config.from_object(cfg_path)
    except (ImportError, AttributeError) as e:
        app.logger.warning(f"Could not load config object {cfg_path}: {e}")
        app.config.from_object("qcoexist.config.ProdConfig")

    _validate_runtime_config(app, cfg_path)

    app.logger.setLevel(app.config.get("LOG_LEVEL", "INFO"))

    from .cli import register_commands
    register_commands(app)

    return app
