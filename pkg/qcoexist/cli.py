"""
Command-line interface.

Usage:
    qcoexist placement    --config run.json --out results/   # best/worst band spacing
    qcoexist sweep        --config run.json --preset hcnanf  # SKR/QBER vs coexistence power
    qcoexist characterize --config run.json                  # no-fibre, leakage-only mode
    qcoexist crossover    --config run.json                  # power where FWM overtakes Raman
    qcoexist validate     --config run.json                  # check the document, run nothing

Exit codes: 0 success, 2 invalid configuration, 3 model failure. Every
command calibrates the zero-coexistence baseline first, then writes a CSV
table and a <command>.meta.json sidecar into the output directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import click
from flask import Flask, current_app, has_app_context
from flask.cli import FlaskGroup, with_appcontext

from .config import BaseConfig
from .constants import COMMANDS, EXIT_OK
from .services import planner
from .services.link import FibreSpec
from .services.planner import Environment, Scenario
from .services.spectra import RamanSpectrum, default_spectrum, read_spectrum_file
from .utils import results
from .utils.errors import (
    ConfigError,
    ModelError,
    QcoexistError,
    UnreadableFile,
    exit_code_for,
    log_info,
    log_warning,
)
from .utils.validation import (
    ScenarioConfig,
    apply_presets,
    canonical_document,
    load_config,
    read_document,
    validate_document,
)


def _get_config(key: str, default):
    """Read an app setting, falling back to BaseConfig outside an app context."""
    if has_app_context():
        return current_app.config.get(key, default)
    return getattr(BaseConfig, key, default)


@dataclass(frozen=True)
class RunContext:
    config: ScenarioConfig
    scenario: Scenario
    env: Environment

    @property
    def fibre(self) -> FibreSpec:
        return self.scenario.fibre


def _load_spectrum(config: ScenarioConfig) -> RamanSpectrum:
    temperature = config.raman.temperature_k or _get_config("RAMAN_TEMPERATURE_K", 293.0)
    table_path = config.raman.table_path or _get_config("RAMAN_TABLE_PATH", "")
    if not table_path:
        return default_spectrum(float(temperature))
    try:
        return read_spectrum_file(table_path, float(temperature))
    except OSError as e:
        raise ConfigError(f"raman.table_path: cannot read '{table_path}' ({e.strerror or e})") from e
    except ModelError as e:
        raise ConfigError(f"raman.table_path: {e}") from e


def build_context(config: ScenarioConfig) -> RunContext:
    """Turn a validated config into domain objects and calibrate the baseline."""
    band = config.scenario
    scenario = Scenario(band.name, config.fibre.to_spec(), tuple(band.classical_freqs_thz))
    target_skr, target_qber = config.calibration_targets()

    env = planner.calibrated_environment(
        _load_spectrum(config),
        config.detector.to_spec(),
        config.filter_chain.to_chain(),
        config.cow.to_params(),
        target_skr,
        target_qber,
        quantum_freq=band.quantum_freq_thz,
        n_channels=len(band.classical_freqs_thz),
        pitch_ghz=config.sweep.pitch_ghz,
        workers=int(_get_config("SWEEP_WORKERS", 1)),
        rtol=float(_get_config("CALIBRATION_RTOL", 1e-6)),
        maxiter=int(_get_config("CALIBRATION_MAXITER", 200)),
    )
    return RunContext(config=config, scenario=scenario, env=env)


def _base_metadata(ctx: RunContext) -> dict:
    target_skr, target_qber = ctx.config.calibration_targets()
    return {
        "config": canonical_document(ctx.config),
        "calibration": {
            "target_skr_bps": target_skr,
            "target_qber": target_qber,
            "cow": asdict(ctx.env.cow),
        },
    }


def _run_placement(ctx: RunContext, out_dir: str, prefix: str) -> list[str]:
    sweep = ctx.config.sweep
    result = planner.best_worst_spacing(
        sweep.placement_power_dbm,
        ctx.fibre,
        ctx.env,
        (sweep.spacing_min_ghz, sweep.spacing_max_ghz),
        sweep.spacing_step_ghz,
    )
    meta = _base_metadata(ctx)
    meta["placement"] = {
        "power_dbm": result.power_dbm,
        "best_spacing_ghz": result.best_spacing,
        "worst_spacing_ghz": result.worst_spacing,
        "degenerate": result.degenerate,
        "objective": result.objective,
    }
    return [
        results.write_csv(results.placement_frame(result), out_dir, f"{prefix}placement.csv"),
        results.write_metadata(out_dir, f"{prefix}placement.meta.json", "placement", meta),
    ]


def _run_sweep(ctx: RunContext, out_dir: str, prefix: str) -> list[str]:
    powers = ctx.config.sweep.powers_dbm
    curve = planner.power_sweep(ctx.scenario, powers, ctx.env)
    classical = ctx.config.classical
    margins = planner.classical_margins(
        ctx.scenario, powers, classical.rx_losses_db, classical.effective_sensitivity_dbm, ctx.env
    )
    if any(m < 0 for m in margins):
        log_warning("[CLI] classical link infeasible at some swept powers", scenario=ctx.scenario.name)

    meta = _base_metadata(ctx)
    meta["sweep"] = {
        "scenario": curve.scenario,
        "fibre": curve.fibre,
        "spacing_ghz": curve.spacing_ghz,
        "classical_sensitivity_dbm": classical.effective_sensitivity_dbm,
        "classical_min_margin_db": margins,
    }
    return [
        results.write_csv(results.sweep_frame(curve), out_dir, f"{prefix}sweep.csv"),
        results.write_metadata(out_dir, f"{prefix}sweep.meta.json", "sweep", meta),
    ]


def _run_characterize(ctx: RunContext, out_dir: str, prefix: str) -> list[str]:
    sweep = ctx.config.sweep
    curves = planner.characterization_sweep(
        sweep.powers_dbm, ctx.env, ctx.scenario.classical_freqs, sweep.channel_counts, tag=ctx.scenario.name
    )
    meta = _base_metadata(ctx)
    meta["characterize"] = {"fibre": None, "channel_counts": list(sweep.channel_counts)}
    return [
        results.write_csv(results.characterize_frame(curves), out_dir, f"{prefix}characterize.csv"),
        results.write_metadata(out_dir, f"{prefix}characterize.meta.json", "characterize", meta),
    ]


def _run_crossover(ctx: RunContext, out_dir: str, prefix: str) -> list[str]:
    spacing = ctx.config.sweep.crossover_spacing_ghz or ctx.scenario.spacing_ghz(ctx.env.quantum_freq)
    crossing = planner.crossover_power(
        spacing, ctx.fibre, ctx.env, tol_db=float(_get_config("CROSSOVER_TOLERANCE_DB", 0.1))
    )
    meta = _base_metadata(ctx)
    meta["crossover"] = {"spacing_ghz": spacing, "crossover_dbm": crossing}
    return [
        results.write_csv(results.crossover_frame(spacing, crossing), out_dir, f"{prefix}crossover.csv"),
        results.write_metadata(out_dir, f"{prefix}crossover.meta.json", "crossover", meta),
    ]


_RUNNERS: dict[str, Callable[[RunContext, str, str], list[str]]] = {
    "placement": _run_placement,
    "sweep": _run_sweep,
    "characterize": _run_characterize,
    "crossover": _run_crossover,
}


def _report(error: QcoexistError) -> int:
    if isinstance(error, ConfigError):
        for diagnostic in error.diagnostics:
            click.echo(f"error: {diagnostic}", err=True)
    else:
        click.echo(f"model error: {error}", err=True)
    log_warning(f"[CLI] run failed: {error}", error_type=type(error).__name__)
    return exit_code_for(error)


def run(
    command: str,
    config_path: str,
    out_dir: str | None = None,
    presets: Iterable[str] = (),
    seed: int | None = None,
) -> int:
    """
    Run one command against a config document.

    Args:
        command: One of placement, sweep, characterize, crossover
        config_path: Path to the JSON config document
        out_dir: Output directory (default: output.directory from the config)
        presets: Preset names overriding config sections
        seed: Accepted for interface stability; the model is deterministic

    Returns:
        Process exit code (0, 2 or 3)
    """
    if command not in _RUNNERS:
        click.echo(f"error: command: unknown command '{command}' (expected one of {', '.join(COMMANDS)})", err=True)
        return exit_code_for(ConfigError("command"))
    if seed is not None:
        log_info("[CLI] --seed ignored; the model is deterministic", seed=seed)

    try:
        config = load_config(config_path, presets)
        ctx = build_context(config)
        target = out_dir or config.output.directory or _get_config("RESULTS_DIR", "results")
        written = _RUNNERS[command](ctx, target, config.output.prefix)
    except (ConfigError, ModelError) as e:
        return _report(e)

    for path in written:
        click.echo(f"wrote {path}")
    log_info(f"[CLI] {command} finished", config=os.path.basename(config_path), files=len(written))
    return EXIT_OK


def validate(config_path: str, presets: Iterable[str] = ()) -> list[str]:
    """
    Validate a config document without running any physics.

    Raises:
        UnreadableFile: the document cannot be read
    """
    try:
        document = apply_presets(read_document(config_path), presets)
    except UnreadableFile:
        raise
    except ConfigError as e:
        return e.diagnostics
    return validate_document(document)


def _run_options(func: Callable) -> Callable:
    func = click.option("--seed", type=int, default=None, help="Reserved; the model is deterministic.")(func)
    func = click.option("--preset", "presets", multiple=True, help="Preset name overriding a config section.")(func)
    func = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                        help="Output directory (default: output.directory).")(func)
    func = click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
                        help="JSON config document.")(func)
    return func


def _make_command(name: str, summary: str) -> click.Command:
    @click.command(name, help=summary)
    @_run_options
    @with_appcontext
    def command(config_path: str, out_dir: str | None, presets: tuple[str, ...], seed: int | None) -> None:
        code = run(name, config_path, out_dir, presets, seed)
        if code:
            raise SystemExit(code)

    return command


placement_command = _make_command("placement", "Find the best and worst classical band spacing.")
sweep_command = _make_command("sweep", "Key rate and QBER against total coexistence power.")
characterize_command = _make_command("characterize", "No-fibre leakage characterization.")
crossover_command = _make_command("crossover", "Coexistence power where FWM overtakes Raman noise.")


@click.command("validate")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False), help="JSON config document.")
@click.option("--preset", "presets", multiple=True, help="Preset name overriding a config section.")
@with_appcontext
def validate_command(config_path: str, presets: tuple[str, ...]) -> None:
    """Validate a config document without running the model."""
    try:
        diagnostics = validate(config_path, presets)
    except ConfigError as e:
        raise SystemExit(_report(e))

    if diagnostics:
        for diagnostic in diagnostics:
            click.echo(f"error: {diagnostic}", err=True)
        raise SystemExit(exit_code_for(ConfigError(diagnostics)))
    click.echo(json.dumps({"valid": True, "config": config_path}))


CLI_COMMANDS = (placement_command, sweep_command, characterize_command, crossover_command, validate_command)


def register_commands(app: Flask) -> None:
    for command in CLI_COMMANDS:
        app.cli.add_command(command)


def _create_app() -> Flask:
    from . import create_app
    return create_app()


main = FlaskGroup(
    name="qcoexist",
    help="DWDM/DV-QKD coexistence noise simulator and placement planner.",
    create_app=_create_app,
    add_default_commands=False,
    add_version_option=False,
)
