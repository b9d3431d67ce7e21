"""
Scenario configuration documents: schema, validation and canonical dumps.

A config document is JSON. Sections may name a bundled preset ("fibre":
"hcnanf") or spell the values out inline; presets are expanded before
validation, so a validated ScenarioConfig always holds concrete values.
Validation problems are reported as "dotted.field.path: message" strings.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..constants import CONFIG_SIGNIFICANT_DIGITS, QUANTUM_FREQ_THZ, SENSITIVITY_DBM
from ..services.link import DetectorSpec, FibreSpec, FilterChain, FilterStage
from ..services.qkd import CowParams
from .errors import ConfigError, UnreadableFile
from .presets import (
    DEFAULT_COW,
    DEFAULT_DETECTOR,
    DEFAULT_FILTER_CHAIN,
    DEFAULT_SCENARIO,
    SCENARIO_ALIASES,
    calibration_targets,
    find_preset_section,
    get_preset,
    preset_names,
)
from .units import thz_to_hz


def _resolve(section: str, value: Any) -> Any:
    """Swap a preset name for its entry; leave inline values untouched."""
    if section == "scenario" and isinstance(value, int) and not isinstance(value, bool):
        value = SCENARIO_ALIASES.get(value, value)
    if isinstance(value, str):
        entry = get_preset(section, value)
        if entry is None:
            known = ", ".join(preset_names(section))
            raise ValueError(f"unknown {section} preset '{value}' (known: {known})")
        return entry
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FibreConfig(_Section):
    name: str = "custom"
    length_km: float = Field(gt=0)
    attenuation_db_per_km: float = Field(ge=0)
    gamma_per_w_km: float = Field(ge=0)
    dispersion_ps_nm_km: float
    raman_scale: float = Field(1.0, ge=0)
    fwm_scale: float = Field(1.0, ge=0)

    def to_spec(self) -> FibreSpec:
        return FibreSpec(**self.model_dump())


class BandConfig(_Section):
    name: str = "custom"
    quantum_freq_thz: float = Field(QUANTUM_FREQ_THZ, gt=0)
    classical_freqs_thz: tuple[float, ...] = Field(min_length=1)

    @field_validator("classical_freqs_thz")
    @classmethod
    def _check_channel_grid(cls, freqs: tuple[float, ...], info) -> tuple[float, ...]:
        grid = [thz_to_hz(f) for f in freqs]
        if any(f <= 0 for f in freqs):
            raise ValueError("classical frequencies must be > 0 THz")
        if len(set(grid)) != len(grid):
            raise ValueError("classical frequencies must be distinct")
        quantum = info.data.get("quantum_freq_thz")
        if quantum is not None and thz_to_hz(quantum) in grid:
            raise ValueError(
                f"quantum frequency {quantum} THz appears in the classical list"
            )
        return freqs


class FilterStageConfig(_Section):
    name: str = "stage"
    center_thz: float = Field(gt=0)
    bandwidth_ghz: float = Field(gt=0)
    shape: Literal["flat_top", "gaussian"] = "flat_top"
    insertion_loss_db: float = Field(0.0, ge=0)
    isolation_db: float = Field(0.0, ge=0)


class FilterChainConfig(_Section):
    name: str = "custom"
    tx: tuple[FilterStageConfig, ...] = ()
    rx: tuple[FilterStageConfig, ...] = Field(min_length=1)

    def to_chain(self) -> FilterChain:
        return FilterChain(
            tx=tuple(FilterStage(**stage.model_dump()) for stage in self.tx),
            rx=tuple(FilterStage(**stage.model_dump()) for stage in self.rx),
            name=self.name,
        )


class DetectorConfig(_Section):
    name: str = "custom"
    gate_duration_s: float = Field(100e-12, gt=0)
    efficiency: float = Field(0.7, ge=0, le=1)
    gate_rate_hz: float = Field(1e10, ge=0)
    dark_count_prob: float = Field(1e-8, ge=0, le=1)

    def to_spec(self) -> DetectorSpec:
        return DetectorSpec(**self.model_dump())


class CowConfig(_Section):
    pulse_rate_hz: float = Field(gt=0)
    mean_photon_number: float = Field(0.1, ge=0)
    intrinsic_error: float = Field(0.0, ge=0, le=0.5)
    sifting_ratio: float = Field(1.0, gt=0, le=1)
    ec_efficiency: float = Field(1.16, ge=1)
    qber_cutoff: float = Field(0.052, gt=0, lt=0.5)
    channel_loss_db: float = Field(10.5, ge=0)

    def to_params(self) -> CowParams:
        return CowParams(**self.model_dump())


class CalibrationConfig(_Section):
    target_skr_bps: float = Field(gt=0)
    target_qber: float = Field(ge=0, lt=0.5)


class SweepConfig(_Section):
    powers_dbm: tuple[float, ...] = Field((-24.0, -20.0, -16.0, -12.0, -8.0, -4.0, 0.0), min_length=1)
    placement_power_dbm: float = -24.0
    spacing_min_ghz: float = Field(100.0, gt=0)
    spacing_max_ghz: float = Field(3000.0, gt=0)
    spacing_step_ghz: float = Field(50.0, gt=0)
    pitch_ghz: float = Field(50.0, gt=0)
    crossover_spacing_ghz: float | None = Field(None, gt=0)
    channel_counts: tuple[int, ...] = Field((8,), min_length=1)

    @field_validator("spacing_max_ghz")
    @classmethod
    def _range_not_empty(cls, value: float, info) -> float:
        low = info.data.get("spacing_min_ghz")
        if low is not None and value < low:
            raise ValueError(f"must be >= spacing_min_ghz ({low})")
        return value

    @field_validator("channel_counts")
    @classmethod
    def _positive_counts(cls, counts: tuple[int, ...]) -> tuple[int, ...]:
        if any(c < 1 for c in counts):
            raise ValueError("channel counts must be >= 1")
        return counts


class ClassicalConfig(_Section):
    rx_losses_db: float = Field(5.0, ge=0)
    modulation: Literal["16qam", "pm_qpsk"] = "16qam"
    sensitivity_dbm: float | None = None

    @property
    def effective_sensitivity_dbm(self) -> float:
        if self.sensitivity_dbm is not None:
            return self.sensitivity_dbm
        return SENSITIVITY_DBM[self.modulation]


class RamanConfig(_Section):
    table_path: str | None = None
    temperature_k: float | None = Field(None, gt=0)


class OutputConfig(_Section):
    directory: str = "results"
    prefix: str = ""


class ScenarioConfig(_Section):
    """Complete, validated run configuration."""

    fibre: FibreConfig
    scenario: BandConfig = DEFAULT_SCENARIO  # type: ignore[assignment]
    filter_chain: FilterChainConfig = DEFAULT_FILTER_CHAIN  # type: ignore[assignment]
    detector: DetectorConfig = DEFAULT_DETECTOR  # type: ignore[assignment]
    cow: CowConfig = DEFAULT_COW  # type: ignore[assignment]
    calibration: CalibrationConfig | None = None
    sweep: SweepConfig = SweepConfig()
    classical: ClassicalConfig = ClassicalConfig()
    raman: RamanConfig = RamanConfig()
    output: OutputConfig = OutputConfig()

    model_config = ConfigDict(extra="forbid", frozen=True, validate_default=True)

    @field_validator("fibre", "scenario", "filter_chain", "detector", "cow", mode="before")
    @classmethod
    def _expand_presets(cls, value: Any, info) -> Any:
        return _resolve(info.field_name, value)

    def calibration_targets(self) -> tuple[float, float]:
        """Explicit targets, else the bundled targets for the scenario."""
        if self.calibration is not None:
            return self.calibration.target_skr_bps, self.calibration.target_qber
        return calibration_targets(self.scenario.name)


def _format_location(loc: Iterable[Any]) -> str:
    return ".".join(str(part) for part in loc) or "(document)"


def diagnostics_from(error: ValidationError) -> list[str]:
    """One "field.path: message" line per pydantic error."""
    return [f"{_format_location(item['loc'])}: {item['msg']}" for item in error.errors()]


def apply_presets(document: dict, names: Iterable[str]) -> dict:
    """
    Override config sections with named presets (--preset on the CLI).

    Raises:
        ConfigError: a name matches no preset
    """
    merged = dict(document)
    problems = []
    for name in names:
        section = find_preset_section(name)
        if section is None:
            problems.append(f"--preset: unknown preset '{name}'")
            continue
        merged[section] = name
    if problems:
        raise ConfigError(problems)
    return merged


def validate_document(document: Any) -> list[str]:
    """Validate a parsed config document; an empty list means valid."""
    if not isinstance(document, dict):
        return ["(document): top level must be a JSON object"]
    try:
        ScenarioConfig.model_validate(document)
    except ValidationError as e:
        return diagnostics_from(e)
    return []


def read_document(config_path: str) -> dict:
    """
    Read and parse a config document.

    Raises:
        UnreadableFile: the file cannot be opened
        ConfigError: the text is not UTF-8 JSON with an object at the top level
    """
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise UnreadableFile(f"{config_path}: cannot read config ({e.strerror or e})") from e
    except UnicodeDecodeError as e:
        raise ConfigError(f"(document): not UTF-8 text ({e.reason} at byte {e.start})") from e
    return parse_document(text)


def parse_document(text: str) -> dict:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"(document): invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(document, dict):
        raise ConfigError("(document): top level must be a JSON object")
    return document


def load_config_text(text: str, presets: Iterable[str] = ()) -> ScenarioConfig:
    """Parse, apply preset overrides and validate."""
    document = apply_presets(parse_document(text), presets)
    try:
        return ScenarioConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(diagnostics_from(e)) from e


def load_config(config_path: str, presets: Iterable[str] = ()) -> ScenarioConfig:
    document = apply_presets(read_document(config_path), presets)
    try:
        return ScenarioConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(diagnostics_from(e)) from e


def _canonical(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{CONFIG_SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {key: _canonical(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(item) for item in value]
    return value


def canonical_document(config: ScenarioConfig) -> dict:
    """Plain-JSON form of a config with floats rounded to 12 significant digits."""
    return _canonical(config.model_dump(mode="json"))


def dump_config(config: ScenarioConfig) -> str:
    """Canonical JSON text: sorted keys, 12 significant digits, trailing newline."""
    return json.dumps(canonical_document(config), sort_keys=True, indent=2) + "\n"
