"""
Bundled preset library (fibres, channel scenarios, filter chains, detectors,
COW templates, per-scenario calibration targets) and accessors that turn
preset entries into domain objects.
"""

from __future__ import annotations

import copy

from .cache import cache_asset
from .data import load_data_file

PRESETS_FILE = "presets.json"

# config section -> library family
PRESET_FAMILIES = {
    "fibre": "fibres",
    "scenario": "scenarios",
    "filter_chain": "filter_chains",
    "detector": "detectors",
    "cow": "cow",
}

# Numeric scenario shorthands accepted in config documents
SCENARIO_ALIASES = {1: "s1_200GHz", 2: "s2_1THz"}

DEFAULT_SCENARIO = "s1_200GHz"
DEFAULT_FILTER_CHAIN = "table1_chain"
DEFAULT_DETECTOR = "gated_apd"
DEFAULT_COW = "cow_default"
CUSTOM_CALIBRATION = "custom"


@cache_asset
def _library() -> dict:
    return load_data_file(PRESETS_FILE)


def preset_names(section: str) -> list[str]:
    """Sorted preset names for a config section ("fibre", "scenario", ...)."""
    return sorted(_library().get(PRESET_FAMILIES[section], {}))


def get_preset(section: str, name: str) -> dict | None:
    """Copy of one preset entry, or None when the name is unknown."""
    entry = _library().get(PRESET_FAMILIES[section], {}).get(name)
    return copy.deepcopy(entry) if entry is not None else None


def find_preset_section(name: str) -> str | None:
    """Config section a preset name belongs to (first match wins)."""
    for section in PRESET_FAMILIES:
        if get_preset(section, name) is not None:
            return section
    return None


def calibration_targets(scenario_name: str) -> tuple[float, float]:
    """(target_skr_bps, target_qber) for a scenario, falling back to the custom entry."""
    table = _library().get("calibration", {})
    entry = table.get(scenario_name) or table[CUSTOM_CALIBRATION]
    return float(entry["target_skr_bps"]), float(entry["target_qber"])
