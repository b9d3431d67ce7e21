"""
Spontaneous Raman scattering spectrum.

Holds the tabulated Stokes scattering coefficient of the fibre as a function
of pump-to-probe detuning and derives the anti-Stokes branch from detailed
balance. The placement planner relies on the shape of this curve: a shallow
dip a few hundred GHz from the pump and a broad peak around 1.0-1.4 THz.

Coefficients are in 1/(km*GHz): the fraction of launch power scattered into
one GHz of receiver bandwidth per km of fibre.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Literal

import numpy as np

from ..constants import BOLTZMANN, DEFAULT_RAMAN_TABLE, DEFAULT_TEMPERATURE_K, HZ_PER_GHZ, PLANCK
from ..utils.cache import cache_asset
from ..utils.data import data_file_path
from ..utils.errors import (
    DuplicateDetuning,
    EmptyTable,
    ModelError,
    NegativeCoefficient,
    NegativeDetuning,
)

logger = logging.getLogger(__name__)

Branch = Literal["anti_stokes", "stokes"]
BRANCHES: tuple[str, ...] = ("anti_stokes", "stokes")


@dataclass(frozen=True)
class RamanSpectrum:
    """Immutable Raman table; detunings in GHz, coefficients in 1/(km*GHz)."""

    detunings: tuple[float, ...]
    coefficients_stokes: tuple[float, ...]
    temperature: float = DEFAULT_TEMPERATURE_K

    def __post_init__(self) -> None:
        if len(self.detunings) != len(self.coefficients_stokes):
            raise ModelError("detunings and coefficients must have equal length")
        if len(self.detunings) < 2:
            raise EmptyTable("Raman table needs at least 2 rows")
        if self.temperature <= 0:
            raise ModelError(f"temperature must be > 0 K, got {self.temperature}")
        if min(self.detunings) < 0:
            raise NegativeDetuning("Raman table detunings must be >= 0")
        if min(self.coefficients_stokes) < 0:
            raise NegativeCoefficient("Raman coefficients must be >= 0")
        steps = np.diff(self.detunings)
        if np.any(steps == 0):
            raise DuplicateDetuning("Raman table has duplicate detunings")
        if np.any(steps < 0):
            raise ModelError("Raman table detunings must be strictly ascending")

    @property
    def max_detuning(self) -> float:
        return self.detunings[-1]

    def scaled(self, factor: float) -> RamanSpectrum:
        """Copy with every coefficient multiplied by factor (>= 0)."""
        if factor < 0:
            raise NegativeCoefficient(f"scale factor must be >= 0, got {factor}")
        return replace(self, coefficients_stokes=tuple(c * factor for c in self.coefficients_stokes))

    def at_temperature(self, temperature: float) -> RamanSpectrum:
        return replace(self, temperature=float(temperature))


def detailed_balance_factor(detuning_ghz, temperature: float):
    """exp(-h*df/(k_B*T)), vectorised over detuning in GHz."""
    return np.exp(-PLANCK * np.asarray(detuning_ghz, dtype=float) * HZ_PER_GHZ / (BOLTZMANN * temperature))


def load_spectrum(table: Iterable[tuple[float, float]], temperature: float = DEFAULT_TEMPERATURE_K) -> RamanSpectrum:
    """
    Build a validated spectrum from (detuning GHz, Stokes coefficient) rows.

    Rows may arrive in any order; they are sorted by detuning on return.

    Args:
        table: Iterable of (detuning_ghz, stokes_coefficient) pairs
        temperature: Fibre temperature in kelvin

    Returns:
        RamanSpectrum with strictly ascending detunings

    Raises:
        EmptyTable: fewer than two rows
        NegativeCoefficient: a coefficient is negative
        NegativeDetuning: a detuning is negative
        DuplicateDetuning: the same detuning appears twice

    Examples:
        >>> load_spectrum([(40000, 0.0), (0, 0.0)]).detunings
        (0.0, 40000.0)
    """
    rows = [(float(d), float(c)) for d, c in table]
    if len(rows) < 2:
        raise EmptyTable(f"Raman table needs at least 2 rows, got {len(rows)}")
    if any(c < 0 for _, c in rows):
        raise NegativeCoefficient("Raman coefficients must be >= 0")
    if any(d < 0 for d, _ in rows):
        raise NegativeDetuning("Raman table detunings must be >= 0")

    rows.sort(key=lambda row: row[0])
    detunings = tuple(d for d, _ in rows)
    if len(set(detunings)) != len(detunings):
        raise DuplicateDetuning("Raman table has duplicate detunings")

    return RamanSpectrum(
        detunings=detunings,
        coefficients_stokes=tuple(c for _, c in rows),
        temperature=float(temperature),
    )


def read_spectrum_file(path: str, temperature: float = DEFAULT_TEMPERATURE_K) -> RamanSpectrum:
    """
    Read a two-column Raman table (detuning_GHz, stokes_coefficient).

    Lines starting with '#' are ignored. Columns may be separated by a comma
    or by whitespace.

    Raises:
        OSError: the file cannot be opened
        ModelError: the text is not UTF-8, a cell is not a number, or the
            table fails load_spectrum's checks
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [line.replace(",", " ") for line in f if line.strip() and not line.lstrip().startswith("#")]
    except UnicodeDecodeError as e:
        raise ModelError(f"Raman table {path} is not UTF-8 text ({e.reason} at byte {e.start})") from e

    if not lines:
        raise EmptyTable(f"Raman table {path} has no data rows")

    try:
        raw = np.loadtxt(lines, ndmin=2)
    except ValueError as e:
        raise ModelError(f"Raman table {path} is malformed: {e}") from e
    if raw.shape[1] != 2:
        raise ModelError(f"Raman table {path} must have exactly 2 columns, got {raw.shape[1]}")

    logger.debug("[Spectra] loaded %d rows from %s", raw.shape[0], path)
    return load_spectrum(map(tuple, raw.tolist()), temperature)


@cache_asset
def default_spectrum(temperature: float = DEFAULT_TEMPERATURE_K) -> RamanSpectrum:
    """Bundled silica table (raman_silica_v1) at the given temperature."""
    if temperature != DEFAULT_TEMPERATURE_K:
        return default_spectrum().at_temperature(temperature)
    return read_spectrum_file(data_file_path(DEFAULT_RAMAN_TABLE), temperature)


def scattering_coefficient(s: RamanSpectrum, detuning, branch: Branch = "anti_stokes"):
    """
    Scattering coefficient at a detuning from the pump.

    Linear interpolation between tabulated points; zero beyond the last
    tabulated detuning. The anti-Stokes branch applies the detailed-balance
    factor exp(-h*df/(k_B*T)).

    Args:
        s: Raman spectrum
        detuning: Detuning in GHz (scalar or array), >= 0
        branch: "anti_stokes" or "stokes"

    Returns:
        Coefficient in 1/(km*GHz); a float for scalar input, ndarray otherwise

    Raises:
        NegativeDetuning: any detuning is negative
    """
    if branch not in BRANCHES:
        raise ModelError(f"unknown Raman branch '{branch}'")

    d = np.asarray(detuning, dtype=float)
    if np.any(d < 0):
        raise NegativeDetuning(f"detuning must be >= 0 GHz, got {detuning}")

    value = np.interp(d, s.detunings, s.coefficients_stokes, right=0.0)
    if branch == "anti_stokes":
        value = value * detailed_balance_factor(d, s.temperature)

    if value.ndim == 0:
        return float(value)
    return value
