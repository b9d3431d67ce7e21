"""
Four-wave mixing between classical channels.

Enumerates the f_i + f_j - f_k products of a classical channel set, computes
the power of each product after the fibre span, and sums the products that
land inside the quantum channel's passband. Coincident product frequencies
are added in power, not in field.

Channel frequencies are handled on an integer-Hz grid so products of an
equally spaced plan land exactly on the same grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Sequence

from ..constants import BAND_CHANNELS, GRID_PITCH_GHZ, SPEED_OF_LIGHT, W_PER_MW
from ..utils.errors import EmptyPlan, ModelError, NegativePower, NonPositiveAttenuation
from ..utils.units import dbm_to_mw, ghz_to_hz, hz_to_thz, mw_to_dbm, thz_to_hz

if TYPE_CHECKING:
    from .link import FibreSpec, FilterStage

logger = logging.getLogger(__name__)


def nearest_spacing_ghz(classical_freqs: Sequence[float], quantum_freq: float) -> float:
    """Distance from quantum_freq to the nearest classical channel, in GHz."""
    if not classical_freqs:
        raise EmptyPlan("plan has no classical channels")
    quantum_hz = thz_to_hz(quantum_freq)
    return min(abs(thz_to_hz(f) - quantum_hz) for f in classical_freqs) / 1e9


def band_midpoint(classical_freqs: Sequence[float]) -> float:
    """Midpoint of a classical band in THz, on the integer-Hz grid."""
    if not classical_freqs:
        raise EmptyPlan("plan has no classical channels")
    grid = [thz_to_hz(f) for f in classical_freqs]
    return hz_to_thz((min(grid) + max(grid)) // 2)


@dataclass(frozen=True)
class ChannelPlan:
    """
    Quantum channel plus the classical channels sharing its fibre.

    Frequencies are in THz, per-channel launch powers in mW. The total
    coexistence power is the sum of the per-channel powers.
    """

    quantum_freq: float
    classical_freqs: tuple[float, ...]
    per_channel_power: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "quantum_freq", float(self.quantum_freq))
        object.__setattr__(self, "classical_freqs", tuple(float(f) for f in self.classical_freqs))
        object.__setattr__(self, "per_channel_power", tuple(float(p) for p in self.per_channel_power))

        if len(self.classical_freqs) != len(self.per_channel_power):
            raise ModelError(
                f"{len(self.classical_freqs)} classical frequencies but {len(self.per_channel_power)} powers"
            )
        if any(p < 0 for p in self.per_channel_power):
            raise NegativePower("per-channel power must be >= 0 mW")

        grid = self.classical_hz
        if len(set(grid)) != len(grid):
            raise ModelError("classical frequencies must be distinct")
        if thz_to_hz(self.quantum_freq) in grid:
            raise ModelError(f"quantum frequency {self.quantum_freq} THz is also a classical channel")

    @property
    def classical_hz(self) -> tuple[int, ...]:
        return tuple(thz_to_hz(f) for f in self.classical_freqs)

    @property
    def quantum_hz(self) -> int:
        return thz_to_hz(self.quantum_freq)

    @property
    def n_channels(self) -> int:
        return len(self.classical_freqs)

    @property
    def total_power_mw(self) -> float:
        return math.fsum(self.per_channel_power)

    @property
    def total_power_dbm(self) -> float:
        """Coexistence power I_c in dBm (-inf when every channel is dark)."""
        return mw_to_dbm(self.total_power_mw)

    @property
    def spacing_ghz(self) -> float:
        """Distance from the quantum channel to the nearest classical channel."""
        return nearest_spacing_ghz(self.classical_freqs, self.quantum_freq)

    @property
    def band_center(self) -> float:
        """Midpoint of the classical band in THz."""
        return band_midpoint(self.classical_freqs)

    def scaled(self, factor: float) -> ChannelPlan:
        """Copy with every channel power multiplied by factor."""
        return replace(self, per_channel_power=tuple(p * factor for p in self.per_channel_power))

    @classmethod
    def uniform(cls, quantum_freq: float, classical_freqs: Sequence[float], total_power_dbm: float) -> ChannelPlan:
        """Split a total coexistence power equally over the classical channels."""
        if not classical_freqs:
            raise EmptyPlan("plan has no classical channels")
        per_channel = dbm_to_mw(total_power_dbm) / len(classical_freqs)
        return cls(quantum_freq, tuple(classical_freqs), (per_channel,) * len(classical_freqs))

    @classmethod
    def band_below(
        cls,
        quantum_freq: float,
        spacing_ghz: float,
        total_power_dbm: float,
        n_channels: int = BAND_CHANNELS,
        pitch_ghz: float = GRID_PITCH_GHZ,
    ) -> ChannelPlan:
        """
        Band of equally spaced channels on the anti-Stokes side of the quantum channel.

        The channel nearest the quantum frequency sits spacing_ghz below it;
        the remaining channels follow at pitch_ghz further down.
        """
        if n_channels < 1:
            raise EmptyPlan("band needs at least one channel")
        top = thz_to_hz(quantum_freq) - ghz_to_hz(spacing_ghz)
        pitch = ghz_to_hz(pitch_ghz)
        freqs = [hz_to_thz(top - m * pitch) for m in range(n_channels)]
        return cls.uniform(quantum_freq, freqs, total_power_dbm)


@dataclass(frozen=True)
class FwmProduct:
    """One f_i + f_j - f_k product; power stays None until computed."""

    i: int
    j: int
    k: int
    freq_hz: int
    power: float | None = None

    @property
    def freq(self) -> float:
        """Product frequency in THz."""
        return hz_to_thz(self.freq_hz)

    @property
    def degenerate(self) -> bool:
        return self.i == self.j


def enumerate_products(plan: ChannelPlan) -> list[FwmProduct]:
    """
    List every f_i + f_j - f_k product of the plan.

    Pump pairs are unordered (i <= j, degenerate i == j included) and
    k is neither i nor j. Coincident frequencies stay separate products.

    Raises:
        EmptyPlan: the plan has no classical channels

    Examples:
        >>> plan = ChannelPlan(193.7, (193.50, 193.45), (1.0, 1.0))
        >>> sorted(p.freq for p in enumerate_products(plan))
        [193.4, 193.55]
    """
    grid = plan.classical_hz
    if not grid:
        raise EmptyPlan("plan has no classical channels")

    n = len(grid)
    products = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if k == i or k == j:
                    continue
                products.append(FwmProduct(i, j, k, grid[i] + grid[j] - grid[k]))
    return products


def phase_mismatch(plan: ChannelPlan, fibre: FibreSpec, prod: FwmProduct) -> float:
    """
    Phase mismatch in 1/km from the dispersion-parameter approximation.

    delta_beta = (2*pi*lambda^2/c) * D * (f_i - f_k) * (f_j - f_k),
    with lambda taken at the product frequency.
    """
    grid = plan.classical_hz
    wavelength_m = SPEED_OF_LIGHT / prod.freq_hz
    dispersion_s_per_m2 = fibre.dispersion_ps_nm_km * 1e-6
    df_ik = grid[prod.i] - grid[prod.k]
    df_jk = grid[prod.j] - grid[prod.k]
    per_m = 2.0 * math.pi * wavelength_m**2 / SPEED_OF_LIGHT * dispersion_s_per_m2 * df_ik * df_jk
    return per_m * 1e3


def phase_matching_efficiency(alpha: float, delta_beta: float, length_km: float) -> float:
    """
    FWM efficiency eta for attenuation alpha (1/km) and mismatch delta_beta (1/km).

    eta = a^2/(a^2 + db^2) * [1 + 4 e^(-aL) sin^2(db L/2) / (1 - e^(-aL))^2]
    """
    if alpha <= 0:
        raise NonPositiveAttenuation(f"FWM efficiency needs attenuation > 0, got alpha={alpha}")
    loss = math.exp(-alpha * length_km)
    ripple = 4.0 * loss * math.sin(delta_beta * length_km / 2.0) ** 2 / (1.0 - loss) ** 2
    return alpha**2 / (alpha**2 + delta_beta**2) * (1.0 + ripple)


def product_power(plan: ChannelPlan, fibre: FibreSpec, prod: FwmProduct) -> float:
    """
    Power of one FWM product at the fibre output, in mW.

    P = (D/3)^2 * gamma^2 * P_i P_j P_k * e^(-aL) * L_eff^2 * eta, with
    degeneracy D = 3 for i == j and 6 otherwise; gamma includes the
    fibre's fwm_scale.

    Raises:
        NonPositiveAttenuation: the fibre is lossless
    """
    alpha = fibre.alpha
    if alpha <= 0:
        raise NonPositiveAttenuation(f"fibre '{fibre.name}' has no attenuation; FWM power is undefined")

    pumps = plan.per_channel_power
    p_i, p_j, p_k = (pumps[idx] * W_PER_MW for idx in (prod.i, prod.j, prod.k))
    if p_i == 0 or p_j == 0 or p_k == 0:
        return 0.0

    degeneracy = 3.0 if prod.degenerate else 6.0
    gamma = fibre.gamma_per_w_km * fibre.fwm_scale
    eta = phase_matching_efficiency(alpha, phase_mismatch(plan, fibre, prod), fibre.length_km)

    power_w = (
        (degeneracy / 3.0) ** 2
        * gamma**2
        * p_i * p_j * p_k
        * fibre.transmission
        * fibre.effective_length**2
        * eta
    )
    return power_w / W_PER_MW


def in_band_products(plan: ChannelPlan, passband: FilterStage) -> list[FwmProduct]:
    """Products whose frequency lies inside the passband."""
    return [prod for prod in enumerate_products(plan) if passband.contains(prod.freq)]


def in_band_fwm_power(plan: ChannelPlan, fibre: FibreSpec, passband: FilterStage) -> float:
    """
    Total FWM power inside the passband, in mW.

    Each in-band product is weighted by the passband transmission at its
    frequency.
    """
    if passband.bandwidth_ghz <= 0:
        raise ModelError("passband bandwidth must be > 0 GHz")

    terms = []
    for prod in in_band_products(plan, passband):
        weight = 10.0 ** (passband.transmission_db(prod.freq) / 10.0)
        terms.append(product_power(plan, fibre, prod) * weight)
    return math.fsum(terms)
