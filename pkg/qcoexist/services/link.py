"""
Fibre span, filter cascades and detector counting.

Models the coexistence link: a co-propagating fibre span, the transmit
cascade that shapes the classical band, the receive cascade in front of the
quantum receiver, and the gated single-photon detector. Combines Raman,
four-wave mixing and filter leakage into a per-source noise budget in
detector counts per second.

Attenuation constants are converted from dB/km to 1/km (alpha = dB*ln10/10).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Literal, Sequence

from ..constants import PLANCK, HZ_PER_THZ, W_PER_MW
from ..utils.errors import ModelError, NegativePower
from ..utils.units import db_to_nepers, from_db, ghz_to_hz, mw_to_dbm, thz_to_hz
from . import nonlinear
from .nonlinear import ChannelPlan
from .spectra import RamanSpectrum, scattering_coefficient

logger = logging.getLogger(__name__)

FilterShape = Literal["flat_top", "gaussian"]
FILTER_SHAPES: tuple[str, ...] = ("flat_top", "gaussian")

_GAUSSIAN_SIGMA_PER_FWHM = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))
_GAUSSIAN_NOISE_BW_PER_FWHM = math.sqrt(math.pi / (4.0 * math.log(2.0)))
_DB_PER_NEPER_POWER = 10.0 * math.log10(math.e)


@dataclass(frozen=True)
class FibreSpec:
    """Fibre span; the scale factors carry nonlinearity suppression (1 for SMF)."""

    name: str
    length_km: float
    attenuation_db_per_km: float
    gamma_per_w_km: float
    dispersion_ps_nm_km: float
    raman_scale: float = 1.0
    fwm_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.length_km <= 0:
            raise ModelError(f"fibre length must be > 0 km, got {self.length_km}")
        if self.attenuation_db_per_km < 0:
            raise ModelError(f"fibre attenuation must be >= 0 dB/km, got {self.attenuation_db_per_km}")
        if self.gamma_per_w_km < 0:
            raise ModelError(f"nonlinear coefficient must be >= 0, got {self.gamma_per_w_km}")
        if self.raman_scale < 0 or self.fwm_scale < 0:
            raise ModelError("raman_scale and fwm_scale must be >= 0")

    @property
    def alpha(self) -> float:
        """Attenuation in 1/km."""
        return db_to_nepers(self.attenuation_db_per_km)

    @property
    def loss_db(self) -> float:
        return self.attenuation_db_per_km * self.length_km

    @property
    def transmission(self) -> float:
        """Linear span transmission e^(-alpha*L)."""
        return math.exp(-self.alpha * self.length_km)

    @property
    def effective_length(self) -> float:
        return effective_length(self)


@dataclass(frozen=True)
class FilterStage:
    """
    One passband filter.

    Transmission is -insertion_loss at the center and never drops below
    -(insertion_loss + isolation). Flat-top stages pass everything within
    +/- bandwidth/2; Gaussian stages roll off with sigma = FWHM/(2*sqrt(2 ln 2)).
    """

    name: str
    center_thz: float
    bandwidth_ghz: float
    shape: FilterShape = "flat_top"
    insertion_loss_db: float = 0.0
    isolation_db: float = 0.0

    def __post_init__(self) -> None:
        if self.shape not in FILTER_SHAPES:
            raise ModelError(f"filter '{self.name}': unknown shape '{self.shape}'")
        if self.bandwidth_ghz <= 0:
            raise ModelError(f"filter '{self.name}': bandwidth must be > 0 GHz")
        if self.insertion_loss_db < 0 or self.isolation_db < 0:
            raise ModelError(f"filter '{self.name}': insertion loss and isolation must be >= 0 dB")

    def _offset_hz(self, freq_thz: float) -> int:
        return abs(thz_to_hz(freq_thz) - thz_to_hz(self.center_thz))

    def contains(self, freq_thz: float) -> bool:
        """True when freq lies within +/- bandwidth/2 of the center (inclusive)."""
        return 2 * self._offset_hz(freq_thz) <= ghz_to_hz(self.bandwidth_ghz)

    def transmission_db(self, freq_thz: float) -> float:
        if self.shape == "flat_top":
            if self.contains(freq_thz):
                return -self.insertion_loss_db
            return -(self.insertion_loss_db + self.isolation_db)

        sigma_ghz = self.bandwidth_ghz * _GAUSSIAN_SIGMA_PER_FWHM
        x = self._offset_hz(freq_thz) / 1e9 / sigma_ghz
        roll_off = _DB_PER_NEPER_POWER * 0.5 * x * x
        return -self.insertion_loss_db - min(self.isolation_db, roll_off)

    @property
    def noise_bandwidth_ghz(self) -> float:
        if self.shape == "gaussian":
            return self.bandwidth_ghz * _GAUSSIAN_NOISE_BW_PER_FWHM
        return self.bandwidth_ghz

    def retuned(self, center_thz: float) -> FilterStage:
        return replace(self, center_thz=float(center_thz))


@dataclass(frozen=True)
class FilterChain:
    """Transmit cascade (classical band) and receive cascade (quantum path)."""

    tx: tuple[FilterStage, ...]
    rx: tuple[FilterStage, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "tx", tuple(self.tx))
        object.__setattr__(self, "rx", tuple(self.rx))

    @property
    def passband(self) -> FilterStage:
        """Narrowest receive stage at unit peak transmission (losses applied separately)."""
        if not self.rx:
            raise ModelError(f"filter chain '{self.name}' has no receive stages")
        narrowest = min(self.rx, key=lambda stage: stage.bandwidth_ghz)
        return replace(narrowest, insertion_loss_db=0.0)

    def retuned_tx(self, center_thz: float) -> FilterChain:
        """Move every transmit stage to a new center (tunable band filters)."""
        return replace(self, tx=tuple(stage.retuned(center_thz) for stage in self.tx))

    def with_isolation_offset(self, delta_db: float) -> FilterChain:
        """Copy with every stage's isolation shifted by delta_db (floored at 0)."""
        def shift(stage: FilterStage) -> FilterStage:
            return replace(stage, isolation_db=max(0.0, stage.isolation_db + delta_db))

        return replace(self, tx=tuple(map(shift, self.tx)), rx=tuple(map(shift, self.rx)))


@dataclass(frozen=True)
class DetectorSpec:
    """Gated single-photon detector."""

    gate_duration_s: float = 100e-12
    efficiency: float = 0.7
    gate_rate_hz: float = 1e10
    dark_count_prob: float = 1e-8
    name: str = "gated_apd"

    def __post_init__(self) -> None:
        if self.gate_duration_s <= 0:
            raise ModelError(f"gate duration must be > 0 s, got {self.gate_duration_s}")
        if not 0.0 <= self.efficiency <= 1.0:
            raise ModelError(f"detector efficiency must be in [0, 1], got {self.efficiency}")
        if self.gate_rate_hz < 0:
            raise ModelError(f"gate rate must be >= 0, got {self.gate_rate_hz}")
        if not 0.0 <= self.dark_count_prob <= 1.0:
            raise ModelError(f"dark count probability must be in [0, 1], got {self.dark_count_prob}")

    @property
    def dark_counts(self) -> float:
        """Dark counts per second."""
        return self.dark_count_prob * self.gate_rate_hz


@dataclass(frozen=True)
class NoiseBudget:
    """In-band noise counts per second by source."""

    raman_counts: float = 0.0
    fwm_counts: float = 0.0
    leakage_counts: float = 0.0

    def __post_init__(self) -> None:
        if min(self.raman_counts, self.fwm_counts, self.leakage_counts) < 0:
            raise ModelError("noise counts must be >= 0")

    @property
    def total(self) -> float:
        return self.raman_counts + self.fwm_counts + self.leakage_counts

    def as_dict(self) -> dict[str, float]:
        return {
            "raman_cps": self.raman_counts,
            "fwm_cps": self.fwm_counts,
            "leakage_cps": self.leakage_counts,
            "total_cps": self.total,
        }


def effective_length(fibre: FibreSpec) -> float:
    """
    Effective nonlinear length in km: (1 - e^(-alpha*L))/alpha, or L when lossless.

    Examples:
        >>> round(effective_length(FibreSpec("smf", 50.0, 0.2, 1.3, 17.0)), 3)
        19.543
    """
    alpha = fibre.alpha
    if alpha == 0:
        return fibre.length_km
    return -math.expm1(-alpha * fibre.length_km) / alpha


def cascade_transmission(stages: Sequence[FilterStage], freq_thz: float) -> float:
    """Total transmission of a filter cascade at freq, in dB (0 for no stages)."""
    return math.fsum(stage.transmission_db(freq_thz) for stage in stages)


def raman_in_band_power(
    plan: ChannelPlan,
    fibre: FibreSpec,
    spectrum: RamanSpectrum,
    passband: FilterStage,
) -> float:
    """
    Co-propagating spontaneous Raman power inside the quantum passband, in mW.

    Sum over channels of P_ch * raman_scale * rho(|f_q - f_ch|) * B_eff * e^(-aL) * L.
    Channels below the quantum frequency scatter on the anti-Stokes branch,
    channels above it on the Stokes branch. The receive cascade's in-band
    loss is not applied here.
    """
    quantum_hz = plan.quantum_hz
    terms = []
    for freq_hz, power_mw in zip(plan.classical_hz, plan.per_channel_power):
        detuning_ghz = abs(quantum_hz - freq_hz) / 1e9
        branch = "anti_stokes" if quantum_hz > freq_hz else "stokes"
        terms.append(power_mw * scattering_coefficient(spectrum, detuning_ghz, branch))

    return (
        math.fsum(terms)
        * fibre.raman_scale
        * passband.noise_bandwidth_ghz
        * fibre.transmission
        * fibre.length_km
    )


def photon_rate(power_mw: float, freq_thz: float, det: DetectorSpec) -> tuple[float, float]:
    """
    Detected photons per gate and per second for an optical power at freq.

    counts/gate = P * gate_duration * efficiency / (h * nu)

    Raises:
        NegativePower: power is negative
    """
    if power_mw < 0:
        raise NegativePower(f"optical power must be >= 0 mW, got {power_mw}")
    photon_energy_j = PLANCK * freq_thz * HZ_PER_THZ
    per_gate = power_mw * W_PER_MW * det.gate_duration_s * det.efficiency / photon_energy_j
    return per_gate, per_gate * det.gate_rate_hz


def leakage_power(
    plan: ChannelPlan,
    tx_cascade: Sequence[FilterStage],
    rx_cascade: Sequence[FilterStage],
) -> float:
    """Classical power reaching the quantum receiver through both cascades, in mW."""
    terms = []
    for freq, power_mw in zip(plan.classical_freqs, plan.per_channel_power):
        path_db = cascade_transmission(tx_cascade, freq) + cascade_transmission(rx_cascade, freq)
        terms.append(power_mw * from_db(path_db))
    return math.fsum(terms)


def noise_budget(
    plan: ChannelPlan,
    fibre: FibreSpec | None,
    spectrum: RamanSpectrum,
    filters: FilterChain,
    det: DetectorSpec,
) -> NoiseBudget:
    """
    Per-source noise counts at the quantum detector.

    Raman and FWM power inside the quantum passband are scaled by the
    receive cascade's transmission at the quantum frequency; leakage is
    taken through both cascades. All three are counted at the quantum
    channel frequency. With fibre=None only leakage remains (no-fibre
    characterization).
    """
    leakage_mw = leakage_power(plan, filters.tx, filters.rx)

    if fibre is None:
        raman_mw = fwm_mw = 0.0
    else:
        passband = filters.passband
        rx_gain = from_db(cascade_transmission(filters.rx, plan.quantum_freq))
        raman_mw = raman_in_band_power(plan, fibre, spectrum, passband) * rx_gain
        fwm_mw = nonlinear.in_band_fwm_power(plan, fibre, passband) * rx_gain

    freq = plan.quantum_freq
    return NoiseBudget(
        raman_counts=photon_rate(raman_mw, freq, det)[1],
        fwm_counts=photon_rate(fwm_mw, freq, det)[1],
        leakage_counts=photon_rate(leakage_mw, freq, det)[1],
    )


def classical_link_margin(
    plan: ChannelPlan,
    fibre: FibreSpec | None,
    rx_losses_db: float,
    sensitivity_dbm: float,
) -> tuple[float, ...]:
    """
    Received power minus receiver sensitivity, per classical channel, in dB.

    A negative margin flags an infeasible classical link. fibre=None models
    a zero-length connection.
    """
    span_db = fibre.loss_db if fibre is not None else 0.0
    return tuple(
        mw_to_dbm(power_mw) - span_db - rx_losses_db - sensitivity_dbm
        for power_mw in plan.per_channel_power
    )
