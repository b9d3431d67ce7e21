"""
Placement planner and coexistence sweeps.

Sweeps the spacing between the quantum channel and an 8-channel classical
band to find the best and worst placements, produces key-rate/QBER curves
against total coexistence power for a fibre and band, locates the power at
which four-wave mixing overtakes Raman scattering, and runs the no-fibre
leakage characterization.

Grid points are independent; with workers > 1 they are evaluated on a thread
pool and reassembled in grid order, so outputs do not depend on scheduling.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from scipy.optimize import bisect

from ..constants import (
    BAND_CHANNELS,
    CROSSOVER_BOUNDS_DBM,
    GRID_PITCH_GHZ,
    PLACEMENT_OBJECTIVE,
    QUANTUM_FREQ_THZ,
    SPACING_MAX_GHZ,
    SPACING_MIN_GHZ,
    SPACING_STEP_GHZ,
)
from ..utils.errors import ModelError, NoCrossover, log_info, log_warning
from . import link, qkd
from .link import DetectorSpec, FibreSpec, FilterChain, NoiseBudget
from .nonlinear import ChannelPlan, band_midpoint, nearest_spacing_ghz
from .qkd import CowParams, QkdPrediction
from .spectra import RamanSpectrum

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class Environment:
    """Everything except the fibre and the band that a coexistence run needs."""

    spectrum: RamanSpectrum
    detector: DetectorSpec
    filters: FilterChain
    cow: CowParams
    quantum_freq: float = QUANTUM_FREQ_THZ
    n_channels: int = BAND_CHANNELS
    pitch_ghz: float = GRID_PITCH_GHZ
    workers: int = 1


@dataclass(frozen=True)
class Scenario:
    """A fibre plus a fixed classical band."""

    name: str
    fibre: FibreSpec
    classical_freqs: tuple[float, ...]

    def spacing_ghz(self, quantum_freq: float) -> float:
        return nearest_spacing_ghz(self.classical_freqs, quantum_freq)

    @property
    def band_center(self) -> float:
        return band_midpoint(self.classical_freqs)


@dataclass(frozen=True)
class PlacementResult:
    spacing_grid: tuple[float, ...]
    noise_totals: tuple[float, ...]
    raman_counts: tuple[float, ...]
    fwm_counts: tuple[float, ...]
    leakage_counts: tuple[float, ...]
    qber: tuple[float, ...]
    best_spacing: float
    worst_spacing: float
    power_dbm: float
    degenerate: bool = False
    objective: str = PLACEMENT_OBJECTIVE


@dataclass(frozen=True)
class SweepCurve:
    scenario: str
    fibre: str
    spacing_ghz: float
    powers_dbm: tuple[float, ...]
    skr_bps: tuple[float, ...]
    qber: tuple[float, ...]
    raman_cps: tuple[float, ...]
    fwm_cps: tuple[float, ...]
    leakage_cps: tuple[float, ...]
    channels: int = BAND_CHANNELS

    def __post_init__(self) -> None:
        lengths = {len(self.powers_dbm), len(self.skr_bps), len(self.qber)}
        if len(lengths) != 1:
            raise ModelError("sweep curve columns must have equal length")


def _map_grid(func: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def calibrated_environment(
    spectrum: RamanSpectrum,
    detector: DetectorSpec,
    filters: FilterChain,
    template: CowParams,
    target_skr: float,
    target_qber: float,
    *,
    quantum_freq: float = QUANTUM_FREQ_THZ,
    n_channels: int = BAND_CHANNELS,
    pitch_ghz: float = GRID_PITCH_GHZ,
    workers: int = 1,
    rtol: float = 1e-6,
    maxiter: int = 200,
) -> Environment:
    """Calibrate the COW baseline once and bundle it with the rest of the setup."""
    cow = qkd.calibrate_baseline(target_skr, target_qber, detector, template, rtol=rtol, maxiter=maxiter)
    return Environment(
        spectrum=spectrum,
        detector=detector,
        filters=filters,
        cow=cow,
        quantum_freq=quantum_freq,
        n_channels=n_channels,
        pitch_ghz=pitch_ghz,
        workers=workers,
    )


def band_plan(spacing_ghz: float, power_dbm: float, env: Environment) -> ChannelPlan:
    """Equal-power band placed spacing_ghz below the quantum channel."""
    return ChannelPlan.band_below(env.quantum_freq, spacing_ghz, power_dbm, env.n_channels, env.pitch_ghz)


def evaluate(
    plan: ChannelPlan,
    fibre: FibreSpec | None,
    env: Environment,
    tx_center: float | None = None,
) -> tuple[NoiseBudget, QkdPrediction]:
    """
    Noise budget and QKD prediction for one plan.

    Transmit filters are retuned to tx_center (default: the plan's band
    center) so the classical band always sits in their passband.
    """
    filters = env.filters.retuned_tx(plan.band_center if tx_center is None else tx_center)
    budget = link.noise_budget(plan, fibre, env.spectrum, filters, env.detector)
    return budget, qkd.predict(env.cow, env.detector, budget)


def spacing_grid(spacing_range: tuple[float, float], step: float) -> list[float]:
    lo, hi = spacing_range
    if step <= 0:
        raise ModelError(f"spacing step must be > 0 GHz, got {step}")
    if hi < lo:
        raise ModelError(f"spacing range is empty: [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + m * step, 9) for m in range(count)]


def best_worst_spacing(
    power_dbm: float,
    fibre: FibreSpec,
    env: Environment,
    spacing_range: tuple[float, float] = (SPACING_MIN_GHZ, SPACING_MAX_GHZ),
    step: float = SPACING_STEP_GHZ,
) -> PlacementResult:
    """
    Best and worst band placement by predicted QBER.

    Each spacing places the band below the quantum frequency. Ties go to
    the smaller spacing; when every spacing predicts the same QBER the
    result is flagged degenerate.

    Args:
        power_dbm: Total coexistence power I_c
        fibre: Fibre span
        env: Calibrated environment
        spacing_range: Smallest and largest spacing in GHz
        step: Grid step in GHz

    Returns:
        PlacementResult with per-spacing counts and the extrema
    """
    grid = spacing_grid(spacing_range, step)

    def point(spacing: float) -> tuple[NoiseBudget, QkdPrediction]:
        return evaluate(band_plan(spacing, power_dbm, env), fibre, env)

    results = _map_grid(point, grid, env.workers)
    budgets = [b for b, _ in results]
    qbers = np.array([p.qber for _, p in results])

    best = grid[int(np.argmin(qbers))]
    worst = grid[int(np.argmax(qbers))]
    degenerate = bool(qbers.max() == qbers.min())
    if degenerate:
        log_warning("[Planner] every spacing predicts the same QBER", power_dbm=power_dbm, fibre=fibre.name)

    log_info("[Planner] placement done", fibre=fibre.name, power_dbm=power_dbm, best=best, worst=worst)
    return PlacementResult(
        spacing_grid=tuple(grid),
        noise_totals=tuple(b.total for b in budgets),
        raman_counts=tuple(b.raman_counts for b in budgets),
        fwm_counts=tuple(b.fwm_counts for b in budgets),
        leakage_counts=tuple(b.leakage_counts for b in budgets),
        qber=tuple(float(q) for q in qbers),
        best_spacing=best,
        worst_spacing=worst,
        power_dbm=power_dbm,
        degenerate=degenerate,
    )


def _curve(
    tag: str,
    fibre_name: str,
    spacing_ghz: float,
    powers: Sequence[float],
    results: Iterable[tuple[NoiseBudget, QkdPrediction]],
    channels: int,
) -> SweepCurve:
    results = list(results)
    return SweepCurve(
        scenario=tag,
        fibre=fibre_name,
        spacing_ghz=spacing_ghz,
        powers_dbm=tuple(powers),
        skr_bps=tuple(p.skr for _, p in results),
        qber=tuple(p.qber for _, p in results),
        raman_cps=tuple(b.raman_counts for b, _ in results),
        fwm_cps=tuple(b.fwm_counts for b, _ in results),
        leakage_cps=tuple(b.leakage_counts for b, _ in results),
        channels=channels,
    )


def power_sweep(scenario: Scenario, powers: Sequence[float], env: Environment) -> SweepCurve:
    """
    Key rate and QBER against total coexistence power.

    Each power is split equally over the scenario's classical channels.
    """
    powers = [float(p) for p in powers]
    freqs = scenario.classical_freqs

    def point(power_dbm: float) -> tuple[NoiseBudget, QkdPrediction]:
        plan = ChannelPlan.uniform(env.quantum_freq, freqs, power_dbm)
        return evaluate(plan, scenario.fibre, env)

    results = _map_grid(point, powers, env.workers)
    log_info("[Planner] power sweep done", scenario=scenario.name, fibre=scenario.fibre.name, points=len(powers))
    return _curve(
        scenario.name,
        scenario.fibre.name,
        scenario.spacing_ghz(env.quantum_freq),
        powers,
        results,
        len(freqs),
    )


def characterization_sweep(
    powers: Sequence[float],
    env: Environment,
    classical_freqs: Sequence[float],
    channel_counts: Sequence[int] = (BAND_CHANNELS,),
    tag: str = "characterize",
) -> list[SweepCurve]:
    """
    No-fibre, leakage-only curves.

    For each channel count n, the total power is carried by the first n
    channels of classical_freqs; the transmit filters stay centered on the
    full band.
    """
    freqs = tuple(classical_freqs)
    if not freqs:
        raise ModelError("characterization needs at least one classical channel")
    center = band_midpoint(freqs)
    spacing = nearest_spacing_ghz(freqs, env.quantum_freq)
    powers = [float(p) for p in powers]

    curves = []
    for count in channel_counts:
        if not 1 <= count <= len(freqs):
            raise ModelError(f"channel count {count} outside 1..{len(freqs)}")
        subset = freqs[:count]

        def point(power_dbm: float, subset=subset) -> tuple[NoiseBudget, QkdPrediction]:
            plan = ChannelPlan.uniform(env.quantum_freq, subset, power_dbm)
            return evaluate(plan, None, env, tx_center=center)

        results = _map_grid(point, powers, env.workers)
        curves.append(_curve(tag, "none", spacing, powers, results, count))
    return curves


def crossover_power(
    spacing_ghz: float,
    fibre: FibreSpec,
    env: Environment,
    bounds: tuple[float, float] = CROSSOVER_BOUNDS_DBM,
    tol_db: float = 0.1,
) -> float:
    """
    Coexistence power (dBm) at which FWM counts equal Raman counts.

    Bisects log10(fwm/raman), which grows by 2 decades per 10 dB of launch
    power, over bounds.

    Raises:
        NoCrossover: FWM never reaches Raman inside bounds
    """
    if fibre.fwm_scale == 0 or fibre.gamma_per_w_km == 0:
        raise NoCrossover(f"fibre '{fibre.name}' has no FWM; no crossover exists")
    if fibre.raman_scale == 0:
        raise NoCrossover(f"fibre '{fibre.name}' has no Raman noise; no crossover exists")

    filters = env.filters

    def log_ratio(power_dbm: float) -> float:
        plan = band_plan(spacing_ghz, power_dbm, env)
        budget = link.noise_budget(plan, fibre, env.spectrum, filters.retuned_tx(plan.band_center), env.detector)
        if budget.fwm_counts == 0 or budget.raman_counts == 0:
            raise NoCrossover(f"no in-band FWM or Raman at {spacing_ghz} GHz spacing")
        return math.log10(budget.fwm_counts) - math.log10(budget.raman_counts)

    lo, hi = bounds
    if not (log_ratio(lo) < 0 < log_ratio(hi)):
        raise NoCrossover(f"FWM does not cross Raman within [{lo}, {hi}] dBm at {spacing_ghz} GHz")

    crossing = bisect(log_ratio, lo, hi, xtol=tol_db)
    log_info("[Planner] crossover found", spacing_ghz=spacing_ghz, fibre=fibre.name, power_dbm=f"{crossing:.3f}")
    return float(crossing)


def classical_margins(
    scenario: Scenario,
    powers: Sequence[float],
    rx_losses_db: float,
    sensitivity_dbm: float,
    env: Environment,
) -> list[float]:
    """Worst per-channel classical margin (dB) at each swept power."""
    margins = []
    for power_dbm in powers:
        plan = ChannelPlan.uniform(env.quantum_freq, scenario.classical_freqs, power_dbm)
        margins.append(min(link.classical_link_margin(plan, scenario.fibre, rx_losses_db, sensitivity_dbm)))
    return margins
