"""
COW-protocol QBER and secret key rate.

A transparent surrogate for the vendor key-rate engine: the sifted detection
rate times the secret fraction 1 - f*h2(Q) - h2(Q), with a hard QBER cutoff
above which no key is distilled. Half of all noise and dark counts are
counted as errors (random time-bin arrival).

calibrate_baseline anchors the zero-coexistence operating point (key rate and
QBER with no classical traffic) by solving for the mean photon number and the
intrinsic optical error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from scipy.optimize import bisect
from scipy.special import entr

from ..constants import CALIBRATION_MU_BOUNDS, QBER_CUTOFF, QUANTUM_CHANNEL_LOSS_DB
from ..utils.errors import AllRatesZero, ModelError, NoSolution, log_info
from ..utils.units import from_db
from .link import DetectorSpec, NoiseBudget

logger = logging.getLogger(__name__)

_CLOSURE_TOLERANCE = 0.01


@dataclass(frozen=True)
class CowParams:
    """COW transmitter and post-processing parameters."""

    pulse_rate_hz: float
    mean_photon_number: float
    intrinsic_error: float
    sifting_ratio: float = 1.0
    ec_efficiency: float = 1.16
    qber_cutoff: float = QBER_CUTOFF
    channel_loss_db: float = QUANTUM_CHANNEL_LOSS_DB

    def __post_init__(self) -> None:
        if self.pulse_rate_hz < 0 or self.mean_photon_number < 0:
            raise ModelError("pulse rate and mean photon number must be >= 0")
        if not 0.0 <= self.intrinsic_error <= 0.5:
            raise ModelError(f"intrinsic error must be in [0, 0.5], got {self.intrinsic_error}")
        if not 0.0 < self.sifting_ratio <= 1.0:
            raise ModelError(f"sifting ratio must be in (0, 1], got {self.sifting_ratio}")
        if self.ec_efficiency < 1.0:
            raise ModelError(f"error-correction efficiency must be >= 1, got {self.ec_efficiency}")
        if not 0.0 < self.qber_cutoff < 0.5:
            raise ModelError(f"QBER cutoff must be in (0, 0.5), got {self.qber_cutoff}")

    @property
    def rate_product(self) -> float:
        """pulse_rate * mean_photon_number * sifting_ratio."""
        return self.pulse_rate_hz * self.mean_photon_number * self.sifting_ratio


@dataclass(frozen=True)
class QkdPrediction:
    qber: float
    skr: float
    signal_counts: float
    noise_counts: float
    dark_counts: float

    def as_dict(self) -> dict[str, float]:
        return {
            "qber": self.qber,
            "skr_bps": self.skr,
            "signal_cps": self.signal_counts,
            "noise_cps": self.noise_counts,
            "dark_cps": self.dark_counts,
        }


def binary_entropy(q: float) -> float:
    """h2(q) in bits; h2(0) = h2(1) = 0."""
    return float((entr(q) + entr(1.0 - q)) / math.log(2.0))


def detection_rates(params: CowParams, det: DetectorSpec, budget: NoiseBudget) -> tuple[float, float, float]:
    """
    Signal, noise and dark counts per second at the receiver.

    signal = pulse_rate * mu * 10^(-channel_loss/10) * efficiency
    """
    signal = (
        params.pulse_rate_hz
        * params.mean_photon_number
        * from_db(-params.channel_loss_db)
        * det.efficiency
    )
    return signal, budget.total, det.dark_counts


def qber(signal: float, noise: float, dark: float, intrinsic_error: float) -> float:
    """
    Quantum bit error rate, clamped to [0, 0.5].

    Raises:
        AllRatesZero: nothing is detected

    Examples:
        >>> round(qber(9900.0, 100.0, 0.0, 0.025), 5)
        0.02975
    """
    total = signal + noise + dark
    if total <= 0:
        raise AllRatesZero("signal, noise and dark rates are all zero")
    q = (intrinsic_error * signal + 0.5 * (noise + dark)) / total
    return min(0.5, max(0.0, q))


def secret_key_rate(q: float, signal: float, noise: float, dark: float, params: CowParams) -> float:
    """
    Secret key rate in bits/s; exactly zero at or above the QBER cutoff.

    R = sifting_ratio * (signal + noise + dark) * max(0, 1 - f*h2(q) - h2(q))
    """
    if q >= params.qber_cutoff:
        return 0.0
    h2 = binary_entropy(q)
    fraction = max(0.0, 1.0 - params.ec_efficiency * h2 - h2)
    return params.sifting_ratio * (signal + noise + dark) * fraction


def predict(params: CowParams, det: DetectorSpec, budget: NoiseBudget) -> QkdPrediction:
    """QBER and key rate for a noise budget."""
    signal, noise, dark = detection_rates(params, det, budget)
    q = qber(signal, noise, dark, params.intrinsic_error)
    return QkdPrediction(
        qber=q,
        skr=secret_key_rate(q, signal, noise, dark, params),
        signal_counts=signal,
        noise_counts=noise,
        dark_counts=dark,
    )


def calibrate_baseline(
    target_skr: float,
    target_qber: float,
    det: DetectorSpec,
    template: CowParams,
    *,
    mu_bounds: tuple[float, float] = CALIBRATION_MU_BOUNDS,
    rtol: float = 1e-6,
    maxiter: int = 200,
) -> CowParams:
    """
    Solve the zero-coexistence operating point.

    Keeps the template's pulse rate, sifting ratio and post-processing
    constants, bisects the mean photon number within mu_bounds, and sets the
    intrinsic error so the QBER with dark counts alone equals target_qber.

    Args:
        target_skr: Baseline key rate in bits/s
        target_qber: Baseline QBER
        det: Detector (supplies dark counts and efficiency)
        template: Parameters to keep fixed
        mu_bounds: Search interval for the mean photon number
        rtol: Relative bisection tolerance
        maxiter: Bisection iteration cap

    Returns:
        Calibrated CowParams reproducing both targets within 1%

    Raises:
        NoSolution: the targets cannot be met inside the template bounds
    """
    if target_skr <= 0:
        raise NoSolution(f"target key rate must be > 0, got {target_skr}")
    if not 0.0 <= target_qber < template.qber_cutoff:
        raise NoSolution(f"target QBER {target_qber} is not below the cutoff {template.qber_cutoff}")

    zero = NoiseBudget()
    dark = det.dark_counts

    def candidate(mu: float) -> CowParams:
        signal, _, _ = detection_rates(replace(template, mean_photon_number=mu), det, zero)
        if signal <= 0:
            raise NoSolution("detector efficiency or pulse rate is zero; no signal can reach the receiver")
        intrinsic = (target_qber * (signal + dark) - 0.5 * dark) / signal
        return replace(template, mean_photon_number=mu, intrinsic_error=min(0.5, max(0.0, intrinsic)))

    def mismatch(mu: float) -> float:
        return predict(candidate(mu), det, zero).skr - target_skr

    lo, hi = mu_bounds
    if mismatch(lo) * mismatch(hi) > 0:
        raise NoSolution(
            f"key rate {target_skr} bps is unreachable for mean photon number in [{lo}, {hi}]"
        )

    mu = bisect(mismatch, lo, hi, xtol=1e-15, rtol=rtol, maxiter=maxiter)
    params = candidate(mu)

    check = predict(params, det, zero)
    skr_ok = abs(check.skr - target_skr) <= _CLOSURE_TOLERANCE * target_skr
    qber_ok = abs(check.qber - target_qber) <= _CLOSURE_TOLERANCE * max(target_qber, 1e-4)
    if not (skr_ok and qber_ok):
        raise NoSolution(
            f"calibration did not close: skr={check.skr:.6g} (target {target_skr}), "
            f"qber={check.qber:.6g} (target {target_qber})"
        )

    log_info(
        "[Calibration] baseline solved",
        mean_photon_number=f"{params.mean_photon_number:.6g}",
        intrinsic_error=f"{params.intrinsic_error:.6g}",
        skr=f"{check.skr:.6g}",
        qber=f"{check.qber:.6g}",
    )
    return params
