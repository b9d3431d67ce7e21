"""
Unit conversions shared by the physics services.

Frequencies are compared as integer Hz so grid arithmetic (f_i + f_j - f_k,
passband membership) is exact; powers cross between dBm and linear mW.
"""

from __future__ import annotations

import math

from ..constants import HZ_PER_GHZ, HZ_PER_THZ


def thz_to_hz(freq_thz: float) -> int:
    """Round a THz frequency onto the integer-Hz grid."""
    return int(round(freq_thz * HZ_PER_THZ))


def hz_to_thz(freq_hz: int) -> float:
    return freq_hz / HZ_PER_THZ


def ghz_to_hz(value_ghz: float) -> int:
    return int(round(value_ghz * HZ_PER_GHZ))


def from_db(value_db: float) -> float:
    """Linear ratio from dB."""
    return 10.0 ** (value_db / 10.0)


def to_db(ratio: float) -> float:
    """dB from a linear ratio; -inf for zero."""
    if ratio <= 0:
        return -math.inf
    return 10.0 * math.log10(ratio)


def dbm_to_mw(power_dbm: float) -> float:
    return from_db(power_dbm)


def mw_to_dbm(power_mw: float) -> float:
    return to_db(power_mw)


def db_to_nepers(attenuation_db: float) -> float:
    """Field-intensity attenuation: dB/km to 1/km (alpha = dB * ln10 / 10)."""
    return attenuation_db * math.log(10.0) / 10.0
