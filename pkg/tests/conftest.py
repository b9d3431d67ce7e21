"""Shared fixtures: app + CLI runner, presets, calibrated environments, FWM oracle."""

from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from qcoexist import create_app
from qcoexist.services import planner
from qcoexist.services.link import DetectorSpec, FibreSpec
from qcoexist.services.qkd import CowParams
from qcoexist.services.spectra import default_spectrum
from qcoexist.utils.presets import get_preset
from qcoexist.utils.validation import FibreConfig, FilterChainConfig

S1_FREQS = (193.50, 193.45, 193.40, 193.35, 193.30, 193.25, 193.20, 193.15)
S2_FREQS = (192.70, 192.65, 192.60, 192.55, 192.50, 192.45, 192.40, 192.35)
QUANTUM_FREQ = 193.70


@pytest.fixture
def app(monkeypatch):
    monkeypatch.setenv("QCOEXIST_CONFIG", "qcoexist.config.TestConfig")
    return create_app()


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def spectrum():
    return default_spectrum()


@pytest.fixture
def smf() -> FibreSpec:
    return FibreConfig.model_validate(get_preset("fibre", "smf")).to_spec()


@pytest.fixture
def hcnanf() -> FibreSpec:
    return FibreConfig.model_validate(get_preset("fibre", "hcnanf")).to_spec()


@pytest.fixture
def table1_chain():
    return FilterChainConfig.model_validate(get_preset("filter_chain", "table1_chain")).to_chain()


@pytest.fixture
def detector() -> DetectorSpec:
    return DetectorSpec()


@pytest.fixture
def cow_template() -> CowParams:
    return CowParams(**get_preset("cow", "cow_default"))


@pytest.fixture
def env_s1(spectrum, detector, table1_chain, cow_template):
    """Environment calibrated to the 200 GHz scenario baseline (2300 bps, 3.0 %)."""
    return planner.calibrated_environment(spectrum, detector, table1_chain, cow_template, 2300.0, 0.03)


@pytest.fixture
def env_s2(spectrum, detector, table1_chain, cow_template):
    """Environment calibrated to the 1 THz scenario baseline (2300 bps, 2.2 %)."""
    return planner.calibrated_environment(spectrum, detector, table1_chain, cow_template, 2300.0, 0.022)


@pytest.fixture
def write_config(tmp_path):
    """Write a config document to tmp_path and return its path."""
    def _write(document, name: str = "run.json") -> str:
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document)
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def _hz(freq_thz: float) -> int:
    return int(round(freq_thz * 1e12))


def brute_force_products(freqs_thz) -> set[tuple[int, int, int, int]]:
    """Every (i, j, k, f_i + f_j - f_k in Hz) with unordered pumps and k outside the pump pair."""
    grid = [_hz(f) for f in freqs_thz]
    found = set()
    for i, j, k in itertools.product(range(len(grid)), repeat=3):
        if i > j or k == i or k == j:
            continue
        found.add((i, j, k, grid[i] + grid[j] - grid[k]))
    return found


def brute_force_in_band_fwm_mw(freqs_thz, powers_mw, fibre: FibreSpec, center_thz: float, bandwidth_ghz: float) -> float:
    """Closed-form FWM sum over in-band triples of a flat-top passband at unit transmission."""
    c = 299792458.0
    alpha = fibre.attenuation_db_per_km * np.log(10.0) / 10.0
    length = fibre.length_km
    gamma = fibre.gamma_per_w_km * fibre.fwm_scale
    decay = np.exp(-alpha * length)
    l_eff = (1.0 - decay) / alpha
    grid = [_hz(f) for f in freqs_thz]
    half_band = bandwidth_ghz * 1e9 / 2.0

    total = 0.0
    for i, j, k, f in brute_force_products(freqs_thz):
        if abs(f - _hz(center_thz)) > half_band:
            continue
        lam = c / f
        dbeta = 2 * np.pi * lam**2 / c * fibre.dispersion_ps_nm_km * 1e-6 * (grid[i] - grid[k]) * (grid[j] - grid[k]) * 1e3
        eta = alpha**2 / (alpha**2 + dbeta**2) * (1 + 4 * decay * np.sin(dbeta * length / 2) ** 2 / (1 - decay) ** 2)
        d = 3.0 if i == j else 6.0
        p = [powers_mw[x] * 1e-3 for x in (i, j, k)]
        total += (d / 3) ** 2 * gamma**2 * p[0] * p[1] * p[2] * decay * l_eff**2 * eta
    return total * 1e3


@pytest.fixture
def fwm_oracle():
    return brute_force_products


@pytest.fixture
def fwm_power_oracle():
    return brute_force_in_band_fwm_mw
