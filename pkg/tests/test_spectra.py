import math

import numpy as np
import pytest

from qcoexist.constants import BOLTZMANN, PLANCK
from qcoexist.services.spectra import (
    RamanSpectrum,
    default_spectrum,
    load_spectrum,
    read_spectrum_file,
    scattering_coefficient,
)
from qcoexist.utils.cache import clear_asset_cache
from qcoexist.utils.errors import (
    DuplicateDetuning,
    EmptyTable,
    ModelError,
    NegativeCoefficient,
    NegativeDetuning,
)


def test_two_row_zero_table_is_valid():
    s = load_spectrum([(0, 0.0), (40000, 0.0)])
    assert s.detunings == (0.0, 40000.0)
    assert scattering_coefficient(s, 1234.0) == 0.0


def test_rows_out_of_order_are_sorted():
    s = load_spectrum([(300, 3e-13), (0, 1e-13), (100, 2e-13)])
    assert s.detunings == (0.0, 100.0, 300.0)
    assert s.coefficients_stokes == (1e-13, 2e-13, 3e-13)


@pytest.mark.parametrize(
    "table, error",
    [
        ([(0, 1e-13)], EmptyTable),
        ([], EmptyTable),
        ([(0, 1e-13), (100, -1e-13)], NegativeCoefficient),
        ([(0, 1e-13), (100, 2e-13), (100, 3e-13)], DuplicateDetuning),
        ([(-50, 1e-13), (100, 2e-13)], NegativeDetuning),
    ],
)
def test_load_spectrum_rejects_bad_tables(table, error):
    with pytest.raises(error):
        load_spectrum(table)


def test_detuning_beyond_table_is_zero(spectrum):
    assert scattering_coefficient(spectrum, spectrum.max_detuning + 1.0, "stokes") == 0.0
    assert scattering_coefficient(spectrum, 1e6, "anti_stokes") == 0.0


def test_negative_detuning_raises(spectrum):
    with pytest.raises(NegativeDetuning):
        scattering_coefficient(spectrum, -1.0)


def test_detailed_balance_ratio_at_one_thz(spectrum):
    ratio = scattering_coefficient(spectrum, 1000.0, "anti_stokes") / scattering_coefficient(spectrum, 1000.0, "stokes")
    expected = math.exp(-PLANCK * 1e12 / (BOLTZMANN * 293.0))
    assert ratio == pytest.approx(expected, rel=1e-12)
    assert ratio == pytest.approx(0.8489, abs=1e-4)


def test_detailed_balance_holds_at_random_detunings(spectrum):
    rng = np.random.default_rng(7)
    detunings = rng.uniform(1.0, 39000.0, size=500)
    stokes = scattering_coefficient(spectrum, detunings, "stokes")
    anti = scattering_coefficient(spectrum, detunings, "anti_stokes")
    expected = stokes * np.exp(-PLANCK * detunings * 1e9 / (BOLTZMANN * spectrum.temperature))
    np.testing.assert_allclose(anti, expected, rtol=1e-12)
    assert np.all(anti <= stokes)


def test_tabulated_points_are_returned_exactly(spectrum):
    for detuning, coefficient in zip(spectrum.detunings, spectrum.coefficients_stokes):
        assert scattering_coefficient(spectrum, detuning, "stokes") == pytest.approx(coefficient, rel=1e-12, abs=0)


def test_scaling_the_table_scales_every_query(spectrum):
    scaled = spectrum.scaled(3.5)
    for detuning in (0.0, 75.0, 150.0, 1234.5, 13000.0, 39999.0):
        for branch in ("stokes", "anti_stokes"):
            assert scattering_coefficient(scaled, detuning, branch) == pytest.approx(
                3.5 * scattering_coefficient(spectrum, detuning, branch), rel=1e-12
            )


def test_default_table_peak_lies_between_one_and_one_point_four_thz(spectrum):
    grid = np.arange(100.0, 3000.0 + 1.0, 10.0)
    anti = scattering_coefficient(spectrum, grid, "anti_stokes")
    assert 1000.0 <= grid[int(np.argmax(anti))] <= 1400.0


def test_default_table_has_local_dip_near_carrier(spectrum):
    grid = np.arange(100.0, 300.0 + 1.0, 10.0)
    anti = scattering_coefficient(spectrum, grid, "anti_stokes")
    dip = grid[int(np.argmin(anti))]
    assert 100.0 < dip < 300.0
    assert scattering_coefficient(spectrum, 1200.0) > scattering_coefficient(spectrum, 200.0)


def test_spectrum_is_immutable(spectrum):
    with pytest.raises(AttributeError):
        spectrum.temperature = 10.0


def test_direct_construction_validates_temperature():
    with pytest.raises(ValueError):
        RamanSpectrum((0.0, 100.0), (1e-13, 1e-13), temperature=0.0)


def test_read_spectrum_file_skips_comments(tmp_path):
    path = tmp_path / "table.txt"
    path.write_text("# detuning, coefficient\n200, 2e-13\n0 1e-13\n\n# tail\n400,0\n", encoding="utf-8")
    s = read_spectrum_file(str(path), temperature=300.0)
    assert s.detunings == (0.0, 200.0, 400.0)
    assert s.temperature == 300.0
    assert scattering_coefficient(s, 100.0, "stokes") == pytest.approx(1.5e-13)


def test_default_spectrum_is_cached_per_temperature():
    first = default_spectrum()
    assert default_spectrum() is first
    assert default_spectrum(250.0).temperature == 250.0

    clear_asset_cache()
    reloaded = default_spectrum()
    assert reloaded is not first
    assert reloaded == first


@pytest.mark.parametrize(
    "content",
    [
        b"0, abc\n100, 1e-13\n",
        b"\xff\xfe0 1e-13\n100 2e-13\n",
    ],
)
def test_read_spectrum_file_rejects_malformed_text(tmp_path, content):
    path = tmp_path / "table.txt"
    path.write_bytes(content)
    with pytest.raises(ModelError):
        read_spectrum_file(str(path))


def test_default_spectrum_at_other_temperature_reuses_bundled_table():
    warm = default_spectrum(320.0)
    assert warm.temperature == 320.0
    assert warm.coefficients_stokes is default_spectrum().coefficients_stokes
    assert scattering_coefficient(warm, 1000.0, "anti_stokes") > scattering_coefficient(default_spectrum(), 1000.0, "anti_stokes")
