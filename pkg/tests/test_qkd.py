import numpy as np
import pytest

from qcoexist.services.link import DetectorSpec, NoiseBudget
from qcoexist.services.qkd import (
    CowParams,
    binary_entropy,
    calibrate_baseline,
    detection_rates,
    predict,
    qber,
    secret_key_rate,
)
from qcoexist.utils.errors import AllRatesZero, ModelError, NoSolution


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.03) == pytest.approx(0.19439, abs=1e-5)


def test_qber_example():
    assert qber(9900.0, 100.0, 0.0, 0.025) == pytest.approx(0.02975, abs=1e-6)


def test_qber_all_zero_raises():
    with pytest.raises(AllRatesZero):
        qber(0.0, 0.0, 0.0, 0.02)


def test_qber_pure_noise_is_one_half():
    assert qber(0.0, 50.0, 50.0, 0.02) == 0.5


def test_key_rate_is_zero_at_or_above_cutoff(cow_template):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        signal, noise, dark = rng.uniform(0.0, 1e5, size=3)
        intrinsic = rng.uniform(0.0, 0.1)
        q = qber(signal, noise, dark, intrinsic)
        rate = secret_key_rate(q, signal, noise, dark, cow_template)
        assert rate >= 0.0
        if q >= cow_template.qber_cutoff:
            assert rate == 0.0


def test_key_rate_formula(cow_template):
    h2 = binary_entropy(0.02)
    expected = 10000.0 * (1.0 - cow_template.ec_efficiency * h2 - h2)
    assert secret_key_rate(0.02, 9000.0, 900.0, 100.0, cow_template) == pytest.approx(expected)


def test_cow_params_validation():
    with pytest.raises(ModelError):
        CowParams(1e6, 0.1, 0.6)
    with pytest.raises(ModelError):
        CowParams(1e6, 0.1, 0.02, ec_efficiency=0.9)
    with pytest.raises(ModelError):
        CowParams(1e6, 0.1, 0.02, sifting_ratio=0.0)


def test_signal_rate_follows_channel_loss(cow_template, detector):
    signal, noise, dark = detection_rates(cow_template, detector, NoiseBudget(raman_counts=3.0))
    assert signal == pytest.approx(1e6 * 0.1 * 10 ** -1.05 * 0.7)
    assert noise == 3.0
    assert dark == detector.dark_counts


def test_calibration_closes_on_both_targets(cow_template, detector):
    params = calibrate_baseline(2300.0, 0.03, detector, cow_template)
    baseline = predict(params, detector, NoiseBudget())
    assert baseline.skr == pytest.approx(2300.0, rel=0.01)
    assert baseline.qber == pytest.approx(0.03, rel=0.01)
    assert params.pulse_rate_hz == cow_template.pulse_rate_hz
    assert params.ec_efficiency == cow_template.ec_efficiency


def test_doubling_target_doubles_rate_product_without_dark_counts(cow_template):
    quiet = DetectorSpec(dark_count_prob=0.0)
    single = calibrate_baseline(2300.0, 0.03, quiet, cow_template)
    double = calibrate_baseline(4600.0, 0.03, quiet, cow_template)
    assert double.rate_product == pytest.approx(2.0 * single.rate_product, rel=1e-4)
    assert double.intrinsic_error == pytest.approx(0.03)


@pytest.mark.parametrize(
    "target_skr, target_qber",
    [
        (1e9, 0.03),
        (2300.0, 0.06),
        (0.0, 0.03),
    ],
)
def test_unreachable_calibration_raises(cow_template, detector, target_skr, target_qber):
    with pytest.raises(NoSolution):
        calibrate_baseline(target_skr, target_qber, detector, cow_template)


def test_noise_raises_qber_and_lowers_key_rate(env_s1):
    quiet = predict(env_s1.cow, env_s1.detector, NoiseBudget())
    noisy = predict(env_s1.cow, env_s1.detector, NoiseBudget(raman_counts=200.0))
    assert noisy.qber > quiet.qber
    assert noisy.skr < quiet.skr
    assert set(noisy.as_dict()) == {"qber", "skr_bps", "signal_cps", "noise_cps", "dark_cps"}


def test_key_rate_never_rises_with_qber(cow_template):
    rng = np.random.default_rng(41)
    for _ in range(500):
        signal, noise, dark = rng.uniform(0.0, 1e5, size=3)
        low, high = np.sort(rng.uniform(0.0, 0.5, size=2))
        assert secret_key_rate(high, signal, noise, dark, cow_template) <= secret_key_rate(
            low, signal, noise, dark, cow_template
        )


def test_qber_never_falls_with_added_noise():
    rng = np.random.default_rng(43)
    for _ in range(500):
        signal, noise, dark = rng.uniform(0.0, 1e5, size=3)
        extra = float(rng.uniform(0.0, 1e5))
        intrinsic = float(rng.uniform(0.0, 0.5))
        base = qber(signal, noise, dark, intrinsic)
        assert qber(signal, noise + extra, dark, intrinsic) >= base - 1e-12
