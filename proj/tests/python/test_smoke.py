import math

import numpy as np
import pytest

import sfwm_lab as s


def test_itu_channel_maps_to_grid():
    assert s.itu_channel("C34") == pytest.approx(2 * math.pi * 193.4e12)
    with pytest.raises(s.SfwmError):
        s.itu_channel("X34")


def test_parse_frequency_units():
    assert s.parse_frequency("50 GHz") == pytest.approx(2 * math.pi * 50e9)


def test_rank_one_jsa_is_pure():
    v = np.exp(-np.linspace(-2, 2, 16) ** 2)
    assert s.schmidt_purity(np.outer(v, v).astype(complex)) == pytest.approx(1.0, abs=1e-12)


def test_reference_purities_order():
    coherent, incoherent = s.reference_purities(points=128)
    assert 0.0 < coherent < incoherent <= 1.0


def test_split_step_converges_to_sinc():
    length, dk = 0.01, 300.0
    got = abs(s.split_step_sum(dk, length, 1.0, segments=4096))
    assert got == pytest.approx(length * abs(s.sinc(dk * length / 2)), rel=1e-3)


def test_square_domain_overlap():
    closed = s.convolution_factor_gaussian(20.0, 1.0)
    quad = s.interval_overlap_quadrature(20.0, 1.0, 0, 0)
    assert closed - quad == pytest.approx(2.0, rel=1e-6)


def test_phase_average_matches_intensity_sum():
    amps = [1 + 1j, 0.5, -2j]
    mean, err = s.mc_phase_average(amps, 20000, seed=5)
    assert abs(mean - sum(abs(a) ** 2 for a in amps)) < 4 * err


def test_car_noise_free_limit():
    b = s.Brightness(1e9, 4e9, 4e9)
    assert s.car(1e-3, b) > s.car(2e-3, b)
    power, peak = s.car_peak(b, 1e5, 500.0, 1e5, 500.0)
    assert s.car(power, b, 1e5, 500.0, 1e5, 500.0) == pytest.approx(peak)


def test_chsh_and_fidelity():
    assert s.chsh() == pytest.approx(2 * math.sqrt(2))
    rho = s.sagnac_state()
    assert s.fidelity(rho, rho) == pytest.approx(1.0)
    assert s.fidelity(rho, np.eye(4, dtype=complex) / 4) == pytest.approx(0.25)


def test_cli_usage_error():
    assert s.run_cli(["sfwm-lab", "no-such-command"]) != 0
