"""Photon-pair source modelling under coherent and incoherent pumping."""

from ._core import (
    Brightness,
    SfwmError,
    car,
    car_peak,
    chsh,
    convolution_factor_gaussian,
    fidelity,
    interval_overlap_quadrature,
    itu_channel,
    mc_phase_average,
    parse_frequency,
    reference_purities,
    run_cli,
    sagnac_state,
    schmidt_purity,
    sinc,
    split_step_sum,
)

__all__ = [
    "Brightness",
    "SfwmError",
    "car",
    "car_peak",
    "chsh",
    "convolution_factor_gaussian",
    "fidelity",
    "interval_overlap_quadrature",
    "itu_channel",
    "mc_phase_average",
    "parse_frequency",
    "reference_purities",
    "run_cli",
    "sagnac_state",
    "schmidt_purity",
    "sinc",
    "split_step_sum",
]
