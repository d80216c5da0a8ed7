"""Sub-level set volumes, oscillatory integrals and singular integrals of real polynomials."""

from ._core import (
    ExponentBracket,
    Polynomial,
    PowerLawFit,
    VolumeCurve,
    decay_sweep,
    default_config,
    domain_volume,
    epsilon_family,
    estimate_volume,
    exponent_bracket,
    fit_power_law,
    oscillatory_integral,
    parse,
    run_command,
    singular_integral,
    star_check,
    sublevel_measure_1d,
    verify_bracket,
    volume_curve,
    volume_sweep,
)

__all__ = [
    "ExponentBracket",
    "Polynomial",
    "PowerLawFit",
    "VolumeCurve",
    "decay_sweep",
    "default_config",
    "domain_volume",
    "epsilon_family",
    "estimate_volume",
    "exponent_bracket",
    "fit_power_law",
    "oscillatory_integral",
    "parse",
    "run_command",
    "singular_integral",
    "star_check",
    "sublevel_measure_1d",
    "verify_bracket",
    "volume_curve",
    "volume_sweep",
]
