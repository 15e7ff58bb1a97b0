from ._core import (
    DegenerateDenominator,
    InvalidInterval,
    expected_gain,
    gain_kernel,
    gamma_star,
    mle,
    optimize,
    phi,
    pr_estimate,
    run_cli,
    sample_pattern,
    selftest,
    stein_estimate,
    window_volume,
    y_statistic,
)

__all__ = [
    "DegenerateDenominator",
    "InvalidInterval",
    "expected_gain",
    "gain_kernel",
    "gamma_star",
    "mle",
    "optimize",
    "phi",
    "pr_estimate",
    "run_cli",
    "sample_pattern",
    "selftest",
    "stein_estimate",
    "window_volume",
    "y_statistic",
]
