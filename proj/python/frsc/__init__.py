"""Fee-redistribution contract mining simulator (C++ core)."""

from fractions import Fraction

from ._frsc import (
    ConfigError,
    apply_block,
    arrived_fees,
    effective_lambda_ratio,
    format_scenario,
    init_genesis,
    long_term_scenario,
    next_claim,
    parity_fees,
    parse_scenario,
    partial_claim,
    run_exp4,
    run_series,
    sample_intervals,
    triangle_wave_scenario,
)


def effective_lambda(specs):
    """Exact sum of rho * lambda over (lambda, rho_ppm) pairs, in blocks."""
    return Fraction(*effective_lambda_ratio(specs))


__all__ = [
    "ConfigError",
    "apply_block",
    "arrived_fees",
    "effective_lambda",
    "format_scenario",
    "init_genesis",
    "long_term_scenario",
    "next_claim",
    "parity_fees",
    "parse_scenario",
    "partial_claim",
    "run_exp4",
    "run_series",
    "sample_intervals",
    "triangle_wave_scenario",
]
