"""
Unit conversions between the °F used at every external interface and the
Kelvin / SI values used internally.
"""

import numpy as np

ABSOLUTE_ZERO_C = 273.15


def f_to_k(temp_f):
    """Convert °F (scalar or array) to Kelvin."""
    if np.ndim(temp_f) == 0:
        return (float(temp_f) - 32.0) * 5.0 / 9.0 + ABSOLUTE_ZERO_C
    return (np.asarray(temp_f, dtype=float) - 32.0) * 5.0 / 9.0 + ABSOLUTE_ZERO_C


def k_to_f(temp_k):
    """Convert Kelvin (scalar or array) to °F."""
    if np.ndim(temp_k) == 0:
        return (float(temp_k) - ABSOLUTE_ZERO_C) * 9.0 / 5.0 + 32.0
    return (np.asarray(temp_k, dtype=float) - ABSOLUTE_ZERO_C) * 9.0 / 5.0 + 32.0


def delta_f_to_k(delta_f: float) -> float:
    """Convert a temperature difference in °F to Kelvin."""
    return float(delta_f) * 5.0 / 9.0


def delta_k_to_f(delta_k: float) -> float:
    """Convert a temperature difference in Kelvin to °F."""
    return float(delta_k) * 9.0 / 5.0
