"""
Weather Module for the open-office HVAC simulator
Synthetic outdoor dry-bulb / solar-temperature series for seven US climates.

A weather series is a DataFrame with columns t_min, outdoor_F, t_sol_F (one row
per control step, t_min measured from Monday 00:00). The °F columns are the
canonical values; Kelvin is derived when samples are handed to the simulator.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import pandas as pd

from .errors import ConfigError, UsageError
from .thermal_sim import WeatherSample
from .units import delta_f_to_k, delta_k_to_f, f_to_k, k_to_f

logger = logging.getLogger(__name__)

OUTDOOR_MIN_F = 25.0
OUTDOOR_MAX_F = 110.0
SOLAR_BOOST_K = 20.0
WEATHER_COLUMNS = ['t_min', 'outdoor_F', 't_sol_F']


@dataclass(frozen=True)
class WeatherProfile:
    """Annual mean and amplitudes in Kelvin; humidity is carried for reporting only"""
    name: str
    annual_mean: float
    seasonal_amplitude: float
    diurnal_amplitude: float
    noise_std: float
    humidity_mean: float = 0.0

    def __post_init__(self):
        if min(self.seasonal_amplitude, self.diurnal_amplitude, self.noise_std) < 0:
            raise ConfigError(f"profile {self.name}: amplitudes and noise must be >= 0")
        if not 0.0 <= self.humidity_mean <= 1.0:
            raise ConfigError(f"profile {self.name}: humidity_mean is a fraction in [0, 1]")

    @classmethod
    def from_fahrenheit(cls, name: str, mean_f: float, seasonal_f: float, diurnal_f: float,
                        noise_f: float, humidity_pct: float = 0.0) -> "WeatherProfile":
        return cls(name, f_to_k(mean_f), delta_f_to_k(seasonal_f), delta_f_to_k(diurnal_f),
                   delta_f_to_k(noise_f), humidity_pct / 100.0)


# ─── Climate catalog (annual means and humidity of the TMY3 sites) ───

PROFILES = {
    p.name: p for p in (
        WeatherProfile.from_fahrenheit('greenville', 60.17, 16.0, 10.0, 4.0, 67.81),
        WeatherProfile.from_fahrenheit('phoenix', 74.89, 17.0, 14.0, 3.0, 34.18),
        WeatherProfile.from_fahrenheit('los_angeles', 62.01, 7.0, 8.0, 4.0, 69.92),
        WeatherProfile.from_fahrenheit('miami', 76.13, 6.0, 6.0, 3.0, 72.57),
        WeatherProfile.from_fahrenheit('boston', 51.11, 21.0, 9.0, 5.0, 65.71),
        WeatherProfile.from_fahrenheit('international_falls', 38.09, 30.0, 11.0, 6.0, 70.71),
        WeatherProfile.from_fahrenheit('houston', 69.97, 13.0, 9.0, 4.0, 74.27),
    )
}


def get_profile(name: str) -> WeatherProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise UsageError(f"unknown weather profile {name!r}, expected one of {sorted(PROFILES)}") from None


def solar_temperature_f(outdoor_f, hour, solar_boost: float = SOLAR_BOOST_K):
    """
    Radiant sky temperature driving the window term

    Args:
        outdoor_f: Outdoor dry-bulb (°F), scalar or array
        hour: Hour of day in [0, 24)
        solar_boost: Peak rise at solar noon (K)

    Returns:
        T_sol in °F: O + boost·sin(π·(hour−6)/12) between 06:00 and 18:00, O otherwise
    """
    hour = np.asarray(hour, dtype=float)
    daylight = (hour >= 6.0) & (hour <= 18.0)
    rise = np.where(daylight, np.maximum(0.0, np.sin(np.pi * (hour - 6.0) / 12.0)), 0.0)
    return outdoor_f + delta_k_to_f(solar_boost) * rise


def generate_weather(profile: Union[WeatherProfile, str], duration_days: int, step_minutes: int,
                     seed: Union[int, np.random.SeedSequence, None] = 0,
                     solar_boost: float = SOLAR_BOOST_K) -> pd.DataFrame:
    """
    Generate a synthetic weather series

    Args:
        profile: WeatherProfile or catalog name
        duration_days: Number of simulated days
        step_minutes: Sample spacing in minutes
        seed: Seed for the Gaussian noise stream
        solar_boost: Peak solar rise (K)

    Returns:
        DataFrame with t_min, outdoor_F, t_sol_F
    """
    if isinstance(profile, str):
        profile = get_profile(profile)
    if duration_days < 1 or step_minutes <= 0:
        raise UsageError("duration_days must be >= 1 and step_minutes positive")

    rng = np.random.default_rng(seed)
    n = int(duration_days * 1440 // step_minutes)
    t_min = np.arange(n, dtype=np.int64) * int(step_minutes)
    day = t_min / 1440.0
    hour = (t_min % 1440) / 60.0

    outdoor_k = (
        profile.annual_mean
        + profile.seasonal_amplitude * np.sin(2.0 * np.pi * day / 365.0 - np.pi / 2.0)
        + profile.diurnal_amplitude * np.sin(2.0 * np.pi * (hour - 9.0) / 24.0)
        + rng.normal(0.0, profile.noise_std, size=n)
    )
    outdoor_f = np.clip(k_to_f(outdoor_k), OUTDOOR_MIN_F, OUTDOOR_MAX_F)

    logger.debug("generated %d weather samples for %s", n, profile.name)
    return pd.DataFrame({
        't_min': t_min,
        'outdoor_F': outdoor_f,
        't_sol_F': solar_temperature_f(outdoor_f, hour, solar_boost),
    })


def weather_samples(series: pd.DataFrame) -> list:
    """Convert a weather DataFrame into simulator WeatherSamples (Kelvin)"""
    outdoor_k = f_to_k(series['outdoor_F'].to_numpy(dtype=float))
    sol_k = f_to_k(series['t_sol_F'].to_numpy(dtype=float))
    return [WeatherSample(float(t), float(o), float(s))
            for t, o, s in zip(series['t_min'].to_numpy(dtype=float), outdoor_k, sol_k)]


def weather_stats(series: pd.DataFrame, profile: Optional[WeatherProfile] = None) -> dict:
    """Outdoor mean / max / min in °F, plus the profile's humidity when known"""
    stats = {
        'outdoor_mean_F': float(series['outdoor_F'].mean()),
        'outdoor_max_F': float(series['outdoor_F'].max()),
        'outdoor_min_F': float(series['outdoor_F'].min()),
    }
    if profile is not None:
        stats['humidity_mean_pct'] = profile.humidity_mean * 100.0
    return stats
