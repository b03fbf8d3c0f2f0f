"""
HVAC Plant Module for the open-office HVAC simulator
Per-zone VAV units: comfort-policy translation to heat/cool/idle commands,
supply-air output and electric energy accounting.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .errors import ConfigError
from .thermal_sim import BuildingModel, WeatherSample, solve_steady_state
from .units import delta_f_to_k, f_to_k, k_to_f

logger = logging.getLogger(__name__)

COMFORT_OFF = 0
COMFORT_ON = 1


class PhysicalCommand(str, Enum):
    HEAT_ON = "HeatOn"
    COOL_ON = "CoolOn"
    IDLE = "Idle"


@dataclass(frozen=True)
class VavSpec:
    zone_id: int
    mass_flow_on: float = 0.5
    supply_temp_heat: float = f_to_k(104.0)  # 40 °C
    supply_temp_cool: float = f_to_k(55.0)   # 12.8 °C
    cop_heat: float = 3.0
    cop_cool: float = 3.5
    fan_power: float = 200.0

    def __post_init__(self):
        if self.mass_flow_on <= 0:
            raise ConfigError(f"vav {self.zone_id}: mass_flow_on must be positive")
        if self.supply_temp_heat <= self.supply_temp_cool:
            raise ConfigError(f"vav {self.zone_id}: heating supply must be warmer than cooling supply")
        if self.cop_heat <= 0 or self.cop_cool <= 0:
            raise ConfigError(f"vav {self.zone_id}: COPs must be positive")
        if self.fan_power < 0:
            raise ConfigError(f"vav {self.zone_id}: fan_power must be >= 0")


@dataclass(frozen=True)
class ComfortBands:
    """Comfort band [71, 74] °F and safe band [60, 90] °F, stored in Kelvin"""
    comfort_low: float = f_to_k(71.0)
    comfort_high: float = f_to_k(74.0)
    safe_low: float = f_to_k(60.0)
    safe_high: float = f_to_k(90.0)
    hysteresis: float = 0.3

    def __post_init__(self):
        if not self.safe_low < self.comfort_low < self.comfort_high < self.safe_high:
            raise ConfigError("bands must satisfy safe_low < comfort_low < comfort_high < safe_high")
        if self.hysteresis < 0:
            raise ConfigError("hysteresis must be >= 0")

    @classmethod
    def from_fahrenheit(cls, comfort_low=71.0, comfort_high=74.0, safe_low=60.0, safe_high=90.0,
                        hysteresis=0.54) -> "ComfortBands":
        return cls(f_to_k(comfort_low), f_to_k(comfort_high), f_to_k(safe_low), f_to_k(safe_high),
                   delta_f_to_k(hysteresis))

    def active_band(self, logical: int) -> tuple:
        """
        Band the thermostat holds for a comfort-policy bit (K)

        The safe band is pulled in by the hysteresis so a zone turning around
        within one substep never crosses safe_low or safe_high.
        """
        if logical == COMFORT_ON:
            return self.comfort_low, self.comfort_high
        return self.safe_low + self.hysteresis, self.safe_high - self.hysteresis

    def slack_band(self) -> tuple:
        """Safe band widened by the hysteresis (K), the envelope no zone may leave"""
        return self.safe_low - self.hysteresis, self.safe_high + self.hysteresis

    # rounded so a band edge given in °F compares equal to itself after the K round trip
    def comfort_band_f(self) -> tuple:
        return round(k_to_f(self.comfort_low), 9), round(k_to_f(self.comfort_high), 9)

    def safe_band_f(self) -> tuple:
        return round(k_to_f(self.safe_low), 9), round(k_to_f(self.safe_high), 9)


@dataclass(frozen=True)
class VavStatus:
    logical_action: int = COMFORT_OFF
    physical: PhysicalCommand = PhysicalCommand.IDLE


def translate_action(logical: int, t_zone: float, bands: ComfortBands,
                     previous: PhysicalCommand = PhysicalCommand.IDLE) -> PhysicalCommand:
    """
    Translate a comfort-policy bit into a physical VAV command

    Args:
        logical: 1 = comfort policy ON (comfort band), 0 = OFF (safe band)
        t_zone: Zone temperature (K)
        bands: Comfort and safe bands
        previous: Command issued at the previous evaluation (hysteresis memory)

    Returns:
        HeatOn below the active band, CoolOn above it; inside the band a running
        unit keeps going until it passes the band midpoint by the hysteresis.
    """
    low, high = bands.active_band(logical)
    if t_zone < low:
        return PhysicalCommand.HEAT_ON
    if t_zone > high:
        return PhysicalCommand.COOL_ON

    midpoint = (low + high) / 2.0
    if previous is PhysicalCommand.HEAT_ON and t_zone < midpoint + bands.hysteresis:
        return PhysicalCommand.HEAT_ON
    if previous is PhysicalCommand.COOL_ON and t_zone > midpoint - bands.hysteresis:
        return PhysicalCommand.COOL_ON
    return PhysicalCommand.IDLE


def plant_output(cmd: PhysicalCommand, spec: VavSpec, t_zone: Optional[float] = None) -> tuple:
    """
    Supply air delivered for a command

    Returns:
        (mass_flow kg/s, supply_temp K); Idle returns zero flow with the zone
        temperature as a placeholder supply temperature
    """
    if cmd is PhysicalCommand.HEAT_ON:
        return spec.mass_flow_on, spec.supply_temp_heat
    if cmd is PhysicalCommand.COOL_ON:
        return spec.mass_flow_on, spec.supply_temp_cool
    placeholder = t_zone if t_zone is not None else (spec.supply_temp_heat + spec.supply_temp_cool) / 2.0
    return 0.0, placeholder


def electric_energy(cmd: PhysicalCommand, spec: VavSpec, t_zone: float, dt: float,
                    c_p: float = 1005.0) -> float:
    """
    Electric energy drawn over dt seconds

    Thermal power |m·c_p·(T_hvac - T)| divided by the mode's COP, plus fan power
    while air is moving.
    """
    if cmd is PhysicalCommand.IDLE:
        return 0.0
    mass_flow, supply = plant_output(cmd, spec, t_zone)
    cop = spec.cop_heat if cmd is PhysicalCommand.HEAT_ON else spec.cop_cool
    thermal = abs(mass_flow * c_p * (supply - t_zone))
    return (thermal / cop + spec.fan_power) * dt


def max_electric_power(spec: VavSpec, bands: ComfortBands, c_p: float = 1005.0) -> float:
    """Largest electric draw (W) of a unit while its zone stays inside the slack band"""
    low, high = bands.slack_band()
    heat = spec.mass_flow_on * c_p * (spec.supply_temp_heat - low) / spec.cop_heat
    cool = spec.mass_flow_on * c_p * (high - spec.supply_temp_cool) / spec.cop_cool
    return max(heat, cool) + spec.fan_power


def sizing_report(model: BuildingModel, vavs: Sequence[VavSpec], bands: ComfortBands,
                  outdoor_low_f: float = 25.0, outdoor_high_f: float = 110.0,
                  solar_boost: float = 20.0) -> pd.DataFrame:
    """
    Check every plant against steady-state envelope loads at weather extremes

    Args:
        model: Building model
        vavs: VAV specs in zone order
        bands: Comfort and safe bands
        outdoor_low_f: Coldest outdoor temperature considered (°F)
        outdoor_high_f: Hottest outdoor temperature considered (°F)
        solar_boost: Solar temperature rise at the hot extreme (K)

    Returns:
        DataFrame with one row per zone: steady temperature with full heating in
        the cold extreme, with full cooling in the hot extreme, and an ok flag
    """
    cold = WeatherSample(0.0, f_to_k(outdoor_low_f), f_to_k(outdoor_low_f))
    hot = WeatherSample(0.0, f_to_k(outdoor_high_f), f_to_k(outdoor_high_f) + solar_boost)

    heating = np.array([[v.mass_flow_on, v.supply_temp_heat] for v in vavs])
    cooling = np.array([[v.mass_flow_on, v.supply_temp_cool] for v in vavs])

    cold_temps = solve_steady_state(model, heating, cold, occupied=False)
    hot_temps = solve_steady_state(model, cooling, hot, occupied=True)

    rows = []
    for zone_id, t_cold, t_hot in zip(model.zone_ids, cold_temps, hot_temps):
        ok = t_cold >= bands.safe_low and t_hot <= bands.safe_high
        rows.append({
            'zone': zone_id,
            'heating_steady_F': k_to_f(t_cold),
            'cooling_steady_F': k_to_f(t_hot),
            'ok': bool(ok),
        })
        if not ok:
            logger.warning(
                "zone %s plant is undersized: %.1f F with full heating at %.0f F outdoor, "
                "%.1f F with full cooling at %.0f F outdoor",
                zone_id, k_to_f(t_cold), outdoor_low_f, k_to_f(t_hot), outdoor_high_f,
            )
    return pd.DataFrame(rows)
