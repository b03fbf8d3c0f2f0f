"""
Thermal Simulation Module for the open-office HVAC simulator
Lumped multi-zone heat balance (conduction, convection, solar, HVAC terms)
integrated with explicit forward Euler.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import fsolve

from .errors import ConfigError, IntegrationBlowupError, StabilityError, UsageError

logger = logging.getLogger(__name__)

STEFAN_BOLTZMANN = 5.670374419e-8  # W m^-2 K^-4
OUTDOOR = 0  # reserved coupling endpoint: the outside air at O_t
RADIATIVE_T_REF = 330.0  # K, upper bound used to linearize the quartic term
STABILITY_LIMIT = 0.5
WEATHER_MIN_K = 233.0
WEATHER_MAX_K = 330.0
SOLAR_BELOW_OUTDOOR_K = 5.0  # largest allowed drop of t_sol under the dry-bulb


# ══════════════════════════════════════════════════════════════════════
# DOMAIN TYPES
# ══════════════════════════════════════════════════════════════════════

class CouplingKind(str, Enum):
    CONDUCTIVE = "conductive"
    CONVECTIVE = "convective"


@dataclass(frozen=True)
class ZoneSpec:
    """
    One thermal zone treated as a single air node.

    Internal gains default to 10 W/m² occupied and 1 W/m² vacant when not given.
    """
    id: int
    floor_area: float
    height: float
    window_area: float = 0.0
    window_absorptance: float = 0.0
    thermal_mass_multiplier: float = 5.0
    internal_gain_occupied: Optional[float] = None
    internal_gain_vacant: Optional[float] = None

    def __post_init__(self):
        if self.id == OUTDOOR:
            raise ConfigError(f"zone id {OUTDOOR} is reserved for the outdoor boundary")
        if self.floor_area <= 0 or self.height <= 0:
            raise ConfigError(f"zone {self.id}: floor_area and height must be positive")
        if self.window_area < 0:
            raise ConfigError(f"zone {self.id}: window_area must be >= 0")
        if not 0.0 <= self.window_absorptance <= 1.0:
            raise ConfigError(f"zone {self.id}: window_absorptance must lie in [0, 1]")
        if self.thermal_mass_multiplier < 1.0:
            raise ConfigError(f"zone {self.id}: thermal_mass_multiplier must be >= 1")
        if self.internal_gain_occupied is None:
            object.__setattr__(self, "internal_gain_occupied", 10.0 * self.floor_area)
        if self.internal_gain_vacant is None:
            object.__setattr__(self, "internal_gain_vacant", 1.0 * self.floor_area)

    @property
    def volume(self) -> float:
        return self.floor_area * self.height


@dataclass(frozen=True)
class Coupling:
    """
    Symmetric heat exchange between two zones (or a zone and `OUTDOOR`).

    Conductive couplings model solid walls (k/d·A), convective couplings model
    air walls (h·A).
    """
    zone_a: int
    zone_b: int
    kind: CouplingKind
    surface_area: float
    conductivity: Optional[float] = None
    thickness: Optional[float] = None
    convective_coefficient: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", CouplingKind(self.kind))
        label = f"coupling {self.zone_a}-{self.zone_b}"
        if self.zone_a == self.zone_b:
            raise ConfigError(f"{label}: endpoints must differ")
        if self.surface_area <= 0:
            raise ConfigError(f"{label}: surface_area must be positive")
        if self.kind is CouplingKind.CONDUCTIVE:
            if self.conductivity is None or self.thickness is None or self.convective_coefficient is not None:
                raise ConfigError(f"{label}: conductive couplings take conductivity and thickness only")
            if self.conductivity <= 0 or self.thickness <= 0:
                raise ConfigError(f"{label}: conductivity and thickness must be positive")
        else:
            if self.convective_coefficient is None or self.conductivity is not None or self.thickness is not None:
                raise ConfigError(f"{label}: convective couplings take convective_coefficient only")
            if self.convective_coefficient <= 0:
                raise ConfigError(f"{label}: convective_coefficient must be positive")

    @property
    def conductance(self) -> float:
        """Heat exchanged per kelvin of difference, W/K"""
        if self.kind is CouplingKind.CONDUCTIVE:
            return self.conductivity / self.thickness * self.surface_area
        return self.convective_coefficient * self.surface_area

    @property
    def is_exterior(self) -> bool:
        return OUTDOOR in (self.zone_a, self.zone_b)

    def pair(self) -> tuple:
        return tuple(sorted((self.zone_a, self.zone_b)))


@dataclass(frozen=True, eq=False)
class BuildingModel:
    zones: tuple
    couplings: tuple = ()
    air_density: float = 1.2
    air_specific_heat: float = 1005.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "zones", tuple(self.zones))
        object.__setattr__(self, "couplings", tuple(self.couplings))
        if not self.zones:
            raise ConfigError("a building needs at least one zone")
        if self.air_density <= 0 or self.air_specific_heat <= 0:
            raise ConfigError("air constants must be positive")
        ids = [z.id for z in self.zones]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"zone ids must be unique, got {ids}")
        known = set(ids) | {OUTDOOR}
        seen = set()
        for c in self.couplings:
            if c.zone_a not in known or c.zone_b not in known:
                raise ConfigError(f"coupling {c.zone_a}-{c.zone_b} references an unknown zone")
            if c.pair() in seen:
                raise ConfigError(f"duplicate coupling {c.pair()}: one record serves both directions")
            seen.add(c.pair())

    @property
    def n_zones(self) -> int:
        return len(self.zones)

    @cached_property
    def zone_ids(self) -> tuple:
        return tuple(z.id for z in self.zones)

    @cached_property
    def zone_index(self) -> dict:
        return {z.id: i for i, z in enumerate(self.zones)}

    @cached_property
    def capacities(self) -> np.ndarray:
        """C_i = rho * V_i * c_p * thermal_mass_multiplier, J/K"""
        return np.array([
            self.air_density * z.volume * self.air_specific_heat * z.thermal_mass_multiplier
            for z in self.zones
        ])

    @cached_property
    def interior_edges(self) -> tuple:
        """(index_a, index_b, conductance) arrays for zone-to-zone couplings"""
        inner = [c for c in self.couplings if not c.is_exterior]
        a = np.array([self.zone_index[c.zone_a] for c in inner], dtype=int)
        b = np.array([self.zone_index[c.zone_b] for c in inner], dtype=int)
        g = np.array([c.conductance for c in inner], dtype=float)
        return a, b, g

    @cached_property
    def exterior_conductance(self) -> np.ndarray:
        g = np.zeros(self.n_zones)
        for c in self.couplings:
            if c.is_exterior:
                zone = c.zone_b if c.zone_a == OUTDOOR else c.zone_a
                g[self.zone_index[zone]] += c.conductance
        return g

    @cached_property
    def window_coefficients(self) -> np.ndarray:
        """sigma * alpha_win * A_win per zone"""
        return np.array([STEFAN_BOLTZMANN * z.window_absorptance * z.window_area for z in self.zones])

    @cached_property
    def internal_gains(self) -> tuple:
        occupied = np.array([z.internal_gain_occupied for z in self.zones], dtype=float)
        vacant = np.array([z.internal_gain_vacant for z in self.zones], dtype=float)
        return occupied, vacant

    @property
    def has_exterior(self) -> bool:
        return any(c.is_exterior for c in self.couplings)

    @property
    def is_connected(self) -> bool:
        """True when the interior coupling graph links every zone"""
        if self.n_zones == 1:
            return True
        a, b, _ = self.interior_edges
        reached = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in np.concatenate([b[a == i], a[b == i]]):
                if int(j) not in reached:
                    reached.add(int(j))
                    frontier.append(int(j))
        return len(reached) == self.n_zones

    def adiabatic(self) -> "BuildingModel":
        """Copy without outdoor couplings and without windows"""
        zones = tuple(replace(z, window_area=0.0) for z in self.zones)
        couplings = tuple(c for c in self.couplings if not c.is_exterior)
        return replace(self, zones=zones, couplings=couplings)

    def coupling_conductance(self) -> np.ndarray:
        """Total coupling conductance seen by each zone, W/K"""
        a, b, g = self.interior_edges
        total = np.bincount(a, weights=g, minlength=self.n_zones) + np.bincount(b, weights=g, minlength=self.n_zones)
        return total + self.exterior_conductance


@dataclass(frozen=True)
class WeatherSample:
    timestamp: float
    outdoor_drybulb: float
    solar_temperature: float

    def __post_init__(self):
        if not WEATHER_MIN_K <= self.outdoor_drybulb <= WEATHER_MAX_K:
            raise UsageError(f"outdoor temperature {self.outdoor_drybulb:.2f} K outside [{WEATHER_MIN_K}, {WEATHER_MAX_K}]")
        if self.solar_temperature < self.outdoor_drybulb - SOLAR_BELOW_OUTDOOR_K:
            raise UsageError(f"solar temperature must be >= outdoor temperature - {SOLAR_BELOW_OUTDOOR_K:g} K")


@dataclass(frozen=True, eq=False)
class ThermalState:
    zone_temps: np.ndarray
    clock: float = 0.0

    def __post_init__(self):
        temps = np.array(self.zone_temps, dtype=float)
        temps.setflags(write=False)
        object.__setattr__(self, "zone_temps", temps)

    @classmethod
    def uniform(cls, model: BuildingModel, temp_k: float, clock: float = 0.0) -> "ThermalState":
        return cls(np.full(model.n_zones, float(temp_k)), clock)


# ══════════════════════════════════════════════════════════════════════
# HEAT FLOW TERMS
# ══════════════════════════════════════════════════════════════════════

def conduction_flux(coupling: Coupling, t_a: float, t_b: float) -> float:
    """
    Conductive heat flow into zone_a through a solid wall

    Args:
        coupling: Conductive coupling
        t_a: Temperature of zone_a (K)
        t_b: Temperature of zone_b (K)

    Returns:
        (k/d)·A·(t_b - t_a) in W
    """
    if coupling.kind is not CouplingKind.CONDUCTIVE:
        raise UsageError("conduction_flux needs a conductive coupling")
    return coupling.conductivity / coupling.thickness * coupling.surface_area * (t_b - t_a)


def convection_flux(coupling: Coupling, t_a: float, t_b: float) -> float:
    """
    Convective heat flow into zone_a across an air wall

    Args:
        coupling: Convective coupling
        t_a: Temperature of zone_a (K)
        t_b: Temperature of zone_b (K)

    Returns:
        h·A·(t_b - t_a) in W
    """
    if coupling.kind is not CouplingKind.CONVECTIVE:
        raise UsageError("convection_flux needs a convective coupling")
    return coupling.convective_coefficient * coupling.surface_area * (t_b - t_a)


def coupling_flux(coupling: Coupling, t_a: float, t_b: float) -> float:
    if coupling.kind is CouplingKind.CONDUCTIVE:
        return conduction_flux(coupling, t_a, t_b)
    return convection_flux(coupling, t_a, t_b)


def solar_gain(zone: ZoneSpec, t_zone: float, t_sol: float) -> float:
    """Radiative window gain sigma·alpha·A·(T_sol^4 - T^4) in W"""
    return STEFAN_BOLTZMANN * zone.window_absorptance * zone.window_area * (t_sol ** 4 - t_zone ** 4)


def hvac_gain(mass_flow: float, c_p: float, t_supply: float, t_zone: float) -> float:
    """Supply-air heat m·c_p·(T_hvac - T); positive when heating"""
    if mass_flow < 0:
        raise UsageError(f"mass flow must be >= 0, got {mass_flow}")
    return mass_flow * c_p * (t_supply - t_zone)


def _as_flows(model: BuildingModel, hvac_flows) -> np.ndarray:
    flows = np.asarray(hvac_flows, dtype=float)
    if flows.shape != (model.n_zones, 2):
        raise UsageError(f"hvac_flows must hold one (mass_flow, supply_temp) pair per zone ({model.n_zones})")
    if np.any(flows[:, 0] < 0):
        raise UsageError("mass flows must be >= 0")
    return flows


def net_heat_flow(model: BuildingModel, state: ThermalState, hvac_flows,
                  weather: Optional[WeatherSample] = None, occupied: bool = False) -> np.ndarray:
    """
    Net heat rate ΔQ_i into every zone

    Args:
        model: Building model
        state: Current zone temperatures
        hvac_flows: Per-zone (mass_flow kg/s, supply_temp K)
        weather: Outdoor conditions. None selects the ideal environment of the
            steady-state analysis (no solar, no internal gains, no outdoor couplings)
        occupied: Use occupied internal gains

    Returns:
        Array of ΔQ_i in W, zone order of model.zones
    """
    temps = state.zone_temps
    flows = _as_flows(model, hvac_flows)

    a, b, g = model.interior_edges
    exchange = g * (temps[b] - temps[a])
    q = np.bincount(a, weights=exchange, minlength=model.n_zones) \
        - np.bincount(b, weights=exchange, minlength=model.n_zones)

    q = q + flows[:, 0] * model.air_specific_heat * (flows[:, 1] - temps)

    if weather is None:
        if model.has_exterior:
            raise UsageError("a weather sample is required for models with outdoor couplings")
        return q

    occupied_gain, vacant_gain = model.internal_gains
    q = q + (occupied_gain if occupied else vacant_gain)
    q = q + model.window_coefficients * (weather.solar_temperature ** 4 - temps ** 4)
    q = q + model.exterior_conductance * (weather.outdoor_drybulb - temps)
    return q


# ══════════════════════════════════════════════════════════════════════
# INTEGRATION
# ══════════════════════════════════════════════════════════════════════

def step(model: BuildingModel, state: ThermalState, weather: Optional[WeatherSample], hvac_flows,
         occupied: bool, dt: float) -> ThermalState:
    """
    Advance every zone temperature by one explicit Euler step

    Args:
        model: Building model
        state: Current state
        weather: Outdoor conditions held over the step
        hvac_flows: Per-zone (mass_flow, supply_temp)
        occupied: Internal gains schedule flag
        dt: Step length in seconds

    Returns:
        New ThermalState with clock advanced by dt
    """
    if dt <= 0:
        raise UsageError(f"dt must be positive, got {dt}")
    dq = net_heat_flow(model, state, hvac_flows, weather, occupied)
    temps = state.zone_temps + dq * dt / model.capacities
    clock = state.clock + dt / 60.0

    bad = np.flatnonzero(~np.isfinite(temps))
    if bad.size:
        zone = model.zone_ids[int(bad[0])]
        raise IntegrationBlowupError(f"zone {zone} temperature became non-finite at t={clock:.2f} min")
    return ThermalState(temps, clock)


def steady_state_residual(model: BuildingModel, state: ThermalState, hvac_flows,
                          weather: Optional[WeatherSample] = None, occupied: bool = False) -> np.ndarray:
    """Per-zone |heat in - heat out| in W; zero at equilibrium"""
    return np.abs(net_heat_flow(model, state, hvac_flows, weather, occupied))


def solve_steady_state(model: BuildingModel, hvac_flows, weather: Optional[WeatherSample] = None,
                       occupied: bool = False, initial_k: float = 295.0) -> np.ndarray:
    """
    Zone temperatures that zero the heat balance for fixed HVAC flows

    Returns:
        Array of temperatures in K
    """
    scale = model.capacities.mean() / 3600.0

    def residual(temps):
        return net_heat_flow(model, ThermalState(temps), hvac_flows, weather, occupied) / scale

    guess = np.full(model.n_zones, float(initial_k))
    solution, info, status, message = fsolve(residual, guess, full_output=True, xtol=1e-12)
    if status != 1:
        logger.warning("steady-state solve did not converge: %s", message)
    return solution


def stability_ratios(model: BuildingModel, dt: float, mass_flows: Optional[Sequence[float]] = None) -> np.ndarray:
    """dt·(sum of conductances + m·c_p)/C_i per zone"""
    conductance = model.coupling_conductance()
    conductance = conductance + 4.0 * model.window_coefficients * RADIATIVE_T_REF ** 3
    if mass_flows is not None:
        conductance = conductance + np.asarray(mass_flows, dtype=float) * model.air_specific_heat
    return dt * conductance / model.capacities


def check_stability(model: BuildingModel, dt: float, mass_flows: Optional[Sequence[float]] = None) -> float:
    """
    Reject Euler steps that violate the stability bound

    Returns:
        The largest per-zone ratio (always <= 0.5 on return)
    """
    ratios = stability_ratios(model, dt, mass_flows)
    worst = int(np.argmax(ratios))
    if ratios[worst] > STABILITY_LIMIT:
        raise StabilityError(
            f"dt={dt:.0f} s is unstable for zone {model.zone_ids[worst]} "
            f"(ratio {ratios[worst]:.3f} > {STABILITY_LIMIT}); use a smaller substep"
        )
    return float(ratios[worst])


def substep_count(interval_s: float, max_substep_s: float) -> int:
    if interval_s <= 0 or max_substep_s <= 0:
        raise UsageError("interval and substep must be positive")
    return max(1, math.ceil(interval_s / max_substep_s - 1e-9))


def integrate_interval(model: BuildingModel, state: ThermalState, weather: Optional[WeatherSample],
                       hvac_flow_fn: Callable[[ThermalState, float], np.ndarray], occupied: bool,
                       interval_s: float, max_substep_s: float = 120.0) -> ThermalState:
    """
    Integrate one control interval as equal Euler substeps

    hvac_flow_fn(state, dt) is consulted before every substep so a local
    thermostat can react inside the interval.
    """
    n = substep_count(interval_s, max_substep_s)
    dt = interval_s / n
    for _ in range(n):
        state = step(model, state, weather, hvac_flow_fn(state, dt), occupied, dt)
    return state
