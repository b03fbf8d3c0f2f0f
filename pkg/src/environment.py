"""
Building Environment Module for the open-office HVAC simulator
Wires the thermal model, VAV plants, schedule, weather and reward into a
reset/step loop that produces DQN states and EpisodeLog rows.
"""

import logging
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .baseline_control import Schedule, is_work_time
from .data_loader import BuildingConfig
from .dqn_agent import encode_state
from .errors import UsageError, WeatherFormatError
from .hvac_plant import (
    PhysicalCommand, VavStatus, electric_energy, plant_output, translate_action,
)
from .metrics import log_columns
from .reward import HEURISTIC, RewardBreakdown, RewardWeights, compute_reward, energy_scale
from .thermal_sim import ThermalState, check_stability, integrate_interval, substep_count
from .units import f_to_k, k_to_f
from .weather import weather_samples

logger = logging.getLogger(__name__)


def align_weather(series: pd.DataFrame, step_minutes: int, n_steps: int) -> pd.DataFrame:
    """One weather row per control step (t = 0, step, 2·step, ...)"""
    t = series['t_min'].to_numpy(dtype=float)
    spacing = t[1] - t[0] if len(t) > 1 else float(step_minutes)
    if step_minutes % spacing != 0:
        raise WeatherFormatError(f"weather spacing {spacing:g} min does not divide the {step_minutes} min step")
    stride = int(step_minutes // spacing)
    aligned = series.iloc[::stride].reset_index(drop=True)
    if len(aligned) < n_steps:
        raise WeatherFormatError(f"weather covers {len(aligned)} steps, the episode needs {n_steps}")
    return aligned.iloc[:n_steps].reset_index(drop=True)


class BuildingEnv:
    """
    Building driven step by step with per-zone comfort-policy bits
    (bits hold for the interval, the thermostat runs every substep)
    """

    def __init__(self, building: BuildingConfig, weather: pd.DataFrame, step_minutes: int,
                 n_steps: int, weights: Optional[RewardWeights] = None, reward_mode: str = HEURISTIC,
                 max_substep_s: float = 120.0):
        self.building = building
        self.model = building.model
        self.vavs = building.vavs
        self.bands = building.bands
        self.schedule: Schedule = building.schedule
        self.step_minutes = step_minutes
        self.n_steps = n_steps
        self.weights = weights or RewardWeights()
        self.reward_mode = reward_mode
        self.max_substep_s = max_substep_s

        self.weather = align_weather(weather, step_minutes, n_steps)
        self.samples = weather_samples(self.weather)
        self.interval_s = step_minutes * 60.0
        self.c_p = self.model.air_specific_heat
        self.e_scale = energy_scale(self.vavs, self.bands, self.interval_s, self.c_p)

        substep = self.interval_s / substep_count(self.interval_s, max_substep_s)
        check_stability(self.model, substep, [v.mass_flow_on for v in self.vavs])
        self.reset()

    @property
    def n_zones(self) -> int:
        return self.model.n_zones

    @property
    def done(self) -> bool:
        return self.t >= self.n_steps

    def reset(self) -> np.ndarray:
        self.state = ThermalState.uniform(self.model, f_to_k(self.building.initial_temp_f), clock=0.0)
        self.statuses = [VavStatus() for _ in self.vavs]
        self.prev_actions = np.zeros(self.n_zones, dtype=int)
        self.t = 0
        return self.observe()

    def zone_temps_f(self) -> np.ndarray:
        return k_to_f(self.state.zone_temps)

    def work_now(self) -> bool:
        return is_work_time(self.state.clock, self.schedule)

    def observe(self) -> np.ndarray:
        """State vector from values available at the current step only"""
        sample = self.samples[min(self.t, self.n_steps - 1)]
        return encode_state(k_to_f(sample.outdoor_drybulb), self.zone_temps_f(),
                            self.work_now(), self.prev_actions)

    def _flows(self, actions: np.ndarray, energy: list):
        def flow_fn(state: ThermalState, dt: float) -> np.ndarray:
            flows = np.empty((self.n_zones, 2))
            for i, (spec, status) in enumerate(zip(self.vavs, self.statuses)):
                t_zone = float(state.zone_temps[i])
                cmd = translate_action(int(actions[i]), t_zone, self.bands, status.physical)
                self.statuses[i] = VavStatus(int(actions[i]), cmd)
                energy[0] += electric_energy(cmd, spec, t_zone, dt, self.c_p)
                flows[i] = plant_output(cmd, spec, t_zone)
            return flows
        return flow_fn

    def step(self, logical_actions: Sequence[int]) -> tuple:
        """
        Apply one comfort-policy bit per VAV for one control interval

        Args:
            logical_actions: 0/1 per zone (zone order of the building)

        Returns:
            (next state vector, RewardBreakdown, EpisodeLog row dict)
        """
        if self.done:
            raise UsageError("episode is over; call reset()")
        actions = np.asarray(logical_actions, dtype=int)
        if actions.shape != (self.n_zones,) or np.any((actions != 0) & (actions != 1)):
            raise UsageError(f"expected {self.n_zones} logical actions in {{0, 1}}")

        # a changed comfort policy releases the previous thermostat latch
        self.statuses = [
            s if s.logical_action == a else VavStatus(int(a), PhysicalCommand.IDLE)
            for s, a in zip(self.statuses, actions)
        ]

        sample = self.samples[self.t]
        occupied = self.work_now()
        energy = [0.0]
        self.state = integrate_interval(self.model, self.state, sample, self._flows(actions, energy),
                                        occupied, self.interval_s, self.max_substep_s)

        temps_f = self.zone_temps_f()
        work = self.work_now()
        reward: RewardBreakdown = compute_reward(
            temps_f, energy[0], actions, self.prev_actions, self.weights, self.bands,
            self.e_scale, work, self.reward_mode,
        )

        row = {'t_min': self.state.clock, 'outdoor_F': k_to_f(sample.outdoor_drybulb)}
        for i in range(self.n_zones):
            row[f'zone{i + 1}_F'] = float(temps_f[i])
        for i in range(self.n_zones):
            row[f'vav{i + 1}'] = int(actions[i])
        for i, status in enumerate(self.statuses):
            row[f'phys{i + 1}'] = status.physical.value
        row.update({'energy_J': energy[0], 'l_t': reward.l_t, 'l_e': reward.l_e, 'l_s': reward.l_s,
                    'reward': reward.total, 'work': int(work)})

        self.prev_actions = actions
        self.t += 1
        return self.observe(), reward, row

    def log_frame(self, rows: list) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=log_columns(self.n_zones))
