"""
Reward Module for the open-office HVAC simulator
Heuristic three-term reward (comfort, energy, signal smoothness), the binary
comfort ablation and the large-finite safety clamp.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, UsageError
from .hvac_plant import ComfortBands, VavSpec, max_electric_power

HEURISTIC = "heuristic"
BINARY = "binary"
REWARD_MODES = (HEURISTIC, BINARY)


@dataclass(frozen=True)
class RewardWeights:
    eta_t: float = 1.0
    eta_e: float = 1.0
    eta_s: float = 0.5
    safety_penalty: float = 1e6

    def __post_init__(self):
        if min(self.eta_t, self.eta_e, self.eta_s, self.safety_penalty) < 0:
            raise ConfigError("reward weights must be >= 0")

    def scaled(self, factor: float) -> "RewardWeights":
        """Scale the three loss factors; the safety penalty stays fixed"""
        return RewardWeights(self.eta_t * factor, self.eta_e * factor, self.eta_s * factor, self.safety_penalty)


@dataclass(frozen=True)
class RewardBreakdown:
    l_t: float
    l_e: float
    l_s: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.l_t + self.l_e + self.l_s)


def _active_zones(n: int, during_work: bool, comfort_on: Optional[Sequence[int]]) -> np.ndarray:
    active = np.full(n, bool(during_work))
    if comfort_on is not None:
        active |= np.asarray(comfort_on, dtype=int) == 1
    return active


def safety_loss(zone_temps, weights: RewardWeights, bands: ComfortBands) -> float:
    """-safety_penalty for every zone outside the safe band, at any time"""
    temps = np.asarray(zone_temps, dtype=float)
    low, high = bands.safe_band_f()
    outside = np.count_nonzero((temps < low) | (temps > high))
    return -weights.safety_penalty * outside


def comfort_loss(zone_temps, weights: RewardWeights, bands: ComfortBands, during_work: bool,
                 comfort_on: Optional[Sequence[int]] = None) -> float:
    """
    Quadratic comfort loss summed over zones, plus the safety clamp

    Args:
        zone_temps: Zone temperatures (°F)
        weights: Reward weights
        bands: Comfort and safe bands
        during_work: Whether the step falls in work hours
        comfort_on: Per-zone comfort policy bits; a zone with its policy ON is
            evaluated outside work hours too

    Returns:
        0 for in-band zones (inclusive), -eta_T·(T - T_target)² otherwise
    """
    temps = np.asarray(zone_temps, dtype=float)
    low, high = bands.comfort_band_f()
    target = (low + high) / 2.0
    out_of_band = (temps < low) | (temps > high)
    counted = out_of_band & _active_zones(temps.size, during_work, comfort_on)
    loss = -weights.eta_t * float(np.sum(np.where(counted, (temps - target) ** 2, 0.0)))
    return loss + safety_loss(temps, weights, bands)


def binary_comfort_loss(zone_temps, bands: ComfortBands, during_work: bool = True,
                        comfort_on: Optional[Sequence[int]] = None) -> float:
    """-1 per out-of-band zone regardless of distance"""
    temps = np.asarray(zone_temps, dtype=float)
    low, high = bands.comfort_band_f()
    out_of_band = (temps < low) | (temps > high)
    return -float(np.count_nonzero(out_of_band & _active_zones(temps.size, during_work, comfort_on)))


def energy_scale(vavs: Sequence[VavSpec], bands: ComfortBands, dt: float, c_p: float = 1005.0) -> float:
    """Fixed post-normalization scale: summed worst-case electric power times dt (J)"""
    return sum(max_electric_power(v, bands, c_p) for v in vavs) * dt


def energy_loss(e_t: float, weights: RewardWeights, e_scale: float) -> float:
    if e_scale <= 0:
        raise UsageError("e_scale must be positive")
    return -weights.eta_e * (e_t / e_scale)


def smoothness_loss(actions_now: Sequence[int], actions_prev: Sequence[int], weights: RewardWeights) -> float:
    """-eta_S times the number of toggled comfort-policy bits"""
    now = np.asarray(actions_now, dtype=int)
    prev = np.asarray(actions_prev, dtype=int)
    if now.shape != prev.shape:
        raise UsageError("action vectors must have equal arity")
    return -weights.eta_s * float(np.count_nonzero(np.bitwise_xor(now, prev)))


def total_reward(l_t: float, l_e: float, l_s: float) -> RewardBreakdown:
    return RewardBreakdown(l_t, l_e, l_s)


def compute_reward(zone_temps_f, e_t: float, actions_now, actions_prev, weights: RewardWeights,
                   bands: ComfortBands, e_scale: float, during_work: bool,
                   mode: str = HEURISTIC) -> RewardBreakdown:
    """
    Reward of one control step

    Args:
        zone_temps_f: Zone temperatures at the end of the step (°F)
        e_t: Electric energy used during the step (J)
        actions_now: Comfort-policy bits applied during the step
        actions_prev: Bits applied during the previous step
        weights: Reward weights
        bands: Comfort and safe bands
        e_scale: Energy normalization scale (J)
        during_work: Work-hour flag of the evaluated state
        mode: 'heuristic' (quadratic comfort) or 'binary' (ablation)

    Returns:
        RewardBreakdown
    """
    if mode == HEURISTIC:
        l_t = comfort_loss(zone_temps_f, weights, bands, during_work, actions_now)
    elif mode == BINARY:
        l_t = weights.eta_t * binary_comfort_loss(zone_temps_f, bands, during_work, actions_now) \
            + safety_loss(zone_temps_f, weights, bands)
    else:
        raise UsageError(f"unknown reward mode {mode!r}, expected one of {REWARD_MODES}")
    l_e = energy_loss(e_t, weights, e_scale)
    l_s = smoothness_loss(actions_now, actions_prev, weights)
    return total_reward(l_t, l_e, l_s)
