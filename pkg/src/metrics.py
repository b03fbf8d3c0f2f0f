"""
Evaluation Metrics Module for the open-office HVAC simulator
Comfort compliance, energy saving, zone homogeneity and signal transitions,
all computed from an EpisodeLog DataFrame.
"""

import numpy as np
import pandas as pd

from .errors import UndefinedMetricError, UsageError
from .hvac_plant import ComfortBands


def log_columns(n_zones: int) -> list:
    """Fixed EpisodeLog CSV header for a building with n_zones zones"""
    return (
        ['t_min', 'outdoor_F']
        + [f'zone{i}_F' for i in range(1, n_zones + 1)]
        + [f'vav{i}' for i in range(1, n_zones + 1)]
        + [f'phys{i}' for i in range(1, n_zones + 1)]
        + ['energy_J', 'l_t', 'l_e', 'l_s', 'reward', 'work']
    )


def zone_temp_columns(log: pd.DataFrame) -> list:
    return [c for c in log.columns if c.startswith('zone') and c.endswith('_F')]


def vav_columns(log: pd.DataFrame) -> list:
    return [c for c in log.columns if c.startswith('vav')]


def ccr(log: pd.DataFrame, bands: ComfortBands, work_only: bool = True) -> float:
    """
    Comfort Compliance Ratio: share of zone-steps inside the comfort band

    Args:
        log: EpisodeLog
        bands: Comfort bands
        work_only: Restrict to work-hour steps (the reported figure)

    Returns:
        Fraction in [0, 1]
    """
    if log is None or len(log) == 0:
        raise UndefinedMetricError("CCR of an empty log is undefined")
    rows = log[log['work'].astype(bool)] if work_only else log
    if len(rows) == 0:
        raise UndefinedMetricError("CCR is undefined: the log has no work-hour steps")

    temps = rows[zone_temp_columns(rows)].to_numpy(dtype=float)
    low, high = bands.comfort_band_f()
    in_band = np.count_nonzero((temps >= low) & (temps <= high))
    return in_band / temps.size


def cvr(log: pd.DataFrame, bands: ComfortBands, work_only: bool = True) -> float:
    """Comfort Violation Ratio = 1 - CCR"""
    return 1.0 - ccr(log, bands, work_only)


def total_energy_j(log: pd.DataFrame) -> float:
    return float(log['energy_J'].sum())


def energy_saving_ratio(candidate: pd.DataFrame, baseline: pd.DataFrame) -> float:
    """
    Energy saved by candidate relative to baseline

    Returns:
        Percent, 100·(1 - E_candidate / E_baseline); negative when the
        candidate uses more
    """
    base = total_energy_j(baseline)
    if base == 0:
        raise UndefinedMetricError("energy saving is undefined for a zero-energy baseline")
    return 100.0 * (1.0 - total_energy_j(candidate) / base)


def homogeneity_stats(log: pd.DataFrame) -> tuple:
    """
    Time-averaged spread of zone temperatures

    Returns:
        (mean |T_max - T_min| in °F, mean population variance in °F²)
    """
    temps = log[zone_temp_columns(log)].to_numpy(dtype=float)
    if temps.shape[1] < 2:
        raise UsageError("homogeneity needs at least two zones")
    spread = temps.max(axis=1) - temps.min(axis=1)
    variance = temps.var(axis=1)
    return float(spread.mean()), float(variance.mean())


def per_vav_transitions(log: pd.DataFrame) -> pd.Series:
    """Number of comfort-policy toggles per VAV between consecutive steps"""
    actions = log[vav_columns(log)].to_numpy(dtype=int)
    if len(actions) < 2:
        return pd.Series(0, index=vav_columns(log))
    toggles = np.bitwise_xor(actions[1:], actions[:-1]).sum(axis=0)
    return pd.Series(toggles, index=vav_columns(log))


def transition_count(log: pd.DataFrame) -> int:
    return int(per_vav_transitions(log).sum())


def comfort_offset(log: pd.DataFrame, bands: ComfortBands) -> float:
    """Mean distance from the band centre (°F) over out-of-band work-hour zone-steps"""
    rows = log[log['work'].astype(bool)]
    temps = rows[zone_temp_columns(rows)].to_numpy(dtype=float)
    low, high = bands.comfort_band_f()
    outside = (temps < low) | (temps > high)
    if not outside.any():
        return 0.0
    return float(np.abs(temps[outside] - (low + high) / 2.0).mean())


def calculate_all_metrics(log: pd.DataFrame, bands: ComfortBands, baseline: pd.DataFrame = None) -> dict:
    """
    Calculate all evaluation metrics of one run

    Args:
        log: EpisodeLog of the run
        bands: Comfort bands
        baseline: EpisodeLog of the reference run (optional)

    Returns:
        Dict with all metrics
    """
    temps = log[zone_temp_columns(log)].to_numpy(dtype=float)
    work_ccr = ccr(log, bands)
    metrics = {
        'ccr': work_ccr,
        'cvr': 1.0 - work_ccr,
        'ccr_all': ccr(log, bands, work_only=False),
        'energy_MJ': total_energy_j(log) / 1e6,
        'total_reward': float(log['reward'].sum()),
        'transitions': transition_count(log),
        'comfort_offset_F': comfort_offset(log, bands),
        'min_zone_F': float(temps.min()),
        'max_zone_F': float(temps.max()),
        'outdoor_mean_F': float(log['outdoor_F'].mean()),
        'outdoor_max_F': float(log['outdoor_F'].max()),
        'outdoor_min_F': float(log['outdoor_F'].min()),
        'steps': int(len(log)),
    }

    if temps.shape[1] >= 2:
        metrics['delta_T'], metrics['var_T'] = homogeneity_stats(log)

    if baseline is not None:
        metrics['saving_pct'] = energy_saving_ratio(log, baseline)

    return metrics
