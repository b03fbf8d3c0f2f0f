"""
Chart rendering for run outputs (PNG files next to the CSVs)
"""

from pathlib import Path
from typing import Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd

from .baseline_control import MINUTES_PER_WEEK
from .metrics import vav_columns, zone_temp_columns


def plot_week(log: pd.DataFrame, path: Union[str, Path], bands_f: tuple = (71.0, 74.0)) -> Path:
    """Zone temperatures, outdoor temperature and comfort-policy bits over the first week"""
    week = log[log['t_min'] <= MINUTES_PER_WEEK]
    hours = week['t_min'] / 60.0
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(14, 8), sharex=True,
                                   gridspec_kw={'height_ratios': [3, 1]})

    for col in zone_temp_columns(week):
        ax1.plot(hours, week[col], linewidth=1, label=col.replace('_F', ''))
    ax1.plot(hours, week['outdoor_F'], color='grey', linestyle='--', linewidth=1, label='outdoor')
    ax1.axhspan(bands_f[0], bands_f[1], color='green', alpha=0.1, label='comfort band')
    ax1.set_ylabel('Temperature (°F)')
    ax1.legend(loc='upper right', ncol=4, fontsize=8)
    ax1.grid(True, alpha=0.3)

    bits = week[vav_columns(week)].to_numpy().T
    ax2.imshow(bits, aspect='auto', interpolation='nearest', cmap='Greens',
               extent=[hours.min(), hours.max(), bits.shape[0] + 0.5, 0.5])
    ax2.set_ylabel('VAV')
    ax2.set_xlabel('Hour of episode')

    plt.tight_layout()
    path = Path(path)
    plt.savefig(path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    return path


def plot_training_curve(curve: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Total reward and work-hour CVR per epoch"""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 5))
    ax1.plot(curve['epoch'], curve['total_reward'], marker='o')
    ax1.set_xlabel('Epoch')
    ax1.set_ylabel('Total reward')
    ax1.grid(True, alpha=0.3)
    ax2.plot(curve['epoch'], 100 * curve['cvr'], marker='o', color='tab:red')
    ax2.set_xlabel('Epoch')
    ax2.set_ylabel('CVR (%)')
    ax2.grid(True, alpha=0.3)

    plt.tight_layout()
    path = Path(path)
    plt.savefig(path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    return path


def plot_ablation(curves: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Normalized reward curves of both reward modes, one line per seed"""
    fig, ax = plt.subplots(figsize=(10, 5))
    colors = {'heuristic': 'tab:blue', 'binary': 'tab:orange'}
    for (seed, mode), grp in curves.groupby(['seed', 'mode']):
        r = grp['total_reward'].to_numpy()
        span = r.max() - r.min()
        norm = (r - r.min()) / span if span > 0 else r * 0 + 1.0
        ax.plot(grp['epoch'], norm, color=colors.get(mode), alpha=0.7,
                label=mode if seed == curves['seed'].min() else None)
    ax.set_xlabel('Epoch')
    ax.set_ylabel('Normalized total reward')
    ax.legend()
    ax.grid(True, alpha=0.3)

    plt.tight_layout()
    path = Path(path)
    plt.savefig(path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    return path


def plot_sweep(summary: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Saving % against violation % per sweep cell"""
    fig, ax = plt.subplots(figsize=(8, 6))
    ax.scatter(summary['violation_pct'], summary['saving_pct'])
    for _, row in summary.iterrows():
        ax.annotate(str(row['label']), (row['violation_pct'], row['saving_pct']),
                    textcoords='offset points', xytext=(4, 4), fontsize=8)
    ax.set_xlabel('Comfort violation (%)')
    ax.set_ylabel('Energy saving vs RBC (%)')
    ax.grid(True, alpha=0.3)

    plt.tight_layout()
    path = Path(path)
    plt.savefig(path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    return path
