"""
Shared fixtures for the simulator test suite
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.data_loader import RunConfig, load_building_config
from src.dqn_agent import Hyperparams
from src.hvac_plant import ComfortBands
from src.metrics import log_columns

ROOT = Path(__file__).resolve().parent
CONFIGS = ROOT / 'configs'


@pytest.fixture(scope='session')
def open_building():
    return load_building_config(CONFIGS / 'reference_open.json')


@pytest.fixture(scope='session')
def closed_building():
    return load_building_config(CONFIGS / 'reference_closed.json')


@pytest.fixture
def bands():
    return ComfortBands()


@pytest.fixture
def tiny_config(tmp_path):
    """One day at hourly steps with a small network so a full run takes a second"""
    return RunConfig(
        building=CONFIGS / 'reference_open.json',
        weather='greenville',
        weather_seed=3,
        step_minutes=60,
        duration_days=1,
        hyper=Hyperparams(epochs=1, batch_size=8, buffer_size=100, minimal_size=8,
                          target_update=5, hidden_sizes=(16, 16)),
        seed=0,
        out_dir=tmp_path / 'run',
    )


def make_log(temps, work=None, vav=None, energy=None, outdoor=60.0) -> pd.DataFrame:
    """Build an EpisodeLog from a (steps, zones) array of °F temperatures"""
    temps = np.asarray(temps, dtype=float)
    steps, n = temps.shape
    vav = np.zeros((steps, n), dtype=int) if vav is None else np.asarray(vav, dtype=int)
    work = np.ones(steps, dtype=int) if work is None else np.asarray(work, dtype=int)
    energy = np.zeros(steps) if energy is None else np.asarray(energy, dtype=float)

    data = {'t_min': np.arange(1, steps + 1) * 60.0, 'outdoor_F': np.full(steps, outdoor)}
    for i in range(n):
        data[f'zone{i + 1}_F'] = temps[:, i]
    for i in range(n):
        data[f'vav{i + 1}'] = vav[:, i]
    for i in range(n):
        data[f'phys{i + 1}'] = ['Idle'] * steps
    data.update({'energy_J': energy, 'l_t': np.zeros(steps), 'l_e': np.zeros(steps),
                 'l_s': np.zeros(steps), 'reward': np.zeros(steps), 'work': work})
    return pd.DataFrame(data, columns=log_columns(n))
