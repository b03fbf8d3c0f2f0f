"""
Full-length acceptance runs on the reference building (pytest -m slow)
"""

import numpy as np
import pytest

import start
from conftest import CONFIGS
from src import harness
from src.data_loader import load_run_config

pytestmark = pytest.mark.slow

SEEDS = (0, 1, 2)
ZONES = [f'zone{i}_F' for i in range(1, 7)]


@pytest.fixture
def default_config(tmp_path):
    return load_run_config(CONFIGS / 'run_default.json').with_overrides(out_dir=tmp_path / 'run')


def assert_safe(log):
    temps = log[ZONES].to_numpy()
    assert temps.min() >= 59.4
    assert temps.max() <= 90.6


def test_open_plan_is_more_homogeneous_over_a_month(open_building, closed_building, default_config):
    table = harness.compare_plans(open_building, closed_building, default_config, policy='rbc')
    open_row, closed_row = table.iloc[0], table.iloc[1]
    assert open_row['delta_T'] < closed_row['delta_T']
    assert open_row['var_T'] < closed_row['var_T']


def test_trained_controller_beats_the_schedule(default_config):
    building = harness.load_building(default_config)
    weather, _ = harness.build_weather(default_config)
    result = harness.run_training(default_config, building, weather)
    for log in result.logs:
        assert_safe(log)

    logs, summaries = harness.compare_policies(default_config, result.net, building=building, weather=weather)
    dqn = summaries.set_index('policy').loc['dqn']
    rbc = summaries.set_index('policy').loc['rbc']
    assert dqn['energy_MJ'] <= rbc['energy_MJ']
    assert dqn['cvr'] <= 0.05
    assert dqn['total_reward'] >= rbc['total_reward']
    for log in logs.values():
        assert_safe(log)


def test_heuristic_reward_converges_no_later_than_binary(default_config):
    table, _ = harness.run_ablation(default_config, seeds=SEEDS)
    assert harness.heuristic_converges_first(table)


def test_comfort_weight_trades_energy_for_comfort(default_config):
    spec = harness.SweepSpec('eta_ratio', grid=((1, 1), (1, 10)), repeats=len(SEEDS))
    table = harness.run_sweep(spec, default_config, workers=3)
    assert (table['error'] == '').all()
    summary = harness.summarize_sweep(table).set_index('label')
    assert summary.loc['1:10', 'violation_pct'] < summary.loc['1:1', 'violation_pct']
    assert summary.loc['1:10', 'saving_pct'] < summary.loc['1:1', 'saving_pct']


def test_smoothness_weight_reduces_transitions(default_config):
    spec = harness.SweepSpec('eta_s', repeats=len(SEEDS))
    table = harness.run_sweep(spec, default_config, workers=3)
    assert (table['error'] == '').all()
    transitions = harness.summarize_sweep(table)['transitions'].to_numpy()
    inversions = int(np.sum(np.diff(transitions) > 0))
    assert inversions <= 1


def test_repeated_train_runs_are_byte_identical(tmp_path):
    args = ['--epochs', '2', '--duration-days', '7']
    assert start.main(['train', '--out-dir', str(tmp_path / 'a')] + args) == 0
    assert start.main(['train', '--out-dir', str(tmp_path / 'b')] + args) == 0
    for name in ('epoch_01.csv', 'epoch_02.csv', 'eval_dqn.csv'):
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()
