"""
Tests for the command-line launcher
"""

import json

import pandas as pd
import pytest

import start

TINY = ['--duration-days', '1', '--step-minutes', '60', '--epochs', '1', '--batch-size', '8',
        '--buffer-size', '100', '--minimal-size', '8', '--target-update', '5']


def test_weather_gen(tmp_path, capsys):
    out = tmp_path / 'weather.csv'
    code = start.main(['weather-gen', '--output', str(out), '--duration-days', '2', '--step-minutes', '30',
                       '--out-dir', str(tmp_path)])
    assert code == 0
    assert len(pd.read_csv(out)) == 96
    assert 'Wrote 96 weather rows' in capsys.readouterr().out


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        start.main([])
    assert exc.value.code == 2


def test_bad_config_exits_with_one(tmp_path, capsys):
    bad = tmp_path / 'run.json'
    bad.write_text(json.dumps({'step_minutes': 7}), encoding='utf-8')
    assert start.main(['train', '--config', str(bad)]) == 1
    assert 'ConfigError' in capsys.readouterr().err


def test_dqn_eval_without_weights_exits_with_one(tmp_path):
    assert start.main(['eval', '--policy', 'dqn', '--out-dir', str(tmp_path)] + TINY) == 1


def test_tiny_train_run(tmp_path):
    out = tmp_path / 'run'
    assert start.main(['train', '--out-dir', str(out), '--seed', '3'] + TINY) == 0
    for name in ('epoch_01.csv', 'weights.npz', 'training_curve.csv', 'summary.csv', 'summary.txt',
                 'eval_dqn.csv', 'eval_rbc.csv'):
        assert (out / name).exists()

    assert start.main(['eval', '--policy', 'dqn', '--weights', str(out / 'weights.npz'), '--compare',
                       '--out-dir', str(tmp_path / 'eval')] + TINY) == 0
    summary = pd.read_csv(tmp_path / 'eval' / 'summary.csv')
    assert list(summary['policy']) == ['dqn', 'rbc']


def test_overrides_reach_the_config(tmp_path):
    args = start.build_parser().parse_args(['train', '--eta-e', '2.5', '--lr', '0.01', '--weather', 'miami',
                                            '--out-dir', str(tmp_path)])
    config = start.load_config(args)
    assert config.reward.eta_e == 2.5
    assert config.hyper.lr == 0.01
    assert config.weather == 'miami'
    assert config.out_dir == tmp_path


def test_seed_flag_reaches_the_run_config(tmp_path):
    args = start.build_parser().parse_args(['train', '--seed', '7', '--out-dir', str(tmp_path)])
    assert start.load_config(args).seed == 7


def test_plot_flag_renders_charts(tmp_path):
    out = tmp_path / 'run'
    assert start.main(['train', '--plot', '--out-dir', str(out)] + TINY) == 0
    assert (out / 'training_curve.png').stat().st_size > 0
    assert (out / 'last_epoch_week.png').stat().st_size > 0

    assert start.main(['eval', '--policy', 'rbc', '--plot', '--out-dir', str(out)] + TINY) == 0
    assert (out / 'eval_rbc_week.png').exists()


def test_plot_flag_on_sweep_and_ablation(tmp_path):
    out = tmp_path / 'study'
    assert start.main(['sweep', '--axis', 'eta_s', '--plot', '--out-dir', str(out)] + TINY) == 0
    assert (out / 'sweep_eta_s.png').exists()
    assert start.main(['ablation', '--seeds', '0', '1', '--plot', '--out-dir', str(out)] + TINY) == 0
    assert (out / 'ablation.png').exists()
    assert len(pd.read_csv(out / 'ablation.csv')) == 4
