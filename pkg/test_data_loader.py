"""
Tests for building configs, run configs and weather CSV files
"""

import json

import numpy as np
import pandas as pd
import pytest

from conftest import CONFIGS
from src.data_loader import (
    RunConfig, load_building_config, load_run_config, load_weather_csv, parse_building_config,
    write_weather_csv,
)
from src.dqn_agent import Hyperparams
from src.errors import ConfigError, UsageError, WeatherFormatError
from src.thermal_sim import OUTDOOR
from src.weather import generate_weather


def write(path, text):
    path.write_text(text, encoding='utf-8')
    return path


# ─── Weather CSV ───

def test_two_row_csv(tmp_path):
    df = load_weather_csv(write(tmp_path / 'w.csv', "t_min,outdoor_F,t_sol_F\n0,60.5,60.5\n60,61.0,70.0\n"))
    assert len(df) == 2
    assert list(df['outdoor_F']) == [60.5, 61.0]


def test_generated_series_round_trips_exactly(tmp_path):
    series = generate_weather('greenville', 3, 12, seed=11)
    loaded = load_weather_csv(write_weather_csv(series, tmp_path / 'w.csv'))
    pd.testing.assert_frame_equal(loaded, series, check_exact=True)


def test_missing_solar_column_is_derived(tmp_path):
    df = load_weather_csv(write(tmp_path / 'w.csv', "t_min,outdoor_F\n0,50\n720,50\n"))
    assert df['t_sol_F'][0] == 50.0
    assert df['t_sol_F'][1] == pytest.approx(86.0)


def test_non_numeric_value_names_the_line(tmp_path):
    path = write(tmp_path / 'w.csv', "t_min,outdoor_F\n0,60\n60,abc\n120,61\n")
    with pytest.raises(WeatherFormatError, match='line 3'):
        load_weather_csv(path)


def test_non_uniform_spacing_names_the_line(tmp_path):
    path = write(tmp_path / 'w.csv', "t_min,outdoor_F\n0,60\n60,61\n180,62\n")
    with pytest.raises(WeatherFormatError, match='line 4'):
        load_weather_csv(path)


def test_solar_temperature_far_below_outdoor_names_the_line(tmp_path):
    path = write(tmp_path / 'w.csv', "t_min,outdoor_F,t_sol_F\n0,60,60\n60,61,50\n120,62,62\n")
    with pytest.raises(WeatherFormatError, match='line 3'):
        load_weather_csv(path)
    # a few kelvin of sky cooling is accepted
    df = load_weather_csv(write(tmp_path / 'ok.csv', "t_min,outdoor_F,t_sol_F\n0,60,53\n"))
    assert df['t_sol_F'][0] == 53.0


@pytest.mark.parametrize('text', [
    "time,temp\n0,60\n",
    "t_min,outdoor_F\n",
    "t_min,outdoor_F\n0,200\n",
])
def test_bad_weather_files(tmp_path, text):
    with pytest.raises(WeatherFormatError):
        load_weather_csv(write(tmp_path / 'w.csv', text))


def test_missing_weather_file(tmp_path):
    with pytest.raises(WeatherFormatError):
        load_weather_csv(tmp_path / 'absent.csv')


# ─── Building config ───

def minimal_building(**extra):
    doc = {'zones': [{'id': 1, 'floor_area': 20.0, 'height': 3.0}, {'id': 2, 'floor_area': 20.0, 'height': 3.0}],
           'couplings': [{'a': 'outdoor', 'b': 1, 'kind': 'conductive', 'surface_area': 10.0,
                          'conductivity': 0.08, 'thickness': 0.2},
                         {'a': 1, 'b': 2, 'kind': 'convective', 'surface_area': 8.0,
                          'convective_coefficient': 12.0}]}
    doc.update(extra)
    return doc


def test_minimal_building_gets_defaults():
    config = parse_building_config(minimal_building())
    assert config.model.couplings[0].zone_a == OUTDOOR
    assert [v.zone_id for v in config.vavs] == [1, 2]
    assert config.vavs[0].mass_flow_on == 0.5
    assert config.bands.comfort_band_f() == (71.0, 74.0)
    assert config.initial_temp_f == 72.0


def test_vav_overrides_use_fahrenheit():
    config = parse_building_config(minimal_building(vav=[{'zone': 2, 'supply_temp_heat_F': 100.0, 'fan_power': 50}]))
    assert config.vavs[1].fan_power == 50.0
    assert config.vavs[1].supply_temp_heat == pytest.approx(310.927778, abs=1e-6)


@pytest.mark.parametrize('doc', [
    {},
    minimal_building(vav=[{'zone': 9}]),
    minimal_building(vav=[{'zone': 1}, {'zone': 1}]),
    minimal_building(initial_temp_F=95.0),
    minimal_building(couplings=[{'a': 'roof', 'b': 1, 'kind': 'convective', 'surface_area': 1.0,
                                 'convective_coefficient': 1.0}]),
    minimal_building(couplings=[{'a': 1, 'b': 2, 'kind': 'radiative', 'surface_area': 1.0}]),
    minimal_building(comfort_bands={'comfort_low_F': 75.0}),
    minimal_building(schedule={'work_start': '18:00'}),
])
def test_bad_building_configs(doc):
    with pytest.raises(ConfigError):
        parse_building_config(doc)


def test_building_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_building_config(tmp_path / 'absent.json')
    with pytest.raises(ConfigError, match='invalid JSON'):
        load_building_config(write(tmp_path / 'b.json', '{"zones": ['))


def test_reference_buildings_load(open_building, closed_building):
    assert open_building.model.n_zones == closed_building.model.n_zones == 6
    assert open_building.name == 'reference_open'
    kinds = {c.kind for c in open_building.model.couplings if OUTDOOR not in (c.zone_a, c.zone_b)}
    assert kinds == {'convective'}


# ─── Run config ───

def test_run_config_paths_resolve_against_its_directory(tmp_path):
    path = write(tmp_path / 'run.json', json.dumps({
        'building': 'buildings/b.json', 'out_dir': 'out', 'weather': 'data/w.csv', 'step_minutes': 15,
        'reward': {'eta_e': 2.0, 'mode': 'binary'}, 'hyper': {'lr': 0.01},
    }))
    config = load_run_config(path)
    assert config.building == (tmp_path / 'buildings' / 'b.json').resolve()
    assert config.out_dir == (tmp_path / 'out').resolve()
    assert config.weather == str((tmp_path / 'data' / 'w.csv').resolve())
    assert not config.weather_is_profile
    assert config.reward.eta_e == 2.0
    assert config.reward_mode == 'binary'
    assert config.hyper.lr == 0.01
    assert config.hyper.epochs == 5
    assert config.steps_per_epoch == 30 * 96


def test_default_run_config_loads():
    config = load_run_config(CONFIGS / 'run_default.json')
    assert config.building == (CONFIGS / 'reference_open.json').resolve()
    assert config.steps_per_epoch == 3600
    assert config.weather_is_profile


@pytest.mark.parametrize('doc', [
    {'colour': 'blue'},
    {'step_minutes': 7},
    {'duration_days': 0},
    {'reward': {'mode': 'quadratic'}},
    {'reward': {'eta_x': 1.0}},
    {'hyper': {'gamma': 2.0}},
])
def test_bad_run_configs(tmp_path, doc):
    with pytest.raises(ConfigError):
        load_run_config(write(tmp_path / 'run.json', json.dumps(doc)))


def test_overrides_route_to_the_right_section():
    config = RunConfig(hyper=Hyperparams(epochs=5)).with_overrides(
        eta_e=3.0, lr=0.05, seed=9, step_minutes=None, epochs=2)
    assert config.reward.eta_e == 3.0
    assert config.hyper.lr == 0.05
    assert config.hyper.epochs == 2
    assert config.seed == 9
    assert config.step_minutes == 12
    with pytest.raises(UsageError):
        config.with_overrides(colour='blue')


def test_weather_seed_derivation():
    explicit = RunConfig(weather_seed=4).resolved_weather_seed()
    derived = RunConfig(seed=4).resolved_weather_seed()
    a = np.random.default_rng(explicit).random(3)
    b = np.random.default_rng(derived).random(3)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(b, np.random.default_rng(RunConfig(seed=4).resolved_weather_seed()).random(3))
