"""
Tests for VAV command translation, supply air and energy accounting
"""

import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import ConfigError
from src.hvac_plant import (
    COMFORT_OFF, COMFORT_ON, ComfortBands, PhysicalCommand, VavSpec, electric_energy, max_electric_power,
    plant_output, sizing_report, translate_action,
)
from src.thermal_sim import OUTDOOR, BuildingModel, Coupling, ThermalState, WeatherSample, ZoneSpec, step
from src.units import f_to_k

HEAT, COOL, IDLE = PhysicalCommand.HEAT_ON, PhysicalCommand.COOL_ON, PhysicalCommand.IDLE


@pytest.mark.parametrize('logical, temp_f, expected', [
    (COMFORT_ON, 68.0, HEAT),
    (COMFORT_OFF, 68.0, IDLE),
    (COMFORT_OFF, 59.0, HEAT),
    (COMFORT_ON, 76.0, COOL),
    (COMFORT_OFF, 91.0, COOL),
    (COMFORT_ON, 72.5, IDLE),
])
def test_translate_action_examples(bands, logical, temp_f, expected):
    assert translate_action(logical, f_to_k(temp_f), bands) is expected


def test_heating_holds_until_midpoint_plus_hysteresis(bands):
    midpoint = (bands.comfort_low + bands.comfort_high) / 2.0
    assert translate_action(COMFORT_ON, bands.comfort_low + 0.1, bands, HEAT) is HEAT
    assert translate_action(COMFORT_ON, midpoint + bands.hysteresis - 0.01, bands, HEAT) is HEAT
    assert translate_action(COMFORT_ON, midpoint + bands.hysteresis + 0.01, bands, HEAT) is IDLE
    assert translate_action(COMFORT_ON, bands.comfort_low + 0.1, bands, IDLE) is IDLE


def test_cooling_holds_until_midpoint_minus_hysteresis(bands):
    midpoint = (bands.comfort_low + bands.comfort_high) / 2.0
    assert translate_action(COMFORT_ON, bands.comfort_high - 0.1, bands, COOL) is COOL
    assert translate_action(COMFORT_ON, midpoint - bands.hysteresis - 0.01, bands, COOL) is IDLE


@given(st.floats(min_value=0.0, max_value=1.0))
def test_comfort_off_is_idle_inside_the_safe_band(frac):
    bands = ComfortBands()
    low = bands.safe_low + bands.hysteresis
    high = bands.safe_high - bands.hysteresis
    t = low + frac * (high - low)
    if low < t < high:
        assert translate_action(COMFORT_OFF, t, bands, IDLE) is IDLE


def test_comfort_off_heats_before_reaching_the_safe_edge(bands):
    guard_low, guard_high = bands.active_band(COMFORT_OFF)
    assert guard_low == pytest.approx(bands.safe_low + bands.hysteresis)
    assert translate_action(COMFORT_OFF, guard_low - 0.01, bands, IDLE) is HEAT
    assert translate_action(COMFORT_OFF, guard_high + 0.01, bands, IDLE) is COOL
    assert translate_action(COMFORT_OFF, guard_low + 0.01, bands, IDLE) is IDLE


def test_safe_band_guard_keeps_a_cold_zone_at_or_above_60f():
    bands = ComfortBands.from_fahrenheit()
    model = BuildingModel(
        (ZoneSpec(1, 100.0, 3.0, internal_gain_occupied=0.0, internal_gain_vacant=0.0),),
        (Coupling(OUTDOOR, 1, 'conductive', 20.0, conductivity=0.8, thickness=0.1),),
    )
    spec = VavSpec(1)
    weather = WeatherSample(0.0, f_to_k(25.0), f_to_k(25.0))
    state = ThermalState.uniform(model, f_to_k(62.0))
    cmd = IDLE
    lowest = state.zone_temps[0]
    for _ in range(1500):
        cmd = translate_action(COMFORT_OFF, state.zone_temps[0], bands, cmd)
        state = step(model, state, weather, [plant_output(cmd, spec, state.zone_temps[0])], False, 120.0)
        lowest = min(lowest, state.zone_temps[0])
    assert lowest >= bands.safe_low


def test_band_validation():
    with pytest.raises(ConfigError):
        ComfortBands.from_fahrenheit(comfort_low=75.0, comfort_high=74.0)
    with pytest.raises(ConfigError):
        ComfortBands.from_fahrenheit(safe_low=72.0)
    with pytest.raises(ConfigError):
        ComfortBands(hysteresis=-0.1)


def test_band_edges_survive_the_kelvin_round_trip():
    bands = ComfortBands.from_fahrenheit()
    assert bands.comfort_band_f() == (71.0, 74.0)
    assert bands.safe_band_f() == (60.0, 90.0)


# ─── Plant output and energy ───

def test_plant_output_defaults():
    spec = VavSpec(1)
    assert plant_output(HEAT, spec) == (0.5, pytest.approx(313.15))
    assert plant_output(COOL, spec) == (0.5, pytest.approx(285.93, abs=0.01))
    assert plant_output(IDLE, spec, 295.0) == (0.0, 295.0)


def test_vav_validation():
    with pytest.raises(ConfigError):
        VavSpec(1, mass_flow_on=0.0)
    with pytest.raises(ConfigError):
        VavSpec(1, supply_temp_heat=280.0, supply_temp_cool=290.0)
    with pytest.raises(ConfigError):
        VavSpec(1, cop_cool=0.0)


def test_electric_energy_example():
    spec = VavSpec(1, supply_temp_heat=313.15)
    assert electric_energy(HEAT, spec, 293.15, 300.0) == pytest.approx(1_065_000.0)
    assert electric_energy(IDLE, spec, 293.15, 300.0) == 0.0


@given(st.floats(min_value=0.0, max_value=25.0), st.floats(min_value=0.0, max_value=25.0))
def test_electric_energy_grows_with_supply_gap(gap_a, gap_b):
    spec = VavSpec(1)
    e_a = electric_energy(HEAT, spec, spec.supply_temp_heat - gap_a, 60.0)
    e_b = electric_energy(HEAT, spec, spec.supply_temp_heat - gap_b, 60.0)
    assert e_a >= 0 and e_b >= 0
    if gap_a <= gap_b:
        assert e_a <= e_b
    else:
        assert e_a >= e_b


def test_max_electric_power_bounds_every_slack_band_draw(bands):
    spec = VavSpec(1)
    cap = max_electric_power(spec, bands)
    for t in np.linspace(*bands.slack_band(), 31):
        assert electric_energy(HEAT, spec, t, 1.0) <= cap + 1e-9
        assert electric_energy(COOL, spec, t, 1.0) <= cap + 1e-9


# ─── Closed loop ───

def test_hysteresis_prevents_chatter_under_constant_weather():
    bands = ComfortBands()
    model = BuildingModel(
        (ZoneSpec(1, 200.0, 3.0, internal_gain_occupied=0.0, internal_gain_vacant=0.0),),
        (Coupling(OUTDOOR, 1, 'conductive', 20.0, conductivity=0.5, thickness=0.1),),
    )
    spec = VavSpec(1)
    weather = WeatherSample(0.0, 270.0, 270.0)
    state = ThermalState.uniform(model, 295.0)
    cmd = IDLE
    commands = []
    for _ in range(2000):
        cmd = translate_action(COMFORT_ON, state.zone_temps[0], bands, cmd)
        commands.append(cmd)
        state = step(model, state, weather, [plant_output(cmd, spec, state.zone_temps[0])], False, 60.0)

    runs = []
    for cmd in commands:
        if runs and runs[-1][0] is cmd:
            runs[-1][1] += 1
        else:
            runs.append([cmd, 1])
    assert len(runs) > 4
    assert all(length >= 2 for _, length in runs[:-1])
    assert {c for c, _ in runs} == {HEAT, IDLE}


# ─── Sizing ───

def test_reference_plant_passes_sizing(open_building):
    report = sizing_report(open_building.model, open_building.vavs, open_building.bands)
    assert list(report['zone']) == list(open_building.model.zone_ids)
    assert report['ok'].all()


def test_undersized_plant_is_reported(open_building, caplog):
    weak = [VavSpec(v.zone_id, mass_flow_on=0.005) for v in open_building.vavs]
    with caplog.at_level(logging.WARNING, logger='src.hvac_plant'):
        report = sizing_report(open_building.model, weak, open_building.bands)
    assert not report['ok'].all()
    assert 'undersized' in caplog.text
