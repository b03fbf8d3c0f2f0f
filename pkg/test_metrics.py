"""
Tests for the evaluation metrics computed from episode logs
"""

import numpy as np
import pytest

from conftest import make_log
from src.errors import UndefinedMetricError, UsageError
from src.metrics import (
    calculate_all_metrics, ccr, comfort_offset, cvr, energy_saving_ratio, homogeneity_stats, log_columns,
    per_vav_transitions, transition_count,
)


def test_log_columns_layout():
    cols = log_columns(2)
    assert cols == ['t_min', 'outdoor_F', 'zone1_F', 'zone2_F', 'vav1', 'vav2', 'phys1', 'phys2',
                    'energy_J', 'l_t', 'l_e', 'l_s', 'reward', 'work']


# ─── Comfort compliance ───

def test_ccr_extremes(bands):
    assert ccr(make_log(np.full((10, 6), 72.0)), bands) == 1.0
    assert ccr(make_log(np.full((10, 6), 68.0)), bands) == 0.0
    assert cvr(make_log(np.full((10, 6), 68.0)), bands) == 1.0


def test_ccr_hand_count(bands):
    temps = np.full((10, 6), 80.0)
    temps[:5, :] = 72.0
    assert ccr(make_log(temps), bands) == 0.5


def test_ccr_band_edges_are_inside(bands):
    assert ccr(make_log([[71.0, 74.0]]), bands) == 1.0


def test_ccr_only_counts_work_rows_by_default(bands):
    temps = np.array([[72.0, 72.0], [60.0, 60.0], [60.0, 60.0]])
    log = make_log(temps, work=[1, 0, 0])
    assert ccr(log, bands) == 1.0
    assert ccr(log, bands, work_only=False) == pytest.approx(1 / 3)


def test_ccr_undefined_cases(bands):
    with pytest.raises(UndefinedMetricError):
        ccr(make_log(np.full((3, 2), 72.0), work=[0, 0, 0]), bands)
    with pytest.raises(UndefinedMetricError):
        ccr(make_log(np.zeros((0, 2))), bands)


# ─── Energy ───

def test_energy_saving_examples():
    base = make_log(np.full((4, 2), 72.0), energy=[100.0, 100.0, 100.0, 100.0])
    cheaper = make_log(np.full((4, 2), 72.0), energy=[63.0, 63.0, 63.0, 63.0])
    dearer = make_log(np.full((4, 2), 72.0), energy=[200.0, 0.0, 200.0, 100.0])
    assert energy_saving_ratio(base, base) == 0.0
    assert energy_saving_ratio(cheaper, base) == pytest.approx(37.0)
    assert energy_saving_ratio(dearer, base) < 0
    with pytest.raises(UndefinedMetricError):
        energy_saving_ratio(base, make_log(np.full((4, 2), 72.0)))


# ─── Homogeneity ───

def test_homogeneity_examples():
    assert homogeneity_stats(make_log(np.full((5, 6), 71.3))) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert homogeneity_stats(make_log(np.tile([70.0, 72.0], (5, 1)))) == pytest.approx((2.0, 1.0))
    with pytest.raises(UsageError):
        homogeneity_stats(make_log(np.full((5, 1), 72.0)))


# ─── Transitions ───

def test_transition_counts():
    vav = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 1]]
    log = make_log(np.full((5, 2), 72.0), vav=vav)
    assert list(per_vav_transitions(log)) == [2, 1]
    assert transition_count(log) == 3
    assert transition_count(make_log(np.full((1, 2), 72.0), vav=[[1, 1]])) == 0


def test_comfort_offset(bands):
    assert comfort_offset(make_log(np.full((3, 2), 72.0)), bands) == 0.0
    assert comfort_offset(make_log([[70.5, 72.0], [76.5, 72.0]]), bands) == pytest.approx(3.0)


def test_calculate_all_metrics(bands):
    temps = np.tile([70.0, 72.0], (4, 1))
    log = make_log(temps, energy=[1e6] * 4, vav=[[0, 0], [1, 1], [1, 1], [0, 0]])
    base = make_log(temps, energy=[2e6] * 4)
    m = calculate_all_metrics(log, bands, baseline=base)
    assert m['ccr'] == 0.5
    assert m['cvr'] == 0.5
    assert m['energy_MJ'] == pytest.approx(4.0)
    assert m['saving_pct'] == pytest.approx(50.0)
    assert m['transitions'] == 4
    assert m['delta_T'] == pytest.approx(2.0)
    assert m['steps'] == 4
    assert 'saving_pct' not in calculate_all_metrics(log, bands)
