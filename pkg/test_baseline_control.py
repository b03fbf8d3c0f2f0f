"""
Tests for the occupancy schedule and the rule-based reference policies
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.baseline_control import (
    MINUTES_PER_DAY, MINUTES_PER_WEEK, Schedule, always_off_policy, always_on_policy, is_work_time,
    parse_clock, policy_by_name, rbc_policy,
)
from src.errors import ConfigError, UsageError

MONDAY = 0
SUNDAY = 6 * MINUTES_PER_DAY


def at(day_offset, hour, minute=0):
    return day_offset + hour * 60 + minute


def test_rbc_examples():
    schedule = Schedule()
    np.testing.assert_array_equal(rbc_policy(at(MONDAY, 10), schedule), [1] * 6)
    np.testing.assert_array_equal(rbc_policy(at(SUNDAY, 10), schedule), [0] * 6)
    np.testing.assert_array_equal(rbc_policy(at(MONDAY, 20), schedule), [0] * 6)


def test_work_window_edges():
    schedule = Schedule()
    assert not is_work_time(at(MONDAY, 7, 59), schedule)
    assert is_work_time(at(MONDAY, 8), schedule)
    assert is_work_time(at(MONDAY, 16, 59), schedule)
    assert not is_work_time(at(MONDAY, 17), schedule)
    assert is_work_time(at(4 * MINUTES_PER_DAY, 12), schedule)
    assert not is_work_time(at(5 * MINUTES_PER_DAY, 12), schedule)


def test_reference_policies():
    for clock in (0.0, 600.0, 9000.0):
        np.testing.assert_array_equal(always_on_policy(clock), [1] * 6)
        np.testing.assert_array_equal(always_off_policy(clock), [0] * 6)
    assert policy_by_name('rbc') is rbc_policy
    with pytest.raises(UsageError):
        policy_by_name('dqn')


def test_rbc_toggles_at_most_twice_a_day():
    schedule = Schedule()
    clocks = np.arange(0, 3 * MINUTES_PER_WEEK, 12)
    bits = np.array([rbc_policy(c, schedule)[0] for c in clocks])
    days = clocks // MINUTES_PER_DAY
    for day in np.unique(days):
        day_bits = bits[days == day]
        assert np.count_nonzero(np.diff(day_bits)) <= 2


@given(st.integers(min_value=0, max_value=MINUTES_PER_WEEK * 8))
def test_rbc_is_weekly_periodic(clock):
    schedule = Schedule()
    np.testing.assert_array_equal(rbc_policy(clock, schedule), rbc_policy(clock + MINUTES_PER_WEEK, schedule))


def test_schedule_from_strings():
    schedule = Schedule.from_strings('07:30', '18:00', ['Mon', 'wed', 'SAT'])
    assert schedule.work_start == 450
    assert schedule.work_end == 1080
    assert schedule.workdays == frozenset({0, 2, 5})
    assert parse_clock('24:00') == MINUTES_PER_DAY


def test_schedule_errors():
    with pytest.raises(ConfigError):
        Schedule.from_strings('17:00', '08:00')
    with pytest.raises(ConfigError):
        Schedule.from_strings(workdays=['funday'])
    with pytest.raises(ConfigError):
        parse_clock('8am')
    with pytest.raises(ConfigError):
        parse_clock('25:00')
    with pytest.raises(ConfigError):
        Schedule(workdays=frozenset())
