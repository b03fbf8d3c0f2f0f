"""
Baseline Control Module for the open-office HVAC simulator
Rule-based occupancy schedule (RBC) plus always-on / always-off references.
The episode calendar starts on a Monday at 00:00 and has no holidays.
"""

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import ConfigError, UsageError

MINUTES_PER_DAY = 1440
MINUTES_PER_WEEK = 7 * MINUTES_PER_DAY
WEEKDAY_NAMES = ('mon', 'tue', 'wed', 'thu', 'fri', 'sat', 'sun')
N_ZONES = 6


def parse_clock(text: str) -> int:
    """'08:00' -> 480 minutes of day"""
    try:
        hours, minutes = text.strip().split(':')
        value = int(hours) * 60 + int(minutes)
    except ValueError as exc:
        raise ConfigError(f"invalid 24h clock string {text!r}") from exc
    if not 0 <= value <= MINUTES_PER_DAY:
        raise ConfigError(f"clock string {text!r} is outside 00:00-24:00")
    return value


@dataclass(frozen=True)
class Schedule:
    work_start: int = 480
    work_end: int = 1020
    workdays: frozenset = frozenset(range(5))  # 0 = Monday

    def __post_init__(self):
        object.__setattr__(self, 'workdays', frozenset(self.workdays))
        if not self.work_start < self.work_end:
            raise ConfigError("work_start must precede work_end")
        if not self.workdays:
            raise ConfigError("at least one workday is required")
        if not self.workdays <= set(range(7)):
            raise ConfigError("workdays are weekday numbers 0 (Mon) .. 6 (Sun)")

    @classmethod
    def from_strings(cls, work_start: str = "08:00", work_end: str = "17:00",
                     workdays: Iterable[str] = WEEKDAY_NAMES[:5]) -> "Schedule":
        days = set()
        for name in workdays:
            key = str(name).strip().lower()[:3]
            if key not in WEEKDAY_NAMES:
                raise ConfigError(f"unknown weekday {name!r}")
            days.add(WEEKDAY_NAMES.index(key))
        return cls(parse_clock(work_start), parse_clock(work_end), frozenset(days))


def is_work_time(clock: float, schedule: Schedule) -> bool:
    """True when the clock (minutes since Monday 00:00) falls in scheduled work hours"""
    in_week = clock % MINUTES_PER_WEEK
    weekday = int(in_week // MINUTES_PER_DAY)
    minute = in_week - weekday * MINUTES_PER_DAY
    return weekday in schedule.workdays and schedule.work_start <= minute < schedule.work_end


def rbc_policy(clock: float, schedule: Schedule, n_zones: int = N_ZONES) -> np.ndarray:
    """Comfort policy ON everywhere during work hours, OFF otherwise"""
    value = 1 if is_work_time(clock, schedule) else 0
    return np.full(n_zones, value, dtype=int)


def always_on_policy(clock: float = 0.0, schedule: Schedule = None, n_zones: int = N_ZONES) -> np.ndarray:
    return np.ones(n_zones, dtype=int)


def always_off_policy(clock: float = 0.0, schedule: Schedule = None, n_zones: int = N_ZONES) -> np.ndarray:
    return np.zeros(n_zones, dtype=int)


POLICIES = {
    'rbc': rbc_policy,
    'always_on': always_on_policy,
    'always_off': always_off_policy,
}


def policy_by_name(name: str) -> Callable:
    try:
        return POLICIES[name]
    except KeyError:
        raise UsageError(f"unknown rule policy {name!r}, expected one of {sorted(POLICIES)}") from None
