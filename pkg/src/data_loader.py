"""
Data Loader Module for the open-office HVAC simulator
Handles loading building configs, run configs and weather CSV files
"""

import json
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from .baseline_control import Schedule
from .dqn_agent import Hyperparams
from .errors import ConfigError, UsageError, WeatherFormatError
from .hvac_plant import ComfortBands, VavSpec, sizing_report
from .reward import HEURISTIC, REWARD_MODES, RewardWeights
from .thermal_sim import (
    OUTDOOR, SOLAR_BELOW_OUTDOOR_K, WEATHER_MAX_K, WEATHER_MIN_K, BuildingModel, Coupling, ZoneSpec,
)
from .units import f_to_k, k_to_f
from .weather import PROFILES, WEATHER_COLUMNS, solar_temperature_f

logger = logging.getLogger(__name__)

STEP_MINUTES = (5, 10, 12, 15, 20, 30, 60)
OUTDOOR_NAME = 'outdoor'


def _read_json(path: Union[str, Path]) -> dict:
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None


# ══════════════════════════════════════════════════════════════════════
# BUILDING CONFIG
# ══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class BuildingConfig:
    model: BuildingModel
    vavs: tuple
    bands: ComfortBands
    schedule: Schedule
    initial_temp_f: float = 72.0

    @property
    def name(self) -> str:
        return self.model.name


def _endpoint(value) -> int:
    if isinstance(value, str) and value.strip().lower() == OUTDOOR_NAME:
        return OUTDOOR
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"coupling endpoint {value!r} is neither a zone id nor '{OUTDOOR_NAME}'") from None


def _zone(entry: dict) -> ZoneSpec:
    try:
        return ZoneSpec(
            id=int(entry['id']),
            floor_area=float(entry['floor_area']),
            height=float(entry['height']),
            window_area=float(entry.get('window_area', 0.0)),
            window_absorptance=float(entry.get('window_absorptance', 0.0)),
            thermal_mass_multiplier=float(entry.get('thermal_mass_multiplier', 5.0)),
            internal_gain_occupied=entry.get('internal_gain_occupied'),
            internal_gain_vacant=entry.get('internal_gain_vacant'),
        )
    except KeyError as e:
        raise ConfigError(f"zone entry {entry} is missing {e}") from None


def _coupling(entry: dict) -> Coupling:
    try:
        return Coupling(
            zone_a=_endpoint(entry['a']),
            zone_b=_endpoint(entry['b']),
            kind=entry['kind'],
            surface_area=float(entry['surface_area']),
            conductivity=entry.get('conductivity'),
            thickness=entry.get('thickness'),
            convective_coefficient=entry.get('convective_coefficient'),
        )
    except KeyError as e:
        raise ConfigError(f"coupling entry {entry} is missing {e}") from None
    except ValueError:
        raise ConfigError(f"coupling entry {entry} has unknown kind {entry.get('kind')!r}") from None


def _vav(entry: dict) -> VavSpec:
    defaults = VavSpec(zone_id=int(entry['zone']))
    return VavSpec(
        zone_id=defaults.zone_id,
        mass_flow_on=float(entry.get('mass_flow_on', defaults.mass_flow_on)),
        supply_temp_heat=f_to_k(entry.get('supply_temp_heat_F', k_to_f(defaults.supply_temp_heat))),
        supply_temp_cool=f_to_k(entry.get('supply_temp_cool_F', k_to_f(defaults.supply_temp_cool))),
        cop_heat=float(entry.get('cop_heat', defaults.cop_heat)),
        cop_cool=float(entry.get('cop_cool', defaults.cop_cool)),
        fan_power=float(entry.get('fan_power', defaults.fan_power)),
    )


def parse_building_config(doc: dict) -> BuildingConfig:
    """
    Build the simulator objects from a building config document

    Args:
        doc: Parsed JSON with zones, couplings, air, vav, comfort_bands, schedule

    Returns:
        BuildingConfig
    """
    if 'zones' not in doc:
        raise ConfigError("building config needs a 'zones' list")
    air = doc.get('air', {})
    model = BuildingModel(
        zones=tuple(_zone(z) for z in doc['zones']),
        couplings=tuple(_coupling(c) for c in doc.get('couplings', [])),
        air_density=float(air.get('density', 1.2)),
        air_specific_heat=float(air.get('specific_heat', 1005.0)),
        name=str(doc.get('name', '')),
    )

    by_zone = {}
    for entry in doc.get('vav', []):
        spec = _vav(entry)
        if spec.zone_id not in model.zone_index:
            raise ConfigError(f"vav references unknown zone {spec.zone_id}")
        if spec.zone_id in by_zone:
            raise ConfigError(f"zone {spec.zone_id} has more than one vav")
        by_zone[spec.zone_id] = spec
    vavs = tuple(by_zone.get(z, VavSpec(zone_id=z)) for z in model.zone_ids)

    b = doc.get('comfort_bands', {})
    bands = ComfortBands.from_fahrenheit(
        comfort_low=b.get('comfort_low_F', 71.0),
        comfort_high=b.get('comfort_high_F', 74.0),
        safe_low=b.get('safe_low_F', 60.0),
        safe_high=b.get('safe_high_F', 90.0),
        hysteresis=b.get('hysteresis_F', 0.54),
    )

    s = doc.get('schedule', {})
    schedule = Schedule.from_strings(
        s.get('work_start', '08:00'),
        s.get('work_end', '17:00'),
        s.get('workdays', ['mon', 'tue', 'wed', 'thu', 'fri']),
    )

    initial = float(doc.get('initial_temp_F', 72.0))
    low, high = bands.safe_band_f()
    if not low <= initial <= high:
        raise ConfigError(f"initial_temp_F {initial} lies outside the safe band")
    return BuildingConfig(model, vavs, bands, schedule, initial)


def load_building_config(path: Union[str, Path], check_sizing: bool = True) -> BuildingConfig:
    config = parse_building_config(_read_json(path))
    if not config.model.name:
        config = replace(config, model=replace(config.model, name=Path(path).stem))
    if check_sizing:
        report = sizing_report(config.model, config.vavs, config.bands)
        if not report['ok'].all():
            logger.warning("%s: %d zone(s) fail the plant sizing check", path, int((~report['ok']).sum()))
    logger.info("Loaded building %s: %d zones, %d couplings", config.name,
                config.model.n_zones, len(config.model.couplings))
    return config


# ══════════════════════════════════════════════════════════════════════
# WEATHER CSV
# ══════════════════════════════════════════════════════════════════════

def load_weather_csv(path: Union[str, Path], solar_boost: float = 20.0) -> pd.DataFrame:
    """
    Load a weather CSV with header t_min, outdoor_F[, t_sol_F]

    Args:
        path: CSV file path
        solar_boost: Solar rise (K) used when t_sol_F is absent

    Returns:
        Weather DataFrame (t_min, outdoor_F, t_sol_F)
    """
    try:
        df = pd.read_csv(path, float_precision='round_trip', skipinitialspace=True)
    except FileNotFoundError:
        raise WeatherFormatError(f"weather file not found: {path}") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise WeatherFormatError(f"{path}: {e}") from None

    missing = [c for c in WEATHER_COLUMNS[:2] if c not in df.columns]
    if missing:
        raise WeatherFormatError(f"{path}: missing column(s) {missing}; header must be t_min, outdoor_F[, t_sol_F]")
    if len(df) == 0:
        raise WeatherFormatError(f"{path}: no data rows")

    columns = [c for c in WEATHER_COLUMNS if c in df.columns]
    for col in columns:
        numeric = pd.to_numeric(df[col], errors='coerce')
        bad = np.flatnonzero(numeric.isna().to_numpy())
        if bad.size:
            line = int(bad[0]) + 2  # header is line 1
            raise WeatherFormatError(f"{path}: line {line}: non-numeric {col} value {df[col].iloc[bad[0]]!r}")
        if df[col].dtype == object:
            df[col] = numeric

    outdoor_k = f_to_k(df['outdoor_F'].to_numpy(dtype=float))
    out_of_range = np.flatnonzero((outdoor_k < WEATHER_MIN_K) | (outdoor_k > WEATHER_MAX_K))
    if out_of_range.size:
        line = int(out_of_range[0]) + 2
        raise WeatherFormatError(f"{path}: line {line}: outdoor temperature outside the supported range")

    t = df['t_min'].to_numpy(dtype=float)
    if len(t) > 1:
        gaps = np.diff(t)
        bad = np.flatnonzero((gaps <= 0) | (gaps != gaps[0]))
        if bad.size:
            raise WeatherFormatError(f"{path}: line {int(bad[0]) + 3}: rows are not uniformly spaced")

    if 't_sol_F' not in df.columns:
        hour = (t % 1440.0) / 60.0
        df['t_sol_F'] = solar_temperature_f(df['outdoor_F'].to_numpy(dtype=float), hour, solar_boost)
    else:
        sol_k = f_to_k(df['t_sol_F'].to_numpy(dtype=float))
        too_cold = np.flatnonzero(sol_k < outdoor_k - SOLAR_BELOW_OUTDOOR_K)
        if too_cold.size:
            line = int(too_cold[0]) + 2
            raise WeatherFormatError(
                f"{path}: line {line}: t_sol_F is more than {SOLAR_BELOW_OUTDOOR_K:g} K below outdoor_F")

    logger.info("Loaded %d weather rows from %s", len(df), path)
    return df[WEATHER_COLUMNS].reset_index(drop=True)


def write_weather_csv(series: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series[WEATHER_COLUMNS].to_csv(path, index=False)
    return path


# ══════════════════════════════════════════════════════════════════════
# RUN CONFIG
# ══════════════════════════════════════════════════════════════════════

@dataclass
class RunConfig:
    """Everything one train / eval / sweep invocation needs; paths are absolute once loaded"""
    building: Path = Path('configs/reference_open.json')
    weather: str = 'greenville'
    weather_seed: Optional[int] = None
    step_minutes: int = 12
    duration_days: int = 30
    reward: RewardWeights = field(default_factory=RewardWeights)
    reward_mode: str = HEURISTIC
    hyper: Hyperparams = field(default_factory=lambda: Hyperparams(epochs=5))
    seed: int = 0
    max_substep_s: float = 120.0
    out_dir: Path = Path('runs/default')
    mode: str = 'train'

    def __post_init__(self):
        self.building = Path(self.building)
        self.out_dir = Path(self.out_dir)
        if self.step_minutes not in STEP_MINUTES:
            raise ConfigError(f"step_minutes must be one of {STEP_MINUTES}, got {self.step_minutes}")
        if self.duration_days < 1:
            raise ConfigError("duration_days must be >= 1")
        if self.reward_mode not in REWARD_MODES:
            raise ConfigError(f"reward mode must be one of {REWARD_MODES}")
        if self.max_substep_s <= 0:
            raise ConfigError("max_substep_s must be positive")

    @property
    def steps_per_epoch(self) -> int:
        return self.duration_days * 1440 // self.step_minutes

    @property
    def weather_is_profile(self) -> bool:
        return self.weather in PROFILES

    def resolved_weather_seed(self) -> np.random.SeedSequence:
        """Explicit weather seed, else the weather child stream of the run seed"""
        if self.weather_seed is not None:
            return np.random.SeedSequence(self.weather_seed)
        return np.random.SeedSequence(self.seed).spawn(4)[3]

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with top-level fields, reward weights (eta_*) or hyperparameters replaced"""
        top, reward, hyper = {}, {}, {}
        reward_names = {f.name for f in fields(RewardWeights)}
        hyper_names = {f.name for f in fields(Hyperparams)}
        top_names = {f.name for f in fields(RunConfig)}
        for key, value in overrides.items():
            if value is None:
                continue
            # run-level fields win over same-named hyperparameters (seed)
            if key in top_names:
                top[key] = value
            elif key in reward_names:
                reward[key] = value
            elif key in hyper_names:
                hyper[key] = value
            else:
                raise UsageError(f"unknown run config field {key!r}")
        if reward:
            top['reward'] = replace(self.reward, **reward)
        if hyper:
            top['hyper'] = replace(self.hyper, **hyper)
        return replace(self, **top)


def _resolve(base: Path, value) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base / p).resolve()


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Load a run config JSON document

    Relative paths (building, weather CSV, out_dir) resolve against the
    directory holding the run config.
    """
    doc = _read_json(path)
    base = Path(path).resolve().parent
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")

    kwargs = {k: v for k, v in doc.items() if k not in ('reward', 'hyper')}
    if 'building' in doc:
        kwargs['building'] = _resolve(base, doc['building'])
    if 'out_dir' in doc:
        kwargs['out_dir'] = _resolve(base, doc['out_dir'])
    if 'weather' in doc and doc['weather'] not in PROFILES:
        kwargs['weather'] = str(_resolve(base, doc['weather']))

    reward_doc = dict(doc.get('reward', {}))
    if 'mode' in reward_doc:
        kwargs['reward_mode'] = reward_doc.pop('mode')
    try:
        kwargs['reward'] = RewardWeights(**reward_doc)
        hyper_doc = dict(doc.get('hyper', {}))
        hyper_doc.setdefault('epochs', 5)
        kwargs['hyper'] = Hyperparams(**hyper_doc)
        return RunConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(f"{path}: {e}") from None
    except UsageError as e:
        raise ConfigError(f"{path}: {e}") from None
