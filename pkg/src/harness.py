"""
Simulation Harness Module for the open-office HVAC simulator
Includes:
- DQN training loop (state -> action -> plant -> thermal step -> reward -> replay)
- Greedy / rule-based evaluation and policy comparison
- Energy-comfort and smoothness sweeps
- Open vs closed plan comparison
- Heuristic vs binary reward ablation
- Multi-climate generalizability runs
- Run output files (EpisodeLog CSVs, weights, summary.csv, summary.txt)
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from .baseline_control import policy_by_name
from .data_loader import BuildingConfig, RunConfig, load_building_config, load_weather_csv
from .dqn_agent import (
    DqnAgent, QNetwork, decode_action, forward, load_weights, save_weights, select_action,
)
from .environment import BuildingEnv
from .errors import IntegrationBlowupError, TrainingDivergenceError, UndefinedMetricError, UsageError
from .metrics import calculate_all_metrics, ccr, total_energy_j, transition_count
from .reward import BINARY, HEURISTIC
from .weather import PROFILES, WeatherProfile, generate_weather, get_profile, weather_stats

logger = logging.getLogger(__name__)

DQN = 'dqn'
EVAL_POLICIES = (DQN, 'rbc', 'always_on', 'always_off')

# η_E : η_T cells of the energy-comfort trade-off table
ETA_RATIO_GRID = ((1, 1), (2, 1), (5, 1), (10, 1), (1, 2), (1, 5), (1, 10), (2, 2), (5, 5), (10, 10))
ETA_S_GRID = (0.0, 1.0, 3.0, 5.0, 7.0)
SWEEP_AXES = ('eta_ratio', 'eta_s')


# ══════════════════════════════════════════════════════════════════════
# SETUP
# ══════════════════════════════════════════════════════════════════════

def load_building(config: RunConfig) -> BuildingConfig:
    return load_building_config(config.building)


def build_weather(config: RunConfig) -> tuple:
    """
    Weather series of a run

    Returns:
        (weather DataFrame, WeatherProfile or None for CSV input)
    """
    if config.weather_is_profile:
        profile = get_profile(config.weather)
        series = generate_weather(profile, config.duration_days, config.step_minutes,
                                  config.resolved_weather_seed())
        return series, profile
    return load_weather_csv(config.weather), None


def make_env(config: RunConfig, building: Optional[BuildingConfig] = None,
             weather: Optional[pd.DataFrame] = None) -> BuildingEnv:
    building = building or load_building(config)
    if weather is None:
        weather, _ = build_weather(config)
    return BuildingEnv(building, weather, config.step_minutes, config.steps_per_epoch,
                       config.reward, config.reward_mode, config.max_substep_s)


def _safe_cvr(log: pd.DataFrame, env: BuildingEnv) -> float:
    try:
        return 1.0 - ccr(log, env.bands)
    except UndefinedMetricError:
        return float('nan')


# ══════════════════════════════════════════════════════════════════════
# TRAINING
# ══════════════════════════════════════════════════════════════════════

@dataclass
class TrainingResult:
    net: QNetwork
    logs: list
    curve: pd.DataFrame


def run_training(config: RunConfig, building: Optional[BuildingConfig] = None,
                 weather: Optional[pd.DataFrame] = None, write: bool = True) -> TrainingResult:
    """
    Train a DQN controller on one building and weather series

    Args:
        config: Run configuration (epochs and DQN hyperparameters in config.hyper)
        building: Preloaded building (loaded from config.building when None)
        weather: Preloaded weather (built from config.weather when None)
        write: Write epoch logs, weights and the training curve to config.out_dir

    Returns:
        TrainingResult with the trained network, one EpisodeLog per epoch and
        the per-epoch curve
    """
    env = make_env(config, building, weather)
    hyper = replace(config.hyper, seed=config.seed)
    agent = DqnAgent(hyper, state_dim=2 + 2 * env.n_zones, n_actions=2 ** env.n_zones)

    logs, curve = [], []
    for epoch in range(1, hyper.epochs + 1):
        s = env.reset()
        rows, losses = [], []
        while not env.done:
            try:
                a = agent.act(s)
                s_next, reward, row = env.step(decode_action(a, env.n_zones))
                agent.remember(s, a, reward.total, s_next)
                loss = agent.learn()
            except (IntegrationBlowupError, TrainingDivergenceError) as exc:
                raise type(exc)(f"epoch {epoch}, step {env.t}: {exc}") from exc
            if loss is not None:
                losses.append(loss)
            rows.append(row)
            s = s_next

        log = env.log_frame(rows)
        logs.append(log)
        point = {
            'epoch': epoch,
            'steps': len(log),
            'total_reward': float(log['reward'].sum()),
            'energy_MJ': total_energy_j(log) / 1e6,
            'cvr': _safe_cvr(log, env),
            'transitions': transition_count(log),
            'mean_loss': float(np.mean(losses)) if losses else float('nan'),
        }
        curve.append(point)
        logger.info("epoch %d/%d: steps=%d reward=%.1f energy=%.1f MJ cvr=%.2f%% transitions=%d loss=%.4g",
                    epoch, hyper.epochs, point['steps'], point['total_reward'], point['energy_MJ'],
                    100 * point['cvr'], point['transitions'], point['mean_loss'])

    result = TrainingResult(agent.net, logs, pd.DataFrame(curve))
    if write:
        write_training_outputs(config.out_dir, result)
    return result


def write_training_outputs(out_dir: Union[str, Path], result: TrainingResult) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for epoch, log in enumerate(result.logs, start=1):
        log.to_csv(out_dir / f'epoch_{epoch:02d}.csv', index=False)
    save_weights(result.net, out_dir / 'weights.npz')
    result.curve.to_csv(out_dir / 'training_curve.csv', index=False)
    return out_dir


def convergence_epoch(rewards: Sequence[float], fraction: float = 0.95) -> int:
    """
    First epoch (1-based) whose total reward covers `fraction` of the
    improvement from the first to the final epoch

    A curve that never improves on its first epoch converges at epoch 1.
    """
    r = np.asarray(rewards, dtype=float)
    if r.size == 0:
        raise UsageError("convergence_epoch needs at least one epoch")
    if not 0.0 < fraction <= 1.0:
        raise UsageError("fraction must lie in (0, 1]")
    start, final = r[0], r[-1]
    if final <= start:
        return 1
    threshold = start + fraction * (final - start)
    return int(np.flatnonzero(r >= threshold)[0]) + 1


# ══════════════════════════════════════════════════════════════════════
# EVALUATION
# ══════════════════════════════════════════════════════════════════════

def _resolve_net(weights) -> QNetwork:
    if weights is None:
        raise UsageError("the dqn policy needs trained weights")
    if isinstance(weights, QNetwork):
        return weights
    return load_weights(weights)


def run_eval(config: RunConfig, policy: str, weights: Union[QNetwork, str, Path, None] = None,
             building: Optional[BuildingConfig] = None, weather: Optional[pd.DataFrame] = None,
             baseline: Optional[pd.DataFrame] = None) -> tuple:
    """
    Roll out one episode under a fixed policy ("dqn" runs greedy, needs weights)

    Returns:
        (EpisodeLog DataFrame, summary dict); saving_pct only when a baseline log is given
    """
    if policy not in EVAL_POLICIES:
        raise UsageError(f"unknown policy {policy!r}, expected one of {EVAL_POLICIES}")
    net = _resolve_net(weights) if policy == DQN else None
    rule = None if policy == DQN else policy_by_name(policy)
    env = make_env(config, building, weather)
    rng = np.random.default_rng(config.seed)

    s = env.reset()
    rows = []
    while not env.done:
        if net is not None:
            bits = decode_action(select_action(forward(net, s), 0.0, rng), env.n_zones)
        else:
            bits = rule(env.state.clock, env.schedule, env.n_zones)
        s, _, row = env.step(bits)
        rows.append(row)

    log = env.log_frame(rows)
    summary = {'policy': policy}
    summary.update(calculate_all_metrics(log, env.bands, baseline))
    return log, summary


def compare_policies(config: RunConfig, weights=None, policies: Sequence[str] = (DQN, 'rbc'),
                     building: Optional[BuildingConfig] = None,
                     weather: Optional[pd.DataFrame] = None) -> tuple:
    """
    Evaluate several policies on identical building, weather and seed

    Returns:
        (dict policy -> EpisodeLog, DataFrame of summaries); saving_pct is
        relative to the rbc run
    """
    building = building or load_building(config)
    if weather is None:
        weather, _ = build_weather(config)

    base_log, base_summary = run_eval(config, 'rbc', building=building, weather=weather)
    logs, summaries = {'rbc': base_log}, {}
    for policy in policies:
        if policy == 'rbc':
            log, summary = base_log, dict(base_summary, saving_pct=0.0)
        else:
            log, summary = run_eval(config, policy, weights, building, weather, baseline=base_log)
        logs[policy] = log
        summaries[policy] = summary
    return logs, pd.DataFrame([summaries[p] for p in policies])


def format_summary(summary: dict) -> str:
    lines = [f"policy: {summary.get('policy', '-')}"]
    lines.append(f"CCR (work hours): {100 * summary['ccr']:.2f} %")
    lines.append(f"CVR (work hours): {100 * summary['cvr']:.2f} %")
    if summary.get('saving_pct') is not None and not pd.isna(summary.get('saving_pct')):
        lines.append(f"saving vs RBC: {summary['saving_pct']:.2f} %")
    else:
        lines.append("saving vs RBC: n/a")
    lines.append(f"transitions: {summary['transitions']}")
    lines.append(f"energy: {summary['energy_MJ']:.2f} MJ")
    lines.append(f"total reward: {summary['total_reward']:.2f}")
    return "\n".join(lines) + "\n"


def write_run_outputs(out_dir: Union[str, Path], logs: dict, summaries: pd.DataFrame) -> Path:
    """EpisodeLog CSV per policy plus summary.csv and summary.txt"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for policy, log in logs.items():
        log.to_csv(out_dir / f'eval_{policy}.csv', index=False)
    summaries.to_csv(out_dir / 'summary.csv', index=False)
    text = "\n".join(format_summary(row) for row in summaries.to_dict('records'))
    (out_dir / 'summary.txt').write_text(text, encoding='utf-8')
    return out_dir


# ══════════════════════════════════════════════════════════════════════
# SWEEPS
# ══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: tuple = ()
    repeats: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise UsageError(f"sweep axis must be one of {SWEEP_AXES}")
        if not self.grid:
            object.__setattr__(self, 'grid', ETA_RATIO_GRID if self.axis == 'eta_ratio' else ETA_S_GRID)
        object.__setattr__(self, 'grid', tuple(self.grid))
        if self.repeats < 1:
            raise UsageError("repeats must be >= 1")

    def cells(self) -> list:
        """(label, reward overrides) per grid value"""
        if self.axis == 'eta_ratio':
            return [(f"{e:g}:{t:g}", {'eta_e': float(e), 'eta_t': float(t)}) for e, t in self.grid]
        return [(f"{v:g}", {'eta_s': float(v)}) for v in self.grid]


def evaluate_cell(config: RunConfig) -> dict:
    """Train one run, then evaluate greedy DQN against RBC on the same weather"""
    building = load_building(config)
    weather, _ = build_weather(config)
    result = run_training(config, building, weather, write=False)
    rbc_log, _ = run_eval(config, 'rbc', building=building, weather=weather)
    _, summary = run_eval(config, DQN, result.net, building, weather, baseline=rbc_log)
    return {
        'electricity_MJ': summary['energy_MJ'],
        'rbc_MJ': total_energy_j(rbc_log) / 1e6,
        'saving_pct': summary['saving_pct'],
        'violation_pct': 100.0 * summary['cvr'],
        'transitions': summary['transitions'],
        'total_reward': summary['total_reward'],
    }


def _run_cell(task: tuple) -> dict:
    index, label, overrides, seed, base = task
    config = base.with_overrides(seed=seed, **overrides)
    row = {'cell': index, 'label': label, 'seed': seed, 'eta_e': config.reward.eta_e,
           'eta_t': config.reward.eta_t, 'eta_s': config.reward.eta_s}
    try:
        row.update(evaluate_cell(config))
        row['error'] = ''
    except Exception as e:
        logger.error("sweep cell %s seed %d failed: %s", label, seed, e)
        row['error'] = str(e)
    return row


def run_sweep(spec: SweepSpec, base: RunConfig, workers: int = 1) -> pd.DataFrame:
    """
    Train and evaluate one run per (grid cell, seed)

    Args:
        spec: Sweep axis, grid and repeats
        base: Base run configuration; seeds are base.seed, base.seed + 1, ...
        workers: Parallel worker processes (1 = sequential)

    Returns:
        DataFrame sorted by (cell, seed); failed runs carry an error message
    """
    tasks = [(i, label, overrides, base.seed + k, base)
             for i, (label, overrides) in enumerate(spec.cells())
             for k in range(spec.repeats)]
    logger.info("sweep over %s: %d cells x %d seeds", spec.axis, len(spec.cells()), spec.repeats)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, tasks))
    else:
        rows = [_run_cell(t) for t in tasks]
    return pd.DataFrame(rows).sort_values(['cell', 'seed']).reset_index(drop=True)


def summarize_sweep(table: pd.DataFrame) -> pd.DataFrame:
    """Per-cell means over seeds, successful runs only"""
    ok = table[table['error'] == '']
    cols = ['electricity_MJ', 'saving_pct', 'violation_pct', 'transitions']
    return ok.groupby(['cell', 'label'], sort=True)[cols].mean().reset_index()


# ══════════════════════════════════════════════════════════════════════
# OPEN VS CLOSED PLAN
# ══════════════════════════════════════════════════════════════════════

def same_geometry(a: BuildingConfig, b: BuildingConfig) -> bool:
    """Identical zones and coupling surfaces; only coupling kinds and coefficients may differ"""
    if a.model.zones != b.model.zones:
        return False
    surfaces_a = sorted((c.pair(), c.surface_area) for c in a.model.couplings)
    surfaces_b = sorted((c.pair(), c.surface_area) for c in b.model.couplings)
    exterior_a = sorted((c.pair(), c.conductance) for c in a.model.couplings if c.is_exterior)
    exterior_b = sorted((c.pair(), c.conductance) for c in b.model.couplings if c.is_exterior)
    return surfaces_a == surfaces_b and exterior_a == exterior_b


def compare_plans(open_building: BuildingConfig, closed_building: BuildingConfig, config: RunConfig,
                  policy: str = 'rbc', weights=None, weather: Optional[pd.DataFrame] = None) -> pd.DataFrame:
    """
    Run the same policy, weather and seed on an open and a closed plan

    Returns:
        Two rows (open, closed) with energy, Δ_T, σ²_T and comfort figures
    """
    if not same_geometry(open_building, closed_building):
        raise UsageError("open and closed plans must share zone geometry and coupling surfaces")
    if weather is None:
        weather, _ = build_weather(config)

    rows = []
    for plan, building in (('open', open_building), ('closed', closed_building)):
        _, summary = run_eval(config, policy, weights, building, weather)
        rows.append({
            'plan': plan,
            'building': building.name,
            'energy_MJ': summary['energy_MJ'],
            'delta_T': summary['delta_T'],
            'var_T': summary['var_T'],
            'ccr': summary['ccr'],
            'cvr': summary['cvr'],
        })
        logger.info("%s plan: energy=%.1f MJ delta_T=%.3f F var_T=%.3f F^2",
                    plan, summary['energy_MJ'], summary['delta_T'], summary['var_T'])
    return pd.DataFrame(rows)


# ══════════════════════════════════════════════════════════════════════
# REWARD ABLATION / CLIMATES
# ══════════════════════════════════════════════════════════════════════

def run_ablation(base: RunConfig, seeds: Sequence[int] = (0, 1, 2), fraction: float = 0.95) -> tuple:
    """
    Heuristic vs binary reward training curves with identical seeds

    Returns:
        (table with seed, mode, convergence_epoch, final_reward;
         long-form curves with seed, mode, epoch, total_reward)
    """
    table, curves = [], []
    building = load_building(base)
    for seed in seeds:
        config = base.with_overrides(seed=seed)
        weather, _ = build_weather(config)
        for mode in (HEURISTIC, BINARY):
            result = run_training(replace(config, reward_mode=mode), building, weather, write=False)
            rewards = result.curve['total_reward'].to_numpy()
            table.append({
                'seed': seed,
                'mode': mode,
                'convergence_epoch': convergence_epoch(rewards, fraction),
                'final_reward': float(rewards[-1]),
            })
            for epoch, value in enumerate(rewards, start=1):
                curves.append({'seed': seed, 'mode': mode, 'epoch': epoch, 'total_reward': float(value)})
    return pd.DataFrame(table), pd.DataFrame(curves)


def heuristic_converges_first(table: pd.DataFrame) -> bool:
    """True when the heuristic reward converges no later than the binary one on a majority of seeds"""
    pivot = table.pivot(index='seed', columns='mode', values='convergence_epoch')
    wins = (pivot[HEURISTIC] <= pivot[BINARY]).sum()
    return bool(wins * 2 > len(pivot))


def run_climates(base: RunConfig, profiles: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Train and evaluate on each synthetic climate

    Returns:
        One row per location: saving %, violation %, comfort offset, variance,
        outdoor mean/max/min, humidity and energy
    """
    building = load_building(base)
    rows = []
    for name in profiles or list(PROFILES):
        profile: WeatherProfile = get_profile(name)
        config = base.with_overrides(weather=name)
        row = {'location': name}
        try:
            weather, _ = build_weather(config)
            result = run_training(config, building, weather, write=False)
            rbc_log, _ = run_eval(config, 'rbc', building=building, weather=weather)
            _, summary = run_eval(config, DQN, result.net, building, weather, baseline=rbc_log)
            row.update({
                'saving_pct': summary['saving_pct'],
                'violation_pct': 100.0 * summary['cvr'],
                'comfort_offset_F': summary['comfort_offset_F'],
                'var_T': summary['var_T'],
                'energy_MJ': summary['energy_MJ'],
                'rbc_MJ': total_energy_j(rbc_log) / 1e6,
            })
            row.update(weather_stats(weather, profile))
            row['error'] = ''
        except Exception as e:
            logger.error("climate %s failed: %s", name, e)
            row['error'] = str(e)
        rows.append(row)
    return pd.DataFrame(rows)

