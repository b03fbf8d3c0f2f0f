"""
Open-office HVAC DQN simulator - Source Package
"""

from .baseline_control import Schedule, always_off_policy, always_on_policy, is_work_time, policy_by_name, rbc_policy
from .data_loader import (
    BuildingConfig, RunConfig, load_building_config, load_run_config, load_weather_csv, write_weather_csv,
)
from .dqn_agent import (
    DqnAgent, Hyperparams, QNetwork, ReplayBuffer, Transition, buffer_push, buffer_sample, decode_action,
    encode_state, forward, init_network, load_weights, save_weights, select_action, sync_target, td_target,
    train_step,
)
from .environment import BuildingEnv
from .errors import (
    ConfigError, HvacSimError, IntegrationBlowupError, StabilityError, TrainingDivergenceError,
    UndefinedMetricError, UsageError, WeatherFormatError,
)
from .harness import (
    SweepSpec, compare_plans, compare_policies, convergence_epoch, run_ablation, run_climates, run_eval,
    run_sweep, run_training,
)
from .hvac_plant import ComfortBands, PhysicalCommand, VavSpec, VavStatus, electric_energy, plant_output, translate_action
from .metrics import (
    calculate_all_metrics, ccr, cvr, energy_saving_ratio, homogeneity_stats, transition_count,
)
from .reward import (
    RewardBreakdown, RewardWeights, binary_comfort_loss, comfort_loss, compute_reward, energy_loss,
    smoothness_loss, total_reward,
)
from .thermal_sim import (
    BuildingModel, Coupling, ThermalState, WeatherSample, ZoneSpec, conduction_flux, convection_flux,
    solve_steady_state, steady_state_residual, step,
)
from .weather import PROFILES, WeatherProfile, generate_weather

__all__ = [
    # thermal-sim
    'ZoneSpec',
    'Coupling',
    'BuildingModel',
    'WeatherSample',
    'ThermalState',
    'conduction_flux',
    'convection_flux',
    'step',
    'steady_state_residual',
    'solve_steady_state',
    # hvac-plant
    'VavSpec',
    'VavStatus',
    'ComfortBands',
    'PhysicalCommand',
    'translate_action',
    'plant_output',
    'electric_energy',
    # dqn-agent
    'Hyperparams',
    'QNetwork',
    'Transition',
    'ReplayBuffer',
    'DqnAgent',
    'encode_state',
    'decode_action',
    'init_network',
    'forward',
    'select_action',
    'td_target',
    'train_step',
    'sync_target',
    'buffer_push',
    'buffer_sample',
    'save_weights',
    'load_weights',
    # reward-metrics
    'RewardWeights',
    'RewardBreakdown',
    'comfort_loss',
    'binary_comfort_loss',
    'energy_loss',
    'smoothness_loss',
    'total_reward',
    'compute_reward',
    'ccr',
    'cvr',
    'energy_saving_ratio',
    'homogeneity_stats',
    'transition_count',
    'calculate_all_metrics',
    # baseline-control
    'Schedule',
    'is_work_time',
    'rbc_policy',
    'always_on_policy',
    'always_off_policy',
    'policy_by_name',
    # sim-harness
    'WeatherProfile',
    'PROFILES',
    'generate_weather',
    'BuildingConfig',
    'RunConfig',
    'load_building_config',
    'load_run_config',
    'load_weather_csv',
    'write_weather_csv',
    'BuildingEnv',
    'SweepSpec',
    'run_training',
    'run_eval',
    'compare_policies',
    'run_sweep',
    'compare_plans',
    'run_ablation',
    'run_climates',
    'convergence_epoch',
    # errors
    'HvacSimError',
    'UsageError',
    'ConfigError',
    'WeatherFormatError',
    'StabilityError',
    'IntegrationBlowupError',
    'TrainingDivergenceError',
    'UndefinedMetricError',
]
