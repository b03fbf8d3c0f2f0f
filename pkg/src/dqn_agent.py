"""
DQN Agent Module for the open-office HVAC simulator
==================================================
Includes:
- State encoding (min-max normalization of the 14 environment variables)
- A fully-connected Q-network with hand-written forward/backward passes
- Epsilon-greedy action selection over the 2^6 comfort-policy combinations
- Uniform experience replay ring buffer
- TD targets from a periodically synchronized target network
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import TrainingDivergenceError, UsageError

logger = logging.getLogger(__name__)

N_ZONES = 6
STATE_DIM = 2 + 2 * N_ZONES
N_ACTIONS = 2 ** N_ZONES
OUTDOOR_RANGE_F = (25.0, 110.0)
ZONE_RANGE_F = (60.0, 90.0)
WEIGHTS_FORMAT_VERSION = 1


# ══════════════════════════════════════════════════════════════════════
# HYPERPARAMETERS
# ══════════════════════════════════════════════════════════════════════

@dataclass
class Hyperparams:
    lr: float = 0.001
    gamma: float = 0.9
    epsilon: float = 0.1
    batch_size: int = 128
    buffer_size: int = 10_000
    minimal_size: int = 200
    target_update: int = 200  # train steps between target syncs
    epochs: int = 20
    hidden_sizes: tuple = (128, 128, 128)
    grad_clip: float = 10.0
    epsilon_start: Optional[float] = None
    epsilon_decay_steps: int = 0
    seed: int = 0

    def __post_init__(self):
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        if self.lr <= 0:
            raise UsageError("learning rate must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise UsageError("gamma must lie in [0, 1]")
        if not 0.0 <= self.epsilon <= 1.0:
            raise UsageError("epsilon must lie in [0, 1]")
        if self.epsilon_start is not None and not 0.0 <= self.epsilon_start <= 1.0:
            raise UsageError("epsilon_start must lie in [0, 1]")
        if self.batch_size < 1 or self.buffer_size < 1 or self.target_update < 1 or self.epochs < 1:
            raise UsageError("batch_size, buffer_size, target_update and epochs must be >= 1")
        if self.minimal_size > self.buffer_size:
            raise UsageError("minimal_size cannot exceed buffer_size")

    def epsilon_at(self, step: int) -> float:
        """Exploration rate after `step` environment steps (linear decay, then constant)"""
        if self.epsilon_start is None or self.epsilon_decay_steps <= 0:
            return self.epsilon
        frac = min(1.0, step / self.epsilon_decay_steps)
        return self.epsilon_start + frac * (self.epsilon - self.epsilon_start)


# ══════════════════════════════════════════════════════════════════════
# STATE / ACTION ENCODING
# ══════════════════════════════════════════════════════════════════════

def _normalize(values, value_range) -> np.ndarray:
    low, high = value_range
    return np.clip((np.asarray(values, dtype=float) - low) / (high - low), 0.0, 1.0)


def encode_state(outdoor_f: float, zone_temps_f: Sequence[float], work: bool,
                 vav_status: Sequence[int]) -> np.ndarray:
    """
    Build the normalized state vector [O, W, T_1..T_n, V_1..V_n]

    Args:
        outdoor_f: Outdoor dry-bulb temperature (°F), scaled on 25..110
        zone_temps_f: Zone temperatures (°F), scaled on 60..90
        work: Work-hour flag
        vav_status: Current comfort-policy bit per VAV

    Returns:
        Array of length 2 + 2n (14 for the six-zone office), entries in [0, 1]
    """
    temps = np.asarray(zone_temps_f, dtype=float)
    status = np.asarray(vav_status, dtype=float)
    if temps.shape != status.shape:
        raise UsageError("zone temperatures and VAV status must have equal length")
    return np.concatenate([
        _normalize([outdoor_f], OUTDOOR_RANGE_F),
        [1.0 if work else 0.0],
        _normalize(temps, ZONE_RANGE_F),
        status,
    ])


def decode_action(action: int, n_zones: int = N_ZONES) -> np.ndarray:
    """Action index -> per-zone comfort bits; bit b drives zone b+1"""
    action = int(action)
    if not 0 <= action < 2 ** n_zones:
        raise UsageError(f"action {action} outside 0..{2 ** n_zones - 1}")
    return np.array([(action >> b) & 1 for b in range(n_zones)], dtype=int)


def encode_action(bits: Sequence[int]) -> int:
    return int(sum(int(bit) << b for b, bit in enumerate(bits)))


# ══════════════════════════════════════════════════════════════════════
# Q-NETWORK
# ══════════════════════════════════════════════════════════════════════

@dataclass(eq=False)
class QNetwork:
    """ReLU hidden layers, identity output; weights[i] has shape (fan_in, fan_out)"""
    weights: list
    biases: list

    @property
    def layer_sizes(self) -> tuple:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    @property
    def parameter_count(self) -> int:
        return int(sum(w.size + b.size for w, b in zip(self.weights, self.biases)))

    def copy(self) -> "QNetwork":
        return QNetwork([w.copy() for w in self.weights], [b.copy() for b in self.biases])


def init_network(layer_sizes: Sequence[int], rng: np.random.Generator) -> QNetwork:
    """Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases"""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return QNetwork(weights, biases)


def _forward_pass(net: QNetwork, x: np.ndarray) -> list:
    activations = [x]
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = activations[-1] @ w + b
        activations.append(np.maximum(z, 0.0) if i < last else z)
    return activations


def forward(net: QNetwork, s: np.ndarray) -> np.ndarray:
    """Q-values for one state (1-D input) or a batch (2-D input)"""
    s = np.asarray(s, dtype=float)
    out = _forward_pass(net, np.atleast_2d(s))[-1]
    return out[0] if s.ndim == 1 else out


def loss_and_gradients(net: QNetwork, states: np.ndarray, actions: np.ndarray, targets: np.ndarray) -> tuple:
    """
    Mean squared TD error on the taken actions and its gradients

    Returns:
        (loss, weight gradients, bias gradients)
    """
    activations = _forward_pass(net, np.atleast_2d(np.asarray(states, dtype=float)))
    q = activations[-1]
    rows = np.arange(q.shape[0])
    actions = np.asarray(actions, dtype=int)
    error = q[rows, actions] - np.asarray(targets, dtype=float)
    loss = float(np.mean(error ** 2))

    delta = np.zeros_like(q)
    delta[rows, actions] = 2.0 * error / q.shape[0]

    grad_w = [None] * len(net.weights)
    grad_b = [None] * len(net.biases)
    for i in reversed(range(len(net.weights))):
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i].T) * (activations[i] > 0.0)
    return loss, grad_w, grad_b


def td_target(r: float, s_next: np.ndarray, target_net: QNetwork, gamma: float) -> float:
    """r + gamma * max_a' Q_target(s', a'); the task is continuing, no terminal cutoff"""
    return float(r + gamma * np.max(forward(target_net, s_next)))


def td_targets(rewards: np.ndarray, next_states: np.ndarray, target_net: QNetwork, gamma: float) -> np.ndarray:
    return np.asarray(rewards, dtype=float) + gamma * forward(target_net, np.atleast_2d(next_states)).max(axis=1)


def select_action(q: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy; greedy ties resolve to the lowest index"""
    if rng.random() < epsilon:
        return int(rng.integers(len(q)))
    return int(np.argmax(q))


def sync_target(net: QNetwork, target_net: QNetwork) -> None:
    """Copy every parameter of net into target_net in place"""
    if net.layer_sizes != target_net.layer_sizes:
        raise UsageError("network and target network shapes differ")
    for dst, src in zip(target_net.weights + target_net.biases, net.weights + net.biases):
        np.copyto(dst, src)


def save_weights(net: QNetwork, path: Union[str, Path]) -> None:
    """Versioned .npz snapshot: layer dims then float64 weights and biases"""
    arrays = {'format_version': np.array(WEIGHTS_FORMAT_VERSION),
              'layer_sizes': np.array(net.layer_sizes, dtype=np.int64)}
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        arrays[f'W{i}'] = w.astype(np.float64)
        arrays[f'b{i}'] = b.astype(np.float64)
    with open(path, 'wb') as fh:
        np.savez(fh, **arrays)


def load_weights(path: Union[str, Path]) -> QNetwork:
    with np.load(path) as data:
        version = int(data['format_version'])
        if version != WEIGHTS_FORMAT_VERSION:
            raise UsageError(f"unsupported weights format version {version}")
        n_layers = len(data['layer_sizes']) - 1
        weights = [data[f'W{i}'].copy() for i in range(n_layers)]
        biases = [data[f'b{i}'].copy() for i in range(n_layers)]
    return QNetwork(weights, biases)


# ══════════════════════════════════════════════════════════════════════
# EXPERIENCE REPLAY
# ══════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class Transition:
    s: np.ndarray
    a: int
    r: float
    s_next: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.s)) and np.all(np.isfinite(self.s_next)) and np.isfinite(self.r)):
            raise UsageError("transitions must be finite")


class TransitionBatch(NamedTuple):
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray


def stack_transitions(transitions: Sequence[Transition]) -> TransitionBatch:
    return TransitionBatch(
        np.array([t.s for t in transitions], dtype=float),
        np.array([t.a for t in transitions], dtype=int),
        np.array([t.r for t in transitions], dtype=float),
        np.array([t.s_next for t in transitions], dtype=float),
    )


class ReplayBuffer:
    """Fixed-capacity ring; the oldest transition is overwritten first"""

    def __init__(self, capacity: int = 10_000, state_dim: int = STATE_DIM, minimal_size: int = 200):
        if capacity < 1:
            raise UsageError("capacity must be >= 1")
        self.capacity = capacity
        self.minimal_size = minimal_size
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros(capacity, dtype=int)
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.size = 0
        self._next = 0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> None:
        i = self._next
        self.states[i] = transition.s
        self.actions[i] = transition.a
        self.rewards[i] = transition.r
        self.next_states[i] = transition.s_next
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def ready(self) -> bool:
        return self.size >= self.minimal_size

    def sample_indices(self, rng: np.random.Generator, batch_size: int) -> np.ndarray:
        if not self.ready():
            raise UsageError(f"buffer holds {self.size} transitions, sampling needs {self.minimal_size}")
        return rng.integers(0, self.size, size=batch_size)

    def sample(self, rng: np.random.Generator, batch_size: int = 128) -> TransitionBatch:
        """Uniform sampling with replacement"""
        idx = self.sample_indices(rng, batch_size)
        return TransitionBatch(self.states[idx], self.actions[idx], self.rewards[idx], self.next_states[idx])

    def transitions(self) -> list:
        """Stored transitions, oldest first"""
        start = self._next if self.size == self.capacity else 0
        order = [(start + k) % self.capacity for k in range(self.size)]
        return [Transition(self.states[i].copy(), int(self.actions[i]), float(self.rewards[i]),
                           self.next_states[i].copy()) for i in order]


def buffer_push(buffer: ReplayBuffer, transition: Transition) -> None:
    buffer.push(transition)


def buffer_sample(buffer: ReplayBuffer, rng: np.random.Generator, batch_size: int = 128) -> TransitionBatch:
    return buffer.sample(rng, batch_size)


# ══════════════════════════════════════════════════════════════════════
# TRAINING
# ══════════════════════════════════════════════════════════════════════

def train_step(net: QNetwork, target_net: QNetwork, batch: Union[TransitionBatch, Sequence[Transition]],
               hyper: Hyperparams) -> float:
    """
    One SGD update of net on a replay batch

    Args:
        net: Online network (updated in place)
        target_net: Target network (read only)
        batch: TransitionBatch or list of Transitions
        hyper: Learning rate, discount and gradient clip

    Returns:
        Mean squared TD error before the update
    """
    if not isinstance(batch, TransitionBatch):
        if len(batch) == 0:
            raise UsageError("train_step needs a non-empty batch")
        batch = stack_transitions(batch)
    if len(batch.actions) == 0:
        raise UsageError("train_step needs a non-empty batch")

    targets = td_targets(batch.rewards, batch.next_states, target_net, hyper.gamma)
    loss, grad_w, grad_b = loss_and_gradients(net, batch.states, batch.actions, targets)
    if not np.isfinite(loss):
        raise TrainingDivergenceError(f"TD loss became non-finite ({loss})")

    norm = np.sqrt(sum(float(np.sum(g * g)) for g in grad_w + grad_b))
    scale = hyper.grad_clip / norm if norm > hyper.grad_clip else 1.0
    for param, grad in zip(net.weights + net.biases, grad_w + grad_b):
        param -= hyper.lr * scale * grad
    return loss


@dataclass
class DqnAgent:
    """Online network, target network, replay buffer and the seeded RNG streams"""
    hyper: Hyperparams = field(default_factory=Hyperparams)
    state_dim: int = STATE_DIM
    n_actions: int = N_ACTIONS

    def __post_init__(self):
        init_seq, explore_seq, replay_seq = np.random.SeedSequence(self.hyper.seed).spawn(3)
        sizes = (self.state_dim,) + self.hyper.hidden_sizes + (self.n_actions,)
        self.net = init_network(sizes, np.random.default_rng(init_seq))
        self.target_net = self.net.copy()
        self.buffer = ReplayBuffer(self.hyper.buffer_size, self.state_dim, self.hyper.minimal_size)
        self.explore_rng = np.random.default_rng(explore_seq)
        self.replay_rng = np.random.default_rng(replay_seq)
        self.env_steps = 0
        self.train_steps = 0

    def act(self, state: np.ndarray, greedy: bool = False) -> int:
        epsilon = 0.0 if greedy else self.hyper.epsilon_at(self.env_steps)
        return select_action(forward(self.net, state), epsilon, self.explore_rng)

    def remember(self, s, a, r, s_next) -> None:
        self.buffer.push(Transition(np.asarray(s, dtype=float), int(a), float(r), np.asarray(s_next, dtype=float)))
        self.env_steps += 1

    def learn(self) -> Optional[float]:
        """Train on one replay batch once the buffer is warm; sync the target on cadence"""
        if not self.buffer.ready():
            return None
        batch = self.buffer.sample(self.replay_rng, self.hyper.batch_size)
        loss = train_step(self.net, self.target_net, batch, self.hyper)
        self.train_steps += 1
        if self.train_steps % self.hyper.target_update == 0:
            sync_target(self.net, self.target_net)
            logger.debug("target network synced after %d train steps", self.train_steps)
        return loss
