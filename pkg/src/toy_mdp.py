"""
Toy comfort MDP: one zone, three temperature bins, heat ON / OFF.

Used to check that the DQN machinery recovers the exact optimal policy of a
problem small enough for value iteration.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .dqn_agent import DqnAgent, Hyperparams, forward
from .hvac_plant import ComfortBands
from .reward import RewardWeights, comfort_loss, energy_loss

logger = logging.getLogger(__name__)

STATE_NAMES = ('cold', 'cool', 'comfy')
STATE_TEMPS_F = (64.0, 69.5, 72.5)
OFF, ON = 0, 1


@dataclass(frozen=True)
class ToyMdp:
    """ON warms the zone one bin (comfy stays comfy), OFF cools it one bin (cold stays cold)"""
    gamma: float = 0.9
    weights: RewardWeights = field(default_factory=lambda: RewardWeights(eta_t=0.1, eta_e=2.0, eta_s=0.0))
    bands: ComfortBands = field(default_factory=ComfortBands)
    e_scale: float = 1.0

    n_states: int = 3
    n_actions: int = 2

    def next_state(self, s: int, a: int) -> int:
        return min(s + 1, self.n_states - 1) if a == ON else max(s - 1, 0)

    def reward(self, s: int, a: int) -> float:
        temp = STATE_TEMPS_F[self.next_state(s, a)]
        l_t = comfort_loss([temp], self.weights, self.bands, during_work=True)
        l_e = energy_loss(self.e_scale if a == ON else 0.0, self.weights, self.e_scale)
        return l_t + l_e

    def one_hot(self, s: int) -> np.ndarray:
        return np.eye(self.n_states)[s]


def value_iteration(mdp: ToyMdp, tol: float = 1e-12, max_iter: int = 10_000) -> tuple:
    """
    Exact state values and greedy policy

    Returns:
        (V, Q, policy) with Q of shape (n_states, n_actions); ties go to the lower action
    """
    rewards = np.array([[mdp.reward(s, a) for a in range(mdp.n_actions)] for s in range(mdp.n_states)])
    nxt = np.array([[mdp.next_state(s, a) for a in range(mdp.n_actions)] for s in range(mdp.n_states)])
    v = np.zeros(mdp.n_states)
    for _ in range(max_iter):
        q = rewards + mdp.gamma * v[nxt]
        v_new = q.max(axis=1)
        if np.max(np.abs(v_new - v)) < tol:
            v = v_new
            break
        v = v_new
    q = rewards + mdp.gamma * v[nxt]
    return v, q, np.argmax(q, axis=1)


def toy_hyperparams(seed: int = 0) -> Hyperparams:
    return Hyperparams(lr=0.01, gamma=0.9, epsilon=1.0, batch_size=32, buffer_size=2000,
                       minimal_size=64, target_update=100, hidden_sizes=(32,), seed=seed)


def train_toy_dqn(mdp: ToyMdp, steps: int = 10_000, hyper: Hyperparams = None) -> DqnAgent:
    """Train with uniform exploration on a single continuing trajectory"""
    hyper = hyper or toy_hyperparams()
    agent = DqnAgent(hyper, state_dim=mdp.n_states, n_actions=mdp.n_actions)
    s = int(agent.explore_rng.integers(mdp.n_states))
    for _ in range(steps):
        x = mdp.one_hot(s)
        a = agent.act(x)
        s_next = mdp.next_state(s, a)
        agent.remember(x, a, mdp.reward(s, a), mdp.one_hot(s_next))
        agent.learn()
        s = s_next
    logger.debug("toy DQN trained for %d steps (%d updates)", steps, agent.train_steps)
    return agent


def greedy_policy(agent: DqnAgent, mdp: ToyMdp) -> np.ndarray:
    return np.argmax(forward(agent.net, np.eye(mdp.n_states)), axis=1)
