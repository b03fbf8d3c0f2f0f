"""
The DQN recovers the exact optimal policy of a three-state comfort problem
"""

import numpy as np
import pytest

from src.toy_mdp import OFF, ON, ToyMdp, greedy_policy, toy_hyperparams, train_toy_dqn, value_iteration


def test_transitions_and_rewards():
    mdp = ToyMdp()
    assert [mdp.next_state(s, ON) for s in range(3)] == [1, 2, 2]
    assert [mdp.next_state(s, OFF) for s in range(3)] == [0, 0, 1]
    assert mdp.reward(1, ON) == pytest.approx(-2.0)
    assert mdp.reward(2, OFF) == pytest.approx(-0.1 * 3.0 ** 2)


def test_value_iteration_policy():
    v, q, policy = value_iteration(ToyMdp())
    assert list(policy) == [ON, ON, OFF]
    np.testing.assert_allclose(v, q.max(axis=1))


@pytest.mark.parametrize('seed', [0, 1])
def test_trained_dqn_matches_the_optimal_policy(seed):
    mdp = ToyMdp()
    agent = train_toy_dqn(mdp, steps=10_000, hyper=toy_hyperparams(seed))
    _, _, policy = value_iteration(mdp)
    np.testing.assert_array_equal(greedy_policy(agent, mdp), policy)
