import numpy as np
import pytest

from nashpgd.catalog import KEYS, builtin, distance_to_equilibria
from nashpgd.equilibria import is_nash_profile, ne_residual
from nashpgd.game import GameError, SolvePoint, joint_index


def payoff(key, player, actions):
    game = builtin(key).game
    return game.utilities[player, joint_index(game, actions)]


def test_table_entries():
    assert payoff("rps", 0, (2, 1)) == 1  # player 1, (S, P)
    assert payoff("jordan", 2, (1, 0, 0)) == 1  # player 3, (a1_2, a2_1, a3_1)
    assert payoff("infinite2x2", 1, (1, 1)) == -5  # player 2, (a1_2, a2_2)


def test_rps_is_zero_sum_cycle():
    game = builtin("rps").game
    u1, u2 = game.payoff_tensor(0), game.payoff_tensor(1)
    np.testing.assert_array_equal(u1, u2.T)
    assert game.labels == (("R", "P", "S"), ("R", "P", "S"))


def test_shapes():
    assert builtin("rps").game.action_counts == (3, 3)
    assert builtin("jordan").game.action_counts == (2, 2, 2)
    assert builtin("finite3x3").game.action_counts == (3, 3)
    assert builtin("infinite2x2").game.action_counts == (2, 2)


def test_known_equilibria_are_nash(named):
    assert named.known_equilibria
    for pi in named.known_equilibria:
        assert is_nash_profile(named.game, SolvePoint.on_graph(named.game, pi), 1e-9)
        assert distance_to_equilibria(named, pi) <= 1e-12


def test_family_members_are_equilibria():
    named = builtin("infinite2x2")
    for a in np.linspace(0, 1, 11):
        for pi in named.family.sample(a):
            assert ne_residual(named.game, pi) <= 0.0


def test_family_distance():
    fam = builtin("infinite2x2").family
    assert fam.distance(([0.3, 0.7], [1.0, 0.0])) == pytest.approx(0.0, abs=1e-4)
    assert fam.distance(([0.0, 1.0], [0.0, 1.0])) == pytest.approx(1.0)
    assert fam.distance(([0.5, 0.5], [0.9, 0.1])) == pytest.approx(0.1, abs=1e-4)


def test_off_family_points_are_not_equilibria():
    game = builtin("infinite2x2").game
    assert ne_residual(game, ([0.5, 0.5], [0.5, 0.5])) > 0.1


def test_non_equilibria_are_far(named, rng):
    pi = tuple(np.eye(m)[-1] for m in named.game.action_counts)
    if ne_residual(named.game, pi) > 1e-9:
        assert distance_to_equilibria(named, pi) > 1e-2


def test_unknown_key():
    with pytest.raises(GameError, match="unknown builtin game 'chess'"):
        builtin("chess")


def test_builds_are_independent():
    a, b = builtin("rps"), builtin("rps")
    assert a.game == b.game and a.game.fingerprint() == b.game.fingerprint()
    assert set(KEYS) == {"rps", "jordan", "finite3x3", "infinite2x2"}
