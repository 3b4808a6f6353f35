import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from nashpgd.catalog import builtin
from nashpgd.game import GameError, SolvePoint
from nashpgd.projection import SimplexView, project_block, project_simplex, simplex_views

finite_vectors = arrays(
    np.float64, st.integers(1, 30), elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
)


def test_examples():
    np.testing.assert_allclose(project_simplex([0.5, 0.9]), [0.3, 0.7], atol=1e-15)
    np.testing.assert_allclose(project_simplex([1.5, -0.2]), [1.0, 0.0], atol=1e-15)
    v = np.array([0.2, 0.3, 0.5])
    np.testing.assert_array_equal(project_simplex(v), v)


def test_two_dimensional_closed_form(rng):
    for a, b in rng.uniform(-0.4, 1.4, size=(200, 2)):
        expect = np.clip([(a - b + 1) / 2, (b - a + 1) / 2], 0, 1)
        np.testing.assert_allclose(project_simplex([a, b]), expect, atol=1e-14)


def test_rejects_bad_input():
    with pytest.raises(GameError):
        project_simplex([])
    with pytest.raises(GameError):
        project_simplex([0.1, np.nan])
    with pytest.raises(GameError):
        project_simplex([np.inf, 0.0])


@given(finite_vectors)
def test_feasible_and_idempotent(v):
    x = project_simplex(v)
    assert x.min() >= 0
    assert abs(x.sum() - 1) <= 1e-12
    assert np.max(np.abs(project_simplex(x) - x)) <= 1e-15


@given(finite_vectors, st.integers(0, 2**32 - 1))
def test_variational_inequality(v, seed):
    x = project_simplex(v)
    ys = np.random.default_rng(seed).dirichlet(np.ones(len(v)), size=100)
    scale = max(1.0, np.abs(v).max())
    assert np.max((ys - x) @ (v - x)) <= 1e-12 * scale


@given(finite_vectors, st.integers(0, 2**32 - 1))
def test_nonexpansive(u, seed):
    v = u + np.random.default_rng(seed).normal(size=u.shape)
    assert np.linalg.norm(project_simplex(u) - project_simplex(v)) <= np.linalg.norm(u - v) + 1e-12


def test_ties_are_deterministic():
    x = project_simplex([0.7, 0.7, 0.7, -1.0])
    np.testing.assert_array_equal(x, project_simplex([0.7, 0.7, 0.7, -1.0]))
    np.testing.assert_allclose(x, [1 / 3, 1 / 3, 1 / 3, 0], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_grid_search(n, rng):
    h = 1 / 200
    for v in rng.uniform(-1, 2, size=(60, n)):
        x = project_simplex(v)
        best = oracles.grid_projection(v)
        # the exact optimum can beat the grid but never lose to it by more than a grid cell
        assert np.linalg.norm(x - v) <= np.linalg.norm(best - v) + 1e-12
        assert np.max(np.abs(x - best)) <= h * n


def test_project_block(rng):
    g = builtin("jordan").game
    views = simplex_views(g)
    assert [(b.offset, b.length) for b in views] == [(0, 2), (2, 2), (4, 2), (6, 8)]
    z = SolvePoint.on_graph(g, ([0.3, 0.7], [0.5, 0.5], [0.9, 0.1]))
    np.testing.assert_array_equal(project_block(z.flat(), views).flat(), z.flat())
    np.testing.assert_array_equal(project_block(z.flat() - 0.3 * np.zeros(14), views).flat(), z.flat())
    for _ in range(50):
        out = project_block(rng.normal(size=14) * 3, views)
        assert out.is_feasible()


def test_project_block_rejects_bad_tiling():
    with pytest.raises(GameError):
        project_block(np.zeros(5), [SimplexView(0, 2), SimplexView(2, 2)])
    with pytest.raises(GameError):
        project_block(np.zeros(4), [SimplexView(0, 2), SimplexView(1, 3)])
