import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emonet.graph import MarkovModel, SemanticNetwork, markov_model, transition_matrix
from emonet.lexicon import Partition
from emonet.mdmc import (
    CommunityNetwork,
    DecomposeConfig,
    Decomposition,
    DecompositionError,
    active_count,
    alpha_sweep,
    decompose,
    decompose_best,
    hard_assign,
    initial_memberships,
    omega,
    posterior,
)
from emonet.metrics import nmi

from _factories import random_network, two_cliques

CLIQUES = Partition.from_sequence([0, 0, 0, 1, 1, 1])


@pytest.fixture(scope="module")
def clique_model():
    return markov_model(two_cliques(), damping=0.15)


@pytest.fixture(scope="module")
def clique_dec(clique_model):
    return decompose(clique_model, DecomposeConfig(k_max=4, alpha=0.001, seed=0))


def test_two_cliques_two_communities(clique_dec):
    assert active_count(clique_dec) == 2
    for k in clique_dec.active():
        mass = clique_dec.p_given_k[k]
        assert max(mass[:3].sum(), mass[3:].sum()) > 1 - 1e-6
    assert nmi(hard_assign(clique_dec), CLIQUES) == pytest.approx(1.0)


def test_two_cliques_posterior_near_one(clique_dec):
    post = posterior(clique_dec)
    assert (post.max(axis=0) > 1 - 1e-6).all()
    np.testing.assert_allclose(post.sum(axis=0), 1.0, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_two_cliques_every_seed(clique_model, seed):
    dec = decompose(clique_model, DecomposeConfig(k_max=4, alpha=0.001, seed=seed))
    assert active_count(dec) == 2


def test_single_component_is_stationary():
    m = markov_model(random_network(np.random.default_rng(0), 9))
    dec = decompose(m, DecomposeConfig(k_max=1))
    assert dec.pi.tolist() == [1.0]
    np.testing.assert_allclose(dec.p_given_k[0], m.p, atol=1e-15)
    np.testing.assert_allclose(posterior(dec), 1.0, atol=1e-12)
    assert set(hard_assign(dec).labels.values()) == {0}
    assert active_count(dec) == 1


@pytest.mark.parametrize("seed", range(10))
def test_uniform_graph_large_alpha_one_community(seed):
    w = np.full((8, 8), 5.0)
    np.fill_diagonal(w, 0)
    m = markov_model(SemanticNetwork(tuple("abcdefgh"), w))
    assert active_count(decompose(m, DecomposeConfig(k_max=10, alpha=2.0, seed=seed))) == 1


def test_omega_single_component():
    m = markov_model(random_network(np.random.default_rng(2), 7))
    dec = decompose(m, DecomposeConfig(k_max=1))
    cn = omega(dec, m)
    expected = dec.pi[0] ** 2 * m.p @ m.t @ m.p
    assert cn.omega.shape == (1, 1)
    assert cn.omega[0, 0] == pytest.approx(expected, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(4, 20), k=st.integers(1, 6), seed=st.integers(0, 10**6),
       alpha=st.sampled_from([0.001, 0.1, 1.0]))
def test_omega_mass(n, k, seed, alpha):
    m = markov_model(random_network(np.random.default_rng(seed), n, zeros=0.3))
    dec = decompose(m, DecomposeConfig(k_max=k, alpha=alpha, seed=seed, max_iter=400))
    cn = omega(dec, m)
    act = dec.active()
    p_hat = dec.pi[act] @ dec.p_given_k[act]
    assert abs(cn.omega.sum() - p_hat @ m.t @ p_hat) <= 1e-9


def test_omega_no_cross_flow():
    m = markov_model(two_cliques(), damping=0.0)
    dec = decompose(m, DecomposeConfig(k_max=4))
    cn = omega(dec, m)
    assert cn.omega.shape == (2, 2)
    assert abs(cn.omega[0, 1]) < 1e-9 and abs(cn.omega[1, 0]) < 1e-9
    assert len(cn.top_nodes[0]) == 2


def test_alpha_sweep_cliques(clique_model):
    rows = alpha_sweep(clique_model, 4, [0.001, 0.01, 0.1, 1.0], range(3))
    assert [r.alpha for r in rows] == [0.001] * 3 + [0.01] * 3 + [0.1] * 3 + [1.0] * 3
    assert {r.active_count for r in rows} <= {1, 2}
    with pytest.raises(ValueError):
        alpha_sweep(clique_model, 4, [], [0])


@settings(max_examples=15, deadline=None)
@given(n=st.integers(3, 24), k=st.sampled_from([1, 4, 10]), seed=st.integers(0, 10**6),
       alpha=st.sampled_from([0.001, 0.1, 1.0]))
def test_normalized_every_iteration(n, k, seed, alpha):
    m = markov_model(random_network(np.random.default_rng(seed), n, zeros=0.2))
    bad = []

    def check(it, pi, P):
        if abs(pi.sum() - 1) > 1e-9 or (pi < 0).any() or (P < 0).any():
            bad.append(it)
        live = pi > 1e-6
        if live.any() and np.abs(P[live].sum(axis=1) - 1).max() > 1e-9:
            bad.append(it)

    dec = decompose(m, DecomposeConfig(k_max=k, alpha=alpha, seed=seed, max_iter=300), callback=check)
    assert bad == []
    assert abs(dec.pi.sum() - 1) <= 1e-9
    np.testing.assert_allclose(dec.p_given_k[dec.active()].sum(axis=1), 1.0, atol=1e-9)
    assert dec.mixture_residual < 1e-12


def test_seeded_runs_are_identical():
    m = markov_model(random_network(np.random.default_rng(5), 12))
    a = decompose(m, DecomposeConfig(seed=3, max_iter=200))
    b = decompose(m, DecomposeConfig(seed=3, max_iter=200))
    assert a.to_json() == b.to_json()


def test_initial_memberships():
    P = initial_memberships(6, 3, seed=1)
    assert P.shape == (3, 6)
    np.testing.assert_allclose(P.sum(axis=1), 1.0)
    np.testing.assert_array_equal(P, initial_memberships(6, 3, seed=1))


def test_best_of_seeds_has_smallest_residual(clique_model):
    cfg = DecomposeConfig(k_max=4)
    best = decompose_best(clique_model, cfg, range(4))
    each = [decompose(clique_model, DecomposeConfig(k_max=4, seed=s)).fit_residual for s in range(4)]
    assert best.fit_residual == min(each)
    with pytest.raises(ValueError):
        decompose_best(clique_model, cfg, [])


def test_every_component_collapsing_raises(clique_model):
    with pytest.raises(DecompositionError):
        decompose(clique_model, DecomposeConfig(k_max=3, sparsity=1e6))


def test_input_checks(clique_model):
    with pytest.raises(ValueError):
        decompose(transition_matrix(two_cliques()), DecomposeConfig())
    with pytest.raises(ValueError):
        decompose(clique_model, DecomposeConfig(k_max=2), init=np.ones((3, 6)))
    bad = MarkovModel(clique_model.t, np.array([0.5, 0.5, 0, 0, 0, 0]), 0.15)
    dec = Decomposition(np.array([1.0]), bad.p[None, :], bad.p, True, 1, 0.0)
    with pytest.raises(ValueError):
        posterior(dec)


@pytest.mark.parametrize("kwargs", [dict(k_max=0), dict(alpha=0), dict(alpha=-1), dict(prune_eps=0),
                                    dict(prune_eps=1), dict(sparsity=-1), dict(tol=0), dict(max_iter=0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DecomposeConfig(**kwargs)


def test_serialization_round_trip(clique_dec, clique_model):
    again = Decomposition.from_dict(json.loads(clique_dec.to_json()))
    assert again.to_json() == clique_dec.to_json()
    cn = omega(clique_dec, clique_model)
    back = CommunityNetwork.from_dict(cn.to_dict(list("abcdef")))
    np.testing.assert_array_equal(back.omega, cn.omega)
    assert back.top_nodes == cn.top_nodes
    assert cn.scaled()[0, 0] == pytest.approx(cn.omega[0, 0] * 10000)
