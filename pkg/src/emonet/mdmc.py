"""Modular decomposition of a Markov chain into soft communities.

A decomposition writes the stationary distribution as a mixture

    p(i) = sum_k pi(k) p(i|k)

whose components are places where the random walk lingers.  Components are
fitted by EM to the one-step flow of the walk, ``F[i, j] = link[i, j] p(j)``,
with the walker assumed to stay in its community for the step:

    F[i, j] ~ sum_k pi(k) p(i|k) p(j|k)

``link`` is the transition matrix without its teleport part, so uniform
teleport flow is not mistaken for community structure.

The resolution parameter ``alpha`` enters the M-step through a Dirichlet
term whose mean is the one-step evolution ``q(.|k) = T p(.|k)`` of each
component::

    p'(i|k)  ~  max(n(k, i) + s * p(i) * (alpha * N * q(i|k) - 1), 0)

where ``n`` are the expected flow counts and ``s`` is the ``sparsity``
strength.  For a flat ``q`` this is the familiar ``(alpha - 1)`` MAP term.
Small ``alpha`` prunes weakly held nodes, so communities stay small and
numerous.  Large ``alpha`` pulls each component toward its own diffusion,
so communities spread, coincide and are merged.  Components whose support
is pruned away die, which leaves the *active* communities.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph import MarkovModel
from .lexicon import Partition


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class DecomposeConfig:
    k_max: int = 10
    alpha: float = 0.001
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 5000
    prune_eps: float = 1e-6
    sparsity: float = 0.02
    merge_tol: float = 1e-6

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not 0 < self.prune_eps < 1:
            raise ValueError("prune_eps must lie in (0, 1)")
        if self.sparsity < 0:
            raise ValueError("sparsity must be non-negative")
        if self.merge_tol < 0:
            raise ValueError("merge_tol must be non-negative")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter at least 1")


@dataclass(frozen=True)
class Decomposition:
    pi: np.ndarray
    p_given_k: np.ndarray
    stationary: np.ndarray
    converged: bool
    iterations: int
    fit_residual: float
    config: DecomposeConfig = field(default_factory=DecomposeConfig)

    @property
    def k(self) -> int:
        return len(self.pi)

    @property
    def n(self) -> int:
        return len(self.stationary)

    @property
    def mixture(self) -> np.ndarray:
        return self.pi @ self.p_given_k

    @property
    def mixture_residual(self) -> float:
        return float(np.abs(self.stationary - self.mixture).max())

    def active(self, prune_eps: float | None = None) -> np.ndarray:
        eps = self.config.prune_eps if prune_eps is None else prune_eps
        return np.flatnonzero(self.pi > eps)

    def to_dict(self) -> dict:
        return {
            "pi": self.pi.tolist(),
            "p_given_k": self.p_given_k.tolist(),
            "stationary": self.stationary.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "fit_residual": self.fit_residual,
            "config": asdict(self.config),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Decomposition":
        return cls(
            np.asarray(data["pi"], dtype=float),
            np.asarray(data["p_given_k"], dtype=float),
            np.asarray(data["stationary"], dtype=float),
            bool(data["converged"]),
            int(data["iterations"]),
            float(data["fit_residual"]),
            DecomposeConfig(**data["config"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class CommunityNetwork:
    """Inter-community strengths over the active communities.

    ``omega[a, b]`` is the strength of the connection from community
    ``communities[b]`` to community ``communities[a]``.
    """

    omega: np.ndarray
    communities: tuple[int, ...]
    top_nodes: tuple[tuple[int, ...], ...]

    def scaled(self, factor: float = 10000.0) -> np.ndarray:
        return self.omega * factor

    def to_dict(self, words: Sequence[str] | None = None) -> dict:
        out = {
            "omega": self.omega.tolist(),
            "communities": list(self.communities),
            "top_nodes": [list(t) for t in self.top_nodes],
        }
        if words is not None:
            out["labels"] = [[words[i] for i in t] for t in self.top_nodes]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CommunityNetwork":
        return cls(
            np.asarray(data["omega"], dtype=float),
            tuple(data["communities"]),
            tuple(tuple(t) for t in data["top_nodes"]),
        )


def initial_memberships(n: int, k: int, seed: int) -> np.ndarray:
    """Seeded symmetric-Dirichlet draw of ``p(i|k)``, shape (k, n)."""
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(n), size=k)


def _merge_duplicates(pi: np.ndarray, P: np.ndarray, tol: float) -> None:
    alive = np.flatnonzero(pi > 0)
    if len(alive) < 2:
        return
    tv = 0.5 * np.abs(P[alive, None, :] - P[None, alive, :]).sum(axis=2)
    for a_pos, a in enumerate(alive):
        if pi[a] == 0:
            continue
        for b_pos in range(a_pos + 1, len(alive)):
            b = alive[b_pos]
            if pi[b] > 0 and tv[a_pos, b_pos] < tol:
                pi[a] += pi[b]
                pi[b] = 0.0
                P[b] = 0.0


def _calibrate(pi: np.ndarray, P: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Rescale the joint pi(k)p(i|k) node by node so the mixture equals p
    # while keeping every posterior p(k|i) unchanged.
    joint = pi[:, None] * P
    mix = joint.sum(axis=0)
    gamma = np.divide(joint, mix, out=np.zeros_like(joint), where=mix > 0)
    joint = gamma * p
    new_pi = joint.sum(axis=1)
    new_P = np.divide(joint, new_pi[:, None], out=np.zeros_like(joint), where=new_pi[:, None] > 0)
    return new_pi, new_P


def decompose(model: MarkovModel, cfg: DecomposeConfig = DecomposeConfig(), init: np.ndarray | None = None,
              callback: Callable[[int, np.ndarray, np.ndarray], None] | None = None) -> Decomposition:
    """Fit ``cfg.k_max`` soft communities to the chain ``model``.

    Parameters
    ----------
    model : MarkovModel
        Chain with its stationary distribution already computed.
    cfg : DecomposeConfig
        Community count, resolution ``alpha``, seed and stopping rule.
    init : ndarray, optional
        Initial ``p(i|k)`` of shape (k_max, n).  Defaults to
        ``initial_memberships(n, k_max, cfg.seed)``.
    callback : callable, optional
        Called as ``callback(iteration, pi, p_given_k)`` after every update,
        before calibration.  Useful for monitoring; must not mutate its
        arguments.

    Returns
    -------
    Decomposition
        ``converged`` is False when ``cfg.max_iter`` was reached first.

    Raises
    ------
    DecompositionError
        If every community collapses.
    """
    if model.p is None:
        raise ValueError("model has no stationary distribution")
    p = np.asarray(model.p, dtype=float)
    t = np.asarray(model.t, dtype=float)
    n, K = len(p), cfg.k_max
    flow = model.link_matrix() * p[None, :]

    P = initial_memberships(n, K, cfg.seed) if init is None else np.array(init, dtype=float)
    if P.shape != (K, n):
        raise ValueError(f"init must have shape {(K, n)}")
    P /= P.sum(axis=1, keepdims=True)
    pi = np.full(K, 1.0 / K)

    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        joint = pi[:, None] * P
        model_flow = P.T @ joint
        ratio = np.divide(flow, model_flow, out=np.zeros_like(flow), where=model_flow > 0)
        # expected counts with node i as destination and as source
        as_dest = joint * (P @ ratio.T)
        as_src = joint * (P @ ratio)
        counts = 0.5 * (as_dest + as_src)
        new_pi = as_dest.sum(axis=1)
        new_pi[pi <= 0] = 0.0

        evolved = P @ t.T
        prior = cfg.sparsity * p[None, :] * (cfg.alpha * n * evolved - 1.0)
        new_P = np.maximum(counts + prior, 0.0)
        new_P[new_pi <= 0] = 0.0
        mass = new_P.sum(axis=1)
        dead = mass <= 0
        new_pi[dead] = 0.0
        new_P[~dead] /= mass[~dead, None]
        new_P[dead] = 0.0
        total = new_pi.sum()
        if total <= 0:
            raise DecompositionError("every community collapsed: resolution too aggressive")
        new_pi /= total
        _merge_duplicates(new_pi, new_P, cfg.merge_tol)

        change = max(np.abs(new_pi - pi).max(), np.abs(new_P - P).max())
        pi, P = new_pi, new_P
        if callback is not None:
            callback(it, pi, P)
        if change < cfg.tol:
            converged = True
            break

    fit_residual = float(np.abs(p - pi @ P).max())
    pi, P = _calibrate(pi, P, p)
    return Decomposition(pi, P, p.copy(), converged, it, fit_residual, cfg)


def decompose_best(model: MarkovModel, cfg: DecomposeConfig, seeds: Sequence[int]) -> Decomposition:
    """Run one decomposition per seed and keep the smallest fit residual.

    Ties go to the earlier seed.
    """
    best = None
    for s in seeds:
        dec = decompose(model, _with(cfg, seed=int(s)))
        if best is None or dec.fit_residual < best.fit_residual:
            best = dec
    if best is None:
        raise ValueError("no seeds given")
    return best


def _with(cfg: DecomposeConfig, **changes) -> DecomposeConfig:
    return DecomposeConfig(**{**asdict(cfg), **changes})


def posterior(dec: Decomposition) -> np.ndarray:
    """``p(k|i) = p(i|k) pi(k) / p(i)``, shape (K, N)."""
    if (dec.stationary <= 0).any():
        raise ValueError("posterior undefined where the stationary probability is zero")
    return dec.pi[:, None] * dec.p_given_k / dec.stationary[None, :]


def hard_assign(dec: Decomposition) -> Partition:
    """Label each node by ``argmax_k p(k|i)``; ties go to the smaller k."""
    return Partition.from_sequence(np.argmax(posterior(dec), axis=0))


def active_count(dec: Decomposition, prune_eps: float | None = None) -> int:
    return len(dec.active(prune_eps))


def omega(dec: Decomposition, model: MarkovModel, top: int = 2) -> CommunityNetwork:
    """Flow strength between active communities through the transition matrix."""
    if model.n != dec.n:
        raise ValueError("decomposition and model cover different node sets")
    act = dec.active()
    weighted = dec.pi[act, None] * dec.p_given_k[act]
    om = weighted @ np.asarray(model.t) @ weighted.T
    tops = tuple(
        tuple(int(i) for i in np.argsort(-dec.p_given_k[k], kind="stable")[:top]) for k in act
    )
    return CommunityNetwork(om, tuple(int(k) for k in act), tops)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    seed: int
    active_count: int
    labels: tuple[int, ...]
    converged: bool
    fit_residual: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "seed": self.seed,
            "active_count": self.active_count,
            "labels": list(self.labels),
            "converged": self.converged,
            "fit_residual": self.fit_residual,
        }


def alpha_sweep(
    model: MarkovModel,
    k_max: int,
    alphas: Sequence[float],
    seeds: Sequence[int],
    base: DecomposeConfig = DecomposeConfig(),
) -> list[SweepRow]:
    """One decomposition per (alpha, seed), in input order."""
    if len(alphas) == 0:
        raise ValueError("alphas must not be empty")
    rows = []
    for a in alphas:
        for s in seeds:
            dec = decompose(model, _with(base, k_max=k_max, alpha=float(a), seed=int(s)))
            part = hard_assign(dec)
            rows.append(
                SweepRow(float(a), int(s), active_count(dec), tuple(part[i] for i in range(dec.n)),
                         dec.converged, dec.fit_residual)
            )
    return rows
