"""Semantic network, PageRank-style Markov chain and dissimilarities.

Transition matrices are column-stochastic: ``t[i, j]`` is the probability of
a step from node ``j`` to node ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

E_MAX = 7.0


class NetworkError(ValueError):
    """Invalid or incomplete network."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class SemanticNetwork:
    """Directed weighted graph; ``weights[i, j]`` is the edge from word i to word j."""

    words: tuple[str, ...]
    weights: np.ndarray
    e_max: float = E_MAX

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        n = len(self.words)
        if w.shape != (n, n):
            raise NetworkError(f"weights must be {n}x{n}, got {w.shape}")
        np.fill_diagonal(w, 0.0)
        off = w[~np.eye(n, dtype=bool)]
        if np.isnan(off).any():
            raise NetworkError("network has missing weights")
        if (off < 0).any():
            raise NetworkError("negative edge weight")
        if (off > self.e_max).any():
            raise NetworkError(f"edge weight above e_max={self.e_max}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "words", tuple(self.words))

    @property
    def n(self) -> int:
        return len(self.words)

    def index(self, word: str) -> int:
        return self.words.index(word)

    def to_dict(self) -> dict:
        return {"words": list(self.words), "e_max": self.e_max, "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "SemanticNetwork":
        return cls(tuple(data["words"]), np.asarray(data["weights"], dtype=float), float(data["e_max"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SemanticNetwork":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class MarkovModel:
    t: np.ndarray
    p: np.ndarray | None = None
    damping: float = 0.15

    @property
    def n(self) -> int:
        return self.t.shape[0]

    def link_matrix(self) -> np.ndarray:
        """Transition matrix with the teleport component removed."""
        if self.damping == 0:
            return self.t
        if self.damping >= 1:
            raise ValueError("a pure-teleport chain has no link structure")
        return (self.t - self.damping / self.n) / (1.0 - self.damping)

    def with_stationary(self, **kwargs) -> "MarkovModel":
        return MarkovModel(self.t, stationary(self, **kwargs), self.damping)


def transition_matrix(net: SemanticNetwork, damping: float = 0.15) -> MarkovModel:
    """Column-stochastic PageRank matrix with teleport probability ``damping``.

    Columns for nodes without outgoing weight are uniform.
    """
    if not 0 <= damping <= 1:
        raise ValueError("damping must lie in [0, 1]")
    w = np.array(net.weights, dtype=float)
    n = net.n
    out = w.sum(axis=1)
    t = np.full((n, n), 1.0 / n)
    live = out > 0
    t[:, live] = w[live, :].T / out[live]
    t = (1.0 - damping) * t + damping / n
    t /= t.sum(axis=0, keepdims=True)
    t.setflags(write=False)
    return MarkovModel(t, None, damping)


def stationary(model: MarkovModel, tol: float = 1e-12, max_iter: int = 10000) -> np.ndarray:
    """Power iteration ``p <- t p`` from the uniform distribution."""
    n = model.n
    p = np.full(n, 1.0 / n)
    change = np.inf
    for _ in range(max_iter):
        nxt = model.t @ p
        nxt /= nxt.sum()
        change = np.abs(nxt - p).sum()
        p = nxt
        if change < tol:
            p.setflags(write=False)
            return p
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps", change)


def markov_model(net: SemanticNetwork, damping: float = 0.15, tol: float = 1e-12) -> MarkovModel:
    return transition_matrix(net, damping).with_stationary(tol=tol)


def dissimilarity(net: SemanticNetwork) -> np.ndarray:
    """``e_max`` minus the symmetrised edge weight, zero on the diagonal."""
    w = net.weights
    d = net.e_max - 0.5 * (w + w.T)
    np.fill_diagonal(d, 0.0)
    return d
