"""Locality, globality and normalized mutual information between partitions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import SemanticNetwork
from .lexicon import EmotionLexicon, Partition, Wheel, petal_pair_sets, wheel_partition, wheel_partition_all


@dataclass(frozen=True)
class LocalityReport:
    per_petal_locality: tuple[float, ...]
    per_petal_globality: tuple[float, ...]
    locality: float
    globality: float
    e_max: float

    def to_dict(self) -> dict:
        return {
            "per_petal_locality": list(self.per_petal_locality),
            "per_petal_globality": list(self.per_petal_globality),
            "locality": self.locality,
            "globality": self.globality,
            "e_max": self.e_max,
        }


def _node_index(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None) -> dict[int, int]:
    # Map lexicon word ids to network rows.  Without a word list the network
    # rows are assumed to be the lexicon ids themselves.
    if words is None:
        idx = {w: w for w in wheel.words}
    else:
        pos = {name: i for i, name in enumerate(net.words)}
        idx = {}
        for w in wheel.words:
            if words[w] not in pos:
                raise KeyError(f"petal word {words[w]!r} missing from the network")
            idx[w] = pos[words[w]]
    for w, i in idx.items():
        if not 0 <= i < net.n:
            raise KeyError(f"petal word id {w} missing from the network")
    return idx


def pair_scores(net: SemanticNetwork, pairs, idx: dict[int, int]) -> np.ndarray:
    """``(L[a, b] + L[b, a]) / (2 e_max)`` for each word pair."""
    w = net.weights
    return np.array([(w[idx[a], idx[b]] + w[idx[b], idx[a]]) / (2.0 * net.e_max) for a, b in pairs])


def within_pair_scores(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None = None) -> np.ndarray:
    """Normalized symmetrized weight of every ordered within-petal pair, petal by petal."""
    idx = _node_index(net, wheel, words)
    return np.concatenate([pair_scores(net, petal_pair_sets(wheel, k)[0], idx) for k in range(len(wheel))])


def across_pair_scores(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None = None) -> np.ndarray:
    """Same for every pair between a petal and the petal facing it."""
    idx = _node_index(net, wheel, words)
    return np.concatenate([pair_scores(net, petal_pair_sets(wheel, k)[1], idx) for k in range(len(wheel))])


def locality_report(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None = None) -> LocalityReport:
    idx = _node_index(net, wheel, words)
    w = net.weights

    def mean_score(pairs):
        # one exact sum and one division, so constant weights give exact ratios
        total = math.fsum(float(w[idx[a], idx[b]]) + float(w[idx[b], idx[a]]) for a, b in pairs)
        return total / (2.0 * net.e_max * len(pairs))

    loc, glob = [], []
    for k in range(len(wheel)):
        within, across = petal_pair_sets(wheel, k)
        loc.append(mean_score(within))
        glob.append(mean_score(across))
    return LocalityReport(tuple(loc), tuple(glob), math.fsum(loc) / len(loc), math.fsum(glob) / len(glob), net.e_max)


def locality(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None = None) -> float:
    """Mean over petals of the normalized within-petal edge strength."""
    return locality_report(net, wheel, words).locality


def globality(net: SemanticNetwork, wheel: Wheel, words: tuple[str, ...] | None = None) -> float:
    """Mean over petals of the normalized strength toward the facing petal."""
    return locality_report(net, wheel, words).globality


def _entropy(counts) -> float:
    total = sum(counts)
    return -math.fsum(c / total * math.log(c / total) for c in counts if c)


def nmi(a: Partition, b: Partition, method: str = "arithmetic") -> float:
    """Normalized mutual information over the common domain of two partitions.

    ``method`` selects the normalizer: ``"arithmetic"`` divides by the mean of
    the two entropies, ``"max"`` by the larger one.  Two single-cluster
    partitions score 1; a single cluster against anything else scores 0.
    """
    common = sorted(a.domain & b.domain)
    if not common:
        raise ValueError("partitions share no items")
    n = len(common)
    la = [a[i] for i in common]
    lb = [b[i] for i in common]
    ha = _entropy(Counter(la).values())
    hb = _entropy(Counter(lb).values())
    if ha == 0 and hb == 0:
        return 1.0
    if ha == 0 or hb == 0:
        return 0.0
    joint = Counter(zip(la, lb))
    ca, cb = Counter(la), Counter(lb)
    mi = math.fsum(c / n * math.log(c * n / (ca[x] * cb[y])) for (x, y), c in joint.items())
    if method == "arithmetic":
        denom = 0.5 * (ha + hb)
    elif method == "max":
        denom = max(ha, hb)
    else:
        raise ValueError(f"unknown normalization {method!r}")
    return min(1.0, max(0.0, mi / denom))


def wheel_nmi(detected: Partition, lexicon: EmotionLexicon, domain: str = "petal24", method: str = "arithmetic") -> float:
    """NMI between a detected partition of the lexicon and the wheel.

    ``domain="petal24"`` scores only the 24 petal words; ``"all48"`` also
    scores the other words, each as its own singleton petal.
    """
    if domain == "petal24":
        ref = wheel_partition(lexicon.wheel)
    elif domain == "all48":
        ref = wheel_partition_all(lexicon)
    else:
        raise ValueError(f"unknown NMI domain {domain!r}")
    return nmi(detected, ref, method)
