"""Synthetic rating data with a planted petal structure.

Every participant rates one block of ordered word pairs.  Catch trials and
the 20 re-asked questions follow the collection protocol, so generated
sessions pass straight through ``ingest``.  Scores follow a
round-and-clamp Gaussian response model around a per-pair base level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import E_MAX, SemanticNetwork
from .ingest import N_CATCH, N_REPEAT, RatingRecord, Session
from .lexicon import EmotionLexicon, Partition, builtin_lexicon, wheel_partition

SCORE_MAX = 7


@dataclass(frozen=True)
class PlantedModel:
    base_within: float = 6.0
    base_opposite: float = 1.0
    base_other: float = 2.5
    noise_sd: float = 1.0
    careless_rate: float = 0.0
    seed: int = 0
    block_size: int = 94
    pair_sd: float = 0.0
    lexicon: EmotionLexicon = field(default_factory=builtin_lexicon)

    def __post_init__(self):
        for name in ("base_within", "base_opposite", "base_other"):
            v = getattr(self, name)
            if not 0 <= v <= E_MAX:
                raise ValueError(f"{name} must lie in [0, {E_MAX}]")
        if not 0 <= self.careless_rate <= 1:
            raise ValueError("careless_rate must lie in [0, 1]")
        if self.noise_sd < 0 or self.pair_sd < 0:
            raise ValueError("noise_sd and pair_sd must be non-negative")
        if self.block_size < N_REPEAT:
            raise ValueError(f"block_size must be at least {N_REPEAT}")

    @property
    def wheel(self):
        return self.lexicon.wheel


def base_matrix(model: PlantedModel) -> np.ndarray:
    """Expected score for every ordered pair under the planted structure.

    With ``pair_sd > 0`` each pair gets a fixed Gaussian offset, drawn from a
    stream separate from the participants', and the level is clipped to
    ``[0, E_MAX]``.
    """
    n = len(model.lexicon)
    wheel = model.wheel
    petal = np.array([-1 if (k := wheel.petal_of(i)) is None else k for i in range(n)])
    base = np.full((n, n), model.base_other, dtype=float)
    in_wheel = petal >= 0
    both = in_wheel[:, None] & in_wheel[None, :]
    same = both & (petal[:, None] == petal[None, :])
    facing = both & (np.array(wheel.opposite)[np.maximum(petal, 0)][:, None] == petal[None, :])
    base[same] = model.base_within
    base[facing] = model.base_opposite
    if model.pair_sd > 0:
        rng = np.random.default_rng([model.seed, 1])
        base = np.clip(base + rng.normal(0.0, model.pair_sd, size=base.shape), 0.0, E_MAX)
    np.fill_diagonal(base, 0.0)
    return base


def ordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(n) if a != b]


def pair_blocks(n: int, block_size: int) -> list[list[tuple[int, int]]]:
    pairs = ordered_pairs(n)
    return [pairs[i:i + block_size] for i in range(0, len(pairs), block_size)]


def _score(rng: np.random.Generator, base: float, sd: float) -> int:
    return int(np.clip(np.rint(base + rng.normal(0.0, sd)), 0, SCORE_MAX)) if sd > 0 else int(np.clip(np.rint(base), 0, SCORE_MAX))


def _participant(model: PlantedModel, base: np.ndarray, block, pid: str, task: str,
                 rng: np.random.Generator) -> Session:
    careless = rng.random() < model.careless_rate

    def answer(a, b):
        if careless:
            return int(rng.integers(0, SCORE_MAX + 1))
        return _score(rng, base[a, b], model.noise_sd)

    pairs = [block[i] for i in rng.permutation(len(block))]
    questions = [("normal", a, b) for a, b in pairs]
    # catch trials go at random positions among the regular questions
    for _ in range(N_CATCH):
        questions.insert(int(rng.integers(0, len(questions) + 1)), ("catch", None, None))

    records: list[RatingRecord] = []
    normal_orders = []
    for order, (kind, a, b) in enumerate(questions):
        if kind == "catch":
            target = int(rng.integers(0, SCORE_MAX + 1))
            ignore = careless and rng.random() < 0.5
            score = int(rng.integers(0, SCORE_MAX + 1)) if ignore else target
            records.append(RatingRecord(pid, task, None, None, score, "catch", target, None, order))
        else:
            records.append(RatingRecord(pid, task, a, b, answer(a, b), "normal", None, None, order))
            normal_orders.append(order)

    nxt = len(records)
    for j, src in enumerate(rng.choice(normal_orders, size=N_REPEAT, replace=False)):
        first = records[int(src)]
        records.append(RatingRecord(pid, task, first.word_a, first.word_b, answer(first.word_a, first.word_b),
                                    "repeat", None, int(src), nxt + j))
    return Session(pid, task, tuple(records))


def generate(model: PlantedModel, participants: int, task: str = "similarity") -> list[Session]:
    """Simulate ``participants`` sessions; participant ``p`` answers block ``p mod B``.

    Each participant draws from its own stream derived from ``model.seed``.
    """
    if participants < 1:
        raise ValueError("need at least one participant")
    base = base_matrix(model)
    blocks = pair_blocks(len(model.lexicon), model.block_size)
    streams = np.random.SeedSequence(model.seed).spawn(participants)
    width = len(str(participants - 1))
    return [
        _participant(model, base, blocks[p % len(blocks)], f"{task[0]}{p:0{width}d}", task,
                     np.random.default_rng(streams[p]))
        for p in range(participants)
    ]


def planted_partition(model: PlantedModel) -> Partition:
    """The petal partition the generator plants (24 wheel words, 8 labels)."""
    return wheel_partition(model.wheel)


def planted_network(
    petals: int = 8,
    size: int = 3,
    within: float = 6.5,
    other_max: float = 1.0,
    noise_sd: float = 0.5,
    seed: int = 0,
    e_max: float = E_MAX,
) -> tuple[SemanticNetwork, Partition]:
    """Network-level benchmark: ``petals`` groups of ``size`` nodes.

    Within-group weights are ``within`` plus Gaussian noise (clipped to
    ``[0, e_max]``); every other weight is uniform on ``[0, other_max]``.
    """
    rng = np.random.default_rng(seed)
    n = petals * size
    labels = np.repeat(np.arange(petals), size)
    w = rng.uniform(0.0, other_max, size=(n, n))
    same = labels[:, None] == labels[None, :]
    w[same] = np.clip(within + rng.normal(0.0, noise_sd, size=int(same.sum())), 0.0, e_max)
    np.fill_diagonal(w, 0.0)
    words = tuple(f"g{g}n{i}" for g in range(petals) for i in range(size))
    return SemanticNetwork(words, w, e_max), Partition.from_sequence(labels)
