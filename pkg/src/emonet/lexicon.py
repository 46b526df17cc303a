"""Emotion vocabulary, the petal structure of the wheel, and reference partitions.

The shipped vocabulary is Plutchik's 48 emotion words with their Japanese
romanizations. Petals are triples ``(strong, primary, weak)``; the eight
petals are stored in wheel order so that petal ``k`` faces petal ``k + 4``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

CATEGORIES = ("primary", "strong_derived", "weak_derived", "secondary")

# Display colours for the eight petals, in wheel order.
PETAL_COLORS = {
    "joy": "#f2c913",
    "trust": "#8cc63f",
    "fear": "#1d8a3c",
    "surprise": "#27a3c7",
    "sadness": "#2d5db8",
    "disgust": "#9250a8",
    "anger": "#e23b36",
    "anticipation": "#f5891f",
}
SECONDARY_COLOR = "#9e9e9e"


class LexiconError(ValueError):
    """Invalid vocabulary table or wheel definition."""


@dataclass(frozen=True)
class EmotionWord:
    id: int
    english: str
    romaji: str
    category: str


@dataclass(frozen=True)
class Wheel:
    """Petals as ``(strong, primary, weak)`` word-id triples plus the opposition map."""

    petals: tuple[tuple[int, int, int], ...]
    opposite: tuple[int, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.petals)
        if len(self.opposite) != n:
            raise LexiconError("opposite map must cover every petal")
        seen: set[int] = set()
        for petal in self.petals:
            if len(petal) != 3:
                raise LexiconError(f"petal {petal} is not a triple")
            if seen.intersection(petal) or len(set(petal)) != 3:
                raise LexiconError(f"word appears in more than one petal: {petal}")
            seen.update(petal)
        for k, o in enumerate(self.opposite):
            if not 0 <= o < n or o == k or self.opposite[o] != k:
                raise LexiconError("opposite must be a fixed-point-free involution")

    def __len__(self) -> int:
        return len(self.petals)

    def petal_of(self, word_id: int) -> int | None:
        for k, petal in enumerate(self.petals):
            if word_id in petal:
                return k
        return None

    @property
    def words(self) -> tuple[int, ...]:
        return tuple(w for petal in self.petals for w in petal)


@dataclass(frozen=True)
class Partition:
    """Community label per word id over a (possibly partial) domain."""

    labels: Mapping[int, int]

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.labels)

    def __getitem__(self, word_id: int) -> int:
        return self.labels[word_id]

    def __len__(self) -> int:
        return len(self.labels)

    def restrict(self, ids: Iterable[int]) -> "Partition":
        return Partition({i: self.labels[i] for i in ids if i in self.labels})

    def groups(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i in sorted(self.labels):
            out.setdefault(self.labels[i], []).append(i)
        return out

    @classmethod
    def from_sequence(cls, labels: Iterable[int]) -> "Partition":
        return cls({i: int(lab) for i, lab in enumerate(labels)})


@dataclass(frozen=True)
class EmotionLexicon:
    words: tuple[EmotionWord, ...]
    wheel: Wheel
    _index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ids = [w.id for w in self.words]
        if ids != list(range(len(ids))):
            raise LexiconError("word ids must be contiguous from 0")
        names = [w.english for w in self.words]
        if len(set(names)) != len(names):
            raise LexiconError("english labels must be unique")
        for w in self.words:
            if w.category not in CATEGORIES:
                raise LexiconError(f"unknown category {w.category!r} for {w.english}")
        for wid in self.wheel.words:
            if not 0 <= wid < len(self.words):
                raise LexiconError(f"petal references unknown word id {wid}")
        self._index.update({w.english: w.id for w in self.words})

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not in the vocabulary") from None

    def word(self, key: int | str) -> EmotionWord:
        if isinstance(key, str):
            key = self.id_of(key)
        return self.words[key]

    @property
    def labels(self) -> list[str]:
        return [w.english for w in self.words]

    def by_category(self, category: str) -> list[EmotionWord]:
        return [w for w in self.words if w.category == category]

    def petal_name(self, word_id: int) -> str | None:
        k = self.wheel.petal_of(word_id)
        return None if k is None else self.wheel.names[k]

    def color(self, word_id: int) -> str:
        name = self.petal_name(word_id)
        return PETAL_COLORS.get(name, SECONDARY_COLOR) if name else SECONDARY_COLOR


def _parse_table(text: str) -> EmotionLexicon:
    sample = text.splitlines()[0] if text else ""
    delimiter = "\t" if "\t" in sample else ","
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    required = {"id", "english", "romaji", "category", "petal"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise LexiconError(f"lexicon table needs columns {sorted(required)}")

    words = []
    petal_members: dict[str, dict[str, int]] = {}
    for line, row in enumerate(reader, start=2):
        try:
            wid = int(row["id"])
        except ValueError:
            raise LexiconError(f"line {line}: bad id {row['id']!r}") from None
        word = EmotionWord(wid, row["english"].strip(), row["romaji"].strip(), row["category"].strip())
        words.append(word)
        petal = (row["petal"] or "").strip()
        if petal:
            if word.category == "secondary":
                raise LexiconError(f"line {line}: secondary word {word.english} cannot sit in a petal")
            slot = petal_members.setdefault(petal, {})
            if word.category in slot:
                raise LexiconError(f"line {line}: petal {petal} already has a {word.category} word")
            slot[word.category] = wid
    words.sort(key=lambda w: w.id)

    # Petal order is first appearance; facing petals sit half a turn apart.
    names = tuple(petal_members)
    n = len(names)
    if n % 2:
        raise LexiconError("the wheel needs an even number of petals")
    petals = []
    for name in names:
        slot = petal_members[name]
        try:
            petals.append((slot["strong_derived"], slot["primary"], slot["weak_derived"]))
        except KeyError as exc:
            raise LexiconError(f"petal {name} lacks a {exc.args[0]} word") from None
    opposite = tuple((k + n // 2) % n for k in range(n))
    return EmotionLexicon(tuple(words), Wheel(tuple(petals), opposite, names))


def load_lexicon(path: str | Path) -> EmotionLexicon:
    """Read a vocabulary table (tab- or comma-delimited, UTF-8)."""
    return _parse_table(Path(path).read_text(encoding="utf-8"))


_BUILTIN: EmotionLexicon | None = None


def builtin_lexicon() -> EmotionLexicon:
    """The 48 Plutchik emotion words with romaji and petal structure."""
    global _BUILTIN
    if _BUILTIN is None:
        text = resources.files("emonet.data").joinpath("plutchik48.tsv").read_text(encoding="utf-8")
        _BUILTIN = _parse_table(text)
    return _BUILTIN


def wheel_partition(wheel: Wheel) -> Partition:
    """Each petal is one community; secondary words are not covered."""
    return Partition({w: k for k, petal in enumerate(wheel.petals) for w in petal})


def wheel_partition_all(lexicon: EmotionLexicon) -> Partition:
    """Petal labels plus a singleton label for every word outside the wheel."""
    labels = dict(wheel_partition(lexicon.wheel).labels)
    nxt = len(lexicon.wheel)
    for w in lexicon.words:
        if w.id not in labels:
            labels[w.id] = nxt
            nxt += 1
    return Partition(labels)


def petal_pair_sets(wheel: Wheel, k: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Ordered word pairs inside petal ``k`` and from petal ``k`` to its opposite.

    Returns
    -------
    within : list of (w1, w2)
        All ordered pairs of distinct words of petal ``k`` (6 for a triple).
    across : list of (w1, w2)
        All pairs with ``w1`` in petal ``k`` and ``w2`` in the facing petal (9).
    """
    if not 0 <= k < len(wheel):
        raise IndexError(f"petal index {k} out of range 0..{len(wheel) - 1}")
    petal = wheel.petals[k]
    facing = wheel.petals[wheel.opposite[k]]
    within = [(a, b) for a in petal for b in petal if a != b]
    across = [(a, b) for a in petal for b in facing]
    return within, across
