"""Rating-session files: parsing, quality filters and aggregation into networks.

CSV columns (UTF-8, header row)::

    participant, task, word_a, word_b, score, kind, catch_target, repeat_of, order

``kind`` is ``normal``, ``catch`` or ``repeat``.  Catch rows leave the words
empty and carry the requested value in ``catch_target``; repeat rows name the
``order`` of the earlier normal question they re-ask.  An empty ``score`` is a
missing response.  Optional ``age`` and ``sex`` columns are kept on the
session.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .graph import E_MAX, SemanticNetwork
from .lexicon import EmotionLexicon
from .stats import UndefinedCorrelation, pearson_r

COLUMNS = ("participant", "task", "word_a", "word_b", "score", "kind", "catch_target", "repeat_of", "order")
TASKS = ("similarity", "association")
KINDS = ("normal", "catch", "repeat")
SCORE_MIN, SCORE_MAX = 0, 7
N_CATCH = 2
N_REPEAT = 20


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ScoreRangeError(ParseError):
    pass


class VocabularyError(ParseError):
    def __init__(self, line: int, word: str):
        super().__init__(line, f"unknown word {word!r}")
        self.word = word


class ProtocolError(ValueError):
    """A session does not follow the catch/double-pass protocol."""


class MissingPairsError(ValueError):
    def __init__(self, pairs: list[tuple[int, int]]):
        super().__init__(f"{len(pairs)} ordered pairs have no responses")
        self.pairs = pairs


@dataclass(frozen=True)
class RatingRecord:
    participant: str
    task: str
    word_a: int | None
    word_b: int | None
    score: int | None
    kind: str = "normal"
    catch_target: int | None = None
    repeat_of: int | None = None
    order: int = 0


@dataclass(frozen=True)
class Session:
    participant: str
    task: str
    records: tuple[RatingRecord, ...]
    age: int | None = None
    sex: str | None = None

    def of_kind(self, kind: str) -> list[RatingRecord]:
        return [r for r in self.records if r.kind == kind]

    def defects(self) -> list[str]:
        """Reasons the session is incomplete; empty for a usable session."""
        out = []
        if any(r.score is None for r in self.records):
            out.append("missing response")
        normal = {r.order: r for r in self.records if r.kind == "normal"}
        if not normal:
            out.append("no questions answered")
        if len(self.of_kind("catch")) != N_CATCH:
            out.append(f"expected {N_CATCH} catch trials")
        repeats = self.of_kind("repeat")
        if len(repeats) != N_REPEAT:
            out.append(f"expected {N_REPEAT} repeat questions")
        for r in repeats:
            first = normal.get(r.repeat_of)
            if first is None or first.order >= r.order or (first.word_a, first.word_b) != (r.word_a, r.word_b):
                out.append(f"repeat at order {r.order} does not match an earlier question")
                break
        return out

    @property
    def complete(self) -> bool:
        return not self.defects()

    def double_pass_pairs(self) -> tuple[list[int], list[int]]:
        normal = {r.order: r for r in self.records if r.kind == "normal"}
        first, second = [], []
        for r in self.of_kind("repeat"):
            src = normal.get(r.repeat_of)
            if src is None:
                raise ProtocolError(f"{self.participant}: repeat at order {r.order} has no source question")
            first.append(src.score)
            second.append(r.score)
        return first, second


@dataclass
class FilterReport:
    input_sessions: int = 0
    removed_defective: int = 0
    removed_catch: int = 0
    removed_double_pass: int = 0
    retained: int = 0
    degenerate: list[str] = field(default_factory=list)

    def reconciles(self) -> bool:
        removed = self.removed_defective + self.removed_catch + self.removed_double_pass
        return self.input_sessions == removed + self.retained

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _opt_int(value: str, line: int, name: str) -> int | None:
    value = (value or "").strip()
    if not value:
        return None
    try:
        return int(value)
    except ValueError:
        raise ParseError(line, f"{name} is not an integer: {value!r}") from None


def _word(value: str, line: int, lexicon: EmotionLexicon) -> int | None:
    value = (value or "").strip()
    if not value:
        return None
    if value not in lexicon:
        raise VocabularyError(line, value)
    return lexicon.id_of(value)


def _read_rows(source) -> Iterable[tuple[int, dict]]:
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            yield from _read_rows(fh)
        return
    reader = csv.DictReader(source)
    missing = set(COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ParseError(1, f"missing columns {sorted(missing)}")
    for row in reader:
        yield reader.line_num, row


def parse_sessions(source: str | Path | TextIO, lexicon: EmotionLexicon) -> list[Session]:
    """Read a rating CSV into one Session per (participant, task).

    Sessions keep first-appearance order; records are sorted by ``order``.
    """
    grouped: dict[tuple[str, str], list[RatingRecord]] = {}
    meta: dict[tuple[str, str], tuple[int | None, str | None]] = {}
    for line, row in _read_rows(source):
        participant = (row["participant"] or "").strip()
        if not participant:
            raise ParseError(line, "empty participant id")
        task = (row["task"] or "").strip()
        if task not in TASKS:
            raise ParseError(line, f"unknown task {task!r}")
        kind = (row["kind"] or "").strip()
        if kind not in KINDS:
            raise ParseError(line, f"unknown kind {kind!r}")
        score = _opt_int(row["score"], line, "score")
        if score is not None and not SCORE_MIN <= score <= SCORE_MAX:
            raise ScoreRangeError(line, f"score {score} outside {SCORE_MIN}..{SCORE_MAX}")
        order = _opt_int(row["order"], line, "order")
        if order is None:
            raise ParseError(line, "missing order")
        a = _word(row["word_a"], line, lexicon)
        b = _word(row["word_b"], line, lexicon)
        target = _opt_int(row["catch_target"], line, "catch_target")
        repeat_of = _opt_int(row["repeat_of"], line, "repeat_of")
        if kind == "catch":
            if target is None or not SCORE_MIN <= target <= SCORE_MAX:
                raise ParseError(line, "catch row needs a catch_target in 0..7")
        else:
            if a is None or b is None:
                raise ParseError(line, f"{kind} row needs both words")
            if a == b:
                raise ParseError(line, "a word cannot be rated against itself")
            if kind == "repeat" and repeat_of is None:
                raise ParseError(line, "repeat row needs repeat_of")
        rec = RatingRecord(participant, task, a, b, score, kind, target, repeat_of, order)
        key = (participant, task)
        grouped.setdefault(key, []).append(rec)
        if key not in meta:
            meta[key] = (_opt_int(row.get("age", ""), line, "age"), (row.get("sex") or "").strip() or None)

    return [
        Session(pid, task, tuple(sorted(recs, key=lambda r: r.order)), *meta[(pid, task)])
        for (pid, task), recs in grouped.items()
    ]


def write_sessions(sessions: Sequence[Session], dest: str | Path | TextIO, lexicon: EmotionLexicon) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            write_sessions(sessions, fh, lexicon)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(COLUMNS)

    def cell(v):
        return "" if v is None else v

    for s in sessions:
        for r in s.records:
            writer.writerow([
                r.participant, r.task,
                "" if r.word_a is None else lexicon.words[r.word_a].english,
                "" if r.word_b is None else lexicon.words[r.word_b].english,
                cell(r.score), r.kind, cell(r.catch_target), cell(r.repeat_of), r.order,
            ])


def sessions_to_csv(sessions: Sequence[Session], lexicon: EmotionLexicon) -> str:
    buf = io.StringIO()
    write_sessions(sessions, buf, lexicon)
    return buf.getvalue()


def filter_defective(sessions: Iterable[Session]) -> tuple[list[Session], list[Session]]:
    retained, removed = [], []
    for s in sessions:
        (retained if s.complete else removed).append(s)
    return retained, removed


def passes_catch(session: Session) -> bool:
    catches = session.of_kind("catch")
    if len(catches) < N_CATCH:
        raise ProtocolError(f"{session.participant}: {len(catches)} catch trials, need {N_CATCH}")
    return all(r.score == r.catch_target for r in catches)


def filter_catch(sessions: Iterable[Session]) -> tuple[list[Session], list[Session]]:
    """Drop sessions that answered any catch trial with the wrong value."""
    retained, removed = [], []
    for s in sessions:
        (retained if passes_catch(s) else removed).append(s)
    return retained, removed


def double_pass_r(session: Session) -> float | None:
    """Correlation between first and second answers; None when undefined."""
    first, second = session.double_pass_pairs()
    if len(first) < N_REPEAT:
        raise ProtocolError(f"{session.participant}: {len(first)} repeat questions, need {N_REPEAT}")
    try:
        return pearson_r(first, second)
    except UndefinedCorrelation:
        return None


def filter_double_pass(sessions: Iterable[Session], threshold: float = 0.4) -> tuple[list[Session], list[Session]]:
    """Drop sessions whose two passes correlate below ``threshold``.

    Sessions with a constant pass have no correlation and are dropped too.
    """
    retained, removed = [], []
    for s in sessions:
        r = double_pass_r(s)
        (retained if r is not None and r >= threshold else removed).append(s)
    return retained, removed


def run_filters(sessions: Sequence[Session], threshold: float = 0.4) -> tuple[list[Session], FilterReport]:
    """Defective, catch and double-pass filtering in that order."""
    report = FilterReport(input_sessions=len(sessions))
    kept, dropped = filter_defective(sessions)
    report.removed_defective = len(dropped)
    kept, dropped = filter_catch(kept)
    report.removed_catch = len(dropped)
    kept, dropped = filter_double_pass(kept, threshold)
    report.removed_double_pass = len(dropped)
    report.degenerate = sorted(s.participant for s in dropped if double_pass_r(s) is None)
    report.retained = len(kept)
    return kept, report


def pair_totals(sessions: Iterable[Session], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer score totals and response counts per ordered pair (normal records only)."""
    totals = np.zeros((n, n), dtype=np.int64)
    counts = np.zeros((n, n), dtype=np.int64)
    for s in sessions:
        for r in s.records:
            if r.kind == "normal" and r.score is not None:
                totals[r.word_a, r.word_b] += r.score
                counts[r.word_a, r.word_b] += 1
    return totals, counts


def missing_pairs(counts: np.ndarray) -> list[tuple[int, int]]:
    n = counts.shape[0]
    return [(i, j) for i in range(n) for j in range(n) if i != j and counts[i, j] == 0]


def aggregate(
    sessions: Sequence[Session],
    lexicon: EmotionLexicon,
    impute: bool = False,
    e_max: float = E_MAX,
) -> SemanticNetwork:
    """Mean score per ordered word pair as a directed weighted network.

    Raises
    ------
    MissingPairsError
        When some ordered pair has no response and ``impute`` is False.
        With ``impute`` those pairs get the mean of all responses.
    """
    if not sessions:
        raise ValueError("no sessions to aggregate")
    tasks = {s.task for s in sessions}
    if len(tasks) > 1:
        raise ValueError(f"sessions mix tasks {sorted(tasks)}")
    n = len(lexicon)
    totals, counts = pair_totals(sessions, n)
    missing = missing_pairs(counts)
    if missing and not impute:
        raise MissingPairsError(missing)
    means = np.divide(totals, counts, out=np.zeros((n, n)), where=counts > 0)
    if missing:
        fill = totals.sum() / counts.sum()
        for i, j in missing:
            means[i, j] = fill
    np.fill_diagonal(means, 0.0)
    return SemanticNetwork(tuple(lexicon.labels), means, e_max)
