"""Per-dialogue ConversationShape: Question, Information, Repetition, Flow."""

import csv
import io
import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .lexical import TokenEvent, TokenizerConfig, token_events
from .tagging import QuestionPolicy, is_question
from .transcript import Dialogue, Role

A, S = Role.ASSISTANT, Role.SEEKER


def delta(value_a: float, value_s: float) -> float:
    """Signed asymmetry ``(a - s) / (a + s)``; positive means assistant-dominant.

    Both inputs zero gives 0.
    """
    if value_a < 0 or value_s < 0:
        raise ValueError("delta is defined for non-negative rates only")
    total = value_a + value_s
    if total == 0:
        return 0.0
    return (value_a - value_s) / total


def question_counts(dialogue: Dialogue, policy: QuestionPolicy = QuestionPolicy()) -> Tuple[int, int]:
    counts = {A: 0, S: 0}
    for utt in dialogue.utterances:
        if is_question(utt, policy):
            counts[utt.role] += 1
    return counts[A], counts[S]


def _topic_events(events: Iterable[TokenEvent]):
    # anaphora are scored per occurrence on their own, never as topic tokens
    return [e for e in events if e.dialogue_freq > 1 and not e.is_anaphor]


def information_counts(events: Iterable[TokenEvent]) -> Tuple[int, int]:
    """Distinct frequent tokens coined by each role."""
    coined = {A: set(), S: set()}
    for e in _topic_events(events):
        coined[e.introducer].add(e.token)
    return len(coined[A]), len(coined[S])


def repetition_counts(events: Iterable[TokenEvent]) -> Tuple[int, int]:
    """Cross-role reuse (distinct tokens) plus anaphora (every occurrence)."""
    events = list(events)
    reused = {A: set(), S: set()}
    for e in _topic_events(events):
        if e.is_repetition_across_roles:
            reused[e.occurrence_role].add(e.token)
    anaphora = {A: 0, S: 0}
    for e in events:
        if e.is_anaphor:
            anaphora[e.occurrence_role] += 1
    return len(reused[A]) + anaphora[A], len(reused[S]) + anaphora[S]


@dataclass(frozen=True)
class RoleMetrics:
    question: float
    information: float
    repetition: float

    @property
    def flow(self) -> float:
        return self.repetition - self.information


@dataclass(frozen=True)
class ShapeVector:
    dialogue_id: str
    dataset: str
    n_utterances: int
    assistant: RoleMetrics
    seeker: RoleMetrics
    degenerate: bool = False

    @property
    def avg_question(self) -> float:
        return (self.assistant.question + self.seeker.question) / 2

    @property
    def delta_question(self) -> float:
        return delta(self.assistant.question, self.seeker.question)

    @property
    def avg_information(self) -> float:
        return (self.assistant.information + self.seeker.information) / 2

    @property
    def delta_information(self) -> float:
        return delta(self.assistant.information, self.seeker.information)

    @property
    def avg_repetition(self) -> float:
        return (self.assistant.repetition + self.seeker.repetition) / 2

    @property
    def delta_repetition(self) -> float:
        return delta(self.assistant.repetition, self.seeker.repetition)

    @property
    def flow_a(self) -> float:
        return self.assistant.flow

    @property
    def flow_s(self) -> float:
        return self.seeker.flow

    def swapped(self) -> "ShapeVector":
        return ShapeVector(
            self.dialogue_id, self.dataset, self.n_utterances,
            self.seeker, self.assistant, self.degenerate,
        )

    def get(self, name: str) -> float:
        """Look up a summary field by its export column name."""
        try:
            return _FIELD_GETTERS[name](self)
        except KeyError:
            raise KeyError(f"unknown shape field {name!r}") from None

    def to_row(self) -> Dict[str, object]:
        row: Dict[str, object] = {
            "dialogue_id": self.dialogue_id,
            "dataset": self.dataset,
            "n_utterances": self.n_utterances,
        }
        for name in ROW_FIELDS:
            row[name] = self.get(name)
        return row

    @classmethod
    def from_row(cls, row: Dict[str, object]) -> "ShapeVector":
        a = RoleMetrics(float(row["q_A"]), float(row["i_A"]), float(row["r_A"]))
        s = RoleMetrics(float(row["q_S"]), float(row["i_S"]), float(row["r_S"]))
        degenerate = str(row.get("degenerate", "false")).lower() in ("1", "true")
        return cls(str(row["dialogue_id"]), str(row["dataset"]),
                   int(row["n_utterances"]), a, s, degenerate)


_FIELD_GETTERS = {
    "q_A": lambda v: v.assistant.question,
    "q_S": lambda v: v.seeker.question,
    "avg_q": lambda v: v.avg_question,
    "delta_q": lambda v: v.delta_question,
    "i_A": lambda v: v.assistant.information,
    "i_S": lambda v: v.seeker.information,
    "avg_i": lambda v: v.avg_information,
    "delta_i": lambda v: v.delta_information,
    "r_A": lambda v: v.assistant.repetition,
    "r_S": lambda v: v.seeker.repetition,
    "avg_r": lambda v: v.avg_repetition,
    "delta_r": lambda v: v.delta_repetition,
    "flow_A": lambda v: v.flow_a,
    "flow_S": lambda v: v.flow_s,
}
ROW_FIELDS: Tuple[str, ...] = tuple(_FIELD_GETTERS)
SUMMARY_FIELDS: Tuple[str, ...] = (
    "avg_q", "delta_q", "avg_i", "delta_i", "avg_r", "delta_r", "flow_A", "flow_S",
)
COLUMNS: Tuple[str, ...] = ("dialogue_id", "dataset", "n_utterances") + ROW_FIELDS + ("degenerate",)


def shape(
    dialogue: Dialogue,
    tokenizer: Optional[TokenizerConfig] = None,
    policy: QuestionPolicy = QuestionPolicy(),
) -> ShapeVector:
    """Compute the normalised per-role metrics of one dialogue.

    All counts are divided by the total number of utterances in the
    dialogue (both roles together).
    """
    n = dialogue.n_utterances
    events = token_events(dialogue, tokenizer)
    q_a, q_s = question_counts(dialogue, policy)
    i_a, i_s = information_counts(events)
    r_a, r_s = repetition_counts(events)
    return ShapeVector(
        dialogue_id=dialogue.id,
        dataset=dialogue.dataset,
        n_utterances=n,
        assistant=RoleMetrics(q_a / n, i_a / n, r_a / n),
        seeker=RoleMetrics(q_s / n, i_s / n, r_s / n),
        degenerate=dialogue.single_participant,
    )


def shapes(dialogues: Iterable[Dialogue], tokenizer=None, policy=QuestionPolicy()) -> List[ShapeVector]:
    return [shape(d, tokenizer, policy) for d in dialogues]


def _row_out(v: ShapeVector) -> Dict[str, object]:
    row = v.to_row()
    row["degenerate"] = v.degenerate
    return row


def write_shapes_csv(vectors: Iterable[ShapeVector], fh, header_comment: Optional[str] = None) -> None:
    if header_comment:
        fh.write(f"# {header_comment}\n")
    writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for v in vectors:
        row = _row_out(v)
        row["degenerate"] = "true" if v.degenerate else "false"
        writer.writerow({k: repr(x) if isinstance(x, float) else x for k, x in row.items()})


def write_shapes_jsonl(vectors: Iterable[ShapeVector], fh, extra: Optional[dict] = None) -> None:
    for v in vectors:
        row = _row_out(v)
        if extra:
            row.update(extra)
        fh.write(json.dumps(row) + "\n")


def read_shapes(fh) -> List[ShapeVector]:
    """Read shapes written by either writer; format is sniffed from content."""
    text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        return []
    if lines[0].lstrip().startswith("{"):
        return [ShapeVector.from_row(json.loads(ln)) for ln in lines]
    return [ShapeVector.from_row(row) for row in csv.DictReader(io.StringIO("\n".join(lines)))]
