"""Dialogue data model and line-delimited JSON ingestion.

A corpus on disk is a stream of JSON objects, one utterance per line.  The
canonical layout is::

    {"dialogue_id": "d1", "dataset": "redial", "turn": 0,
     "role": "assistant", "text": "Hey!", "tag": "Greet"}

Other layouts are read through a :class:`MappingConfig` that names the
source keys and maps speaker labels onto the two roles.
"""

import enum
import io
import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .tagging import UtteranceTag


class Role(str, enum.Enum):
    ASSISTANT = "assistant"
    SEEKER = "seeker"

    @property
    def other(self) -> "Role":
        return Role.SEEKER if self is Role.ASSISTANT else Role.ASSISTANT

    @property
    def short(self) -> str:
        return "A" if self is Role.ASSISTANT else "S"


class IngestError(ValueError):
    """Raised for malformed or inconsistent input records."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Utterance:
    index: int
    role: Role
    text: str
    tag: Optional[UtteranceTag] = None


@dataclass(frozen=True)
class Dialogue:
    id: str
    utterances: Tuple[Utterance, ...]
    dataset: str = ""

    def __post_init__(self):
        if not self.utterances:
            raise ValueError(f"dialogue {self.id!r} has no utterances")
        for expected, utt in enumerate(self.utterances):
            if utt.index != expected:
                raise ValueError(
                    f"dialogue {self.id!r}: utterance index {utt.index} "
                    f"at position {expected}"
                )

    @property
    def n_utterances(self) -> int:
        return len(self.utterances)

    @property
    def roles(self) -> frozenset:
        return frozenset(u.role for u in self.utterances)

    @property
    def single_participant(self) -> bool:
        """True when only one of the two roles speaks in this dialogue."""
        return len(self.roles) < 2

    def swap_roles(self) -> "Dialogue":
        utts = tuple(
            Utterance(u.index, u.role.other, u.text, u.tag) for u in self.utterances
        )
        return Dialogue(self.id, utts, self.dataset)


@dataclass
class MappingConfig:
    """Where to find each field in a source record.

    ``role_aliases`` maps every raw speaker label to a :class:`Role`; a label
    missing from it aborts ingestion.  ``turn_field`` is only used to reject
    duplicate ``(dialogue, turn)`` pairs, utterance order always follows the
    order of lines in the stream.
    """

    role_field: str
    role_aliases: Dict[str, Role]
    text_field: str
    id_field: str
    tag_field: Optional[str] = None
    turn_field: Optional[str] = None
    dataset_field: Optional[str] = None
    dataset: str = ""

    def __post_init__(self):
        self.role_aliases = {str(k): Role(v) for k, v in self.role_aliases.items()}

    @classmethod
    def identity(cls) -> "MappingConfig":
        return cls(
            role_field="role",
            role_aliases={"assistant": Role.ASSISTANT, "seeker": Role.SEEKER},
            text_field="text",
            id_field="dialogue_id",
            tag_field="tag",
            turn_field="turn",
            dataset_field="dataset",
        )

    @classmethod
    def from_dict(cls, data: dict) -> "MappingConfig":
        known = {
            "role_field", "role_aliases", "text_field", "id_field",
            "tag_field", "turn_field", "dataset_field", "dataset",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown mapping keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "MappingConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "role_field": self.role_field,
            "role_aliases": {k: v.value for k, v in self.role_aliases.items()},
            "text_field": self.text_field,
            "id_field": self.id_field,
            "tag_field": self.tag_field,
            "turn_field": self.turn_field,
            "dataset_field": self.dataset_field,
            "dataset": self.dataset,
        }


Stream = Union[str, Iterable[str], io.TextIOBase]


def _lines(stream: Stream) -> Iterable[str]:
    if isinstance(stream, str):
        return stream.split("\n")
    return stream


def iter_records(stream: Stream) -> Iterable[Tuple[int, dict]]:
    """Yield ``(line_number, record)`` pairs, skipping blank lines."""
    for lineno, line in enumerate(_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"malformed JSON ({exc.msg})", lineno) from None
        if not isinstance(record, dict):
            raise IngestError("record is not a JSON object", lineno)
        yield lineno, record


def ingest(stream: Stream, config: MappingConfig) -> List[Dialogue]:
    """Group line-delimited records into dialogues.

    Dialogues come back in order of first appearance; utterances keep the
    order of their lines.  Records of different dialogues may interleave.
    """
    order: List[str] = []
    buckets: Dict[str, List[Tuple[Role, str, Optional[UtteranceTag]]]] = {}
    datasets: Dict[str, str] = {}
    seen_turns: Dict[Tuple[str, object], int] = {}

    for lineno, rec in iter_records(stream):
        for key in (config.id_field, config.role_field, config.text_field):
            if key not in rec:
                raise IngestError(f"missing field {key!r}", lineno)
        dialogue_id = str(rec[config.id_field])
        label = str(rec[config.role_field])
        try:
            role = config.role_aliases[label]
        except KeyError:
            raise IngestError(f"unknown speaker label {label!r}", lineno) from None
        text = rec[config.text_field]
        if text is None:
            text = ""
        if not isinstance(text, str):
            raise IngestError(f"field {config.text_field!r} is not a string", lineno)

        tag = None
        if config.tag_field and rec.get(config.tag_field) is not None:
            try:
                tag = UtteranceTag.parse(rec[config.tag_field])
            except ValueError as exc:
                raise IngestError(str(exc), lineno) from None

        if config.turn_field and config.turn_field in rec:
            key = (dialogue_id, rec[config.turn_field])
            if key in seen_turns:
                raise IngestError(
                    f"duplicate turn {key[1]!r} in dialogue {dialogue_id!r} "
                    f"(first seen on line {seen_turns[key]})",
                    lineno,
                )
            seen_turns[key] = lineno

        if dialogue_id not in buckets:
            order.append(dialogue_id)
            buckets[dialogue_id] = []
            if config.dataset_field and config.dataset_field in rec:
                datasets[dialogue_id] = str(rec[config.dataset_field])
            else:
                datasets[dialogue_id] = config.dataset
        buckets[dialogue_id].append((role, text, tag))

    return [
        Dialogue(
            id=did,
            utterances=tuple(
                Utterance(i, role, text, tag)
                for i, (role, text, tag) in enumerate(buckets[did])
            ),
            dataset=datasets[did],
        )
        for did in order
    ]


def emit_canonical(dialogues: Iterable[Dialogue]) -> List[str]:
    """Serialise dialogues to canonical JSON lines (no trailing newlines)."""
    lines = []
    for d in dialogues:
        for u in d.utterances:
            rec = {
                "dialogue_id": d.id,
                "dataset": d.dataset,
                "turn": u.index,
                "role": u.role.value,
                "text": u.text,
            }
            if u.tag is not None:
                rec["tag"] = u.tag.value
            lines.append(json.dumps(rec, ensure_ascii=False))
    return lines


def read_corpus(path, config: Optional[MappingConfig] = None) -> List[Dialogue]:
    with open(path, encoding="utf-8") as fh:
        return ingest(fh, config or MappingConfig.identity())


def write_corpus(dialogues: Iterable[Dialogue], fh) -> None:
    for line in emit_canonical(dialogues):
        fh.write(line + "\n")


def corpus_counts(dialogues: List[Dialogue]) -> dict:
    """Counts used to audit an ingestion run."""
    return {
        "n_dialogues": len(dialogues),
        "n_utterances": sum(d.n_utterances for d in dialogues),
        "n_single_participant": sum(d.single_participant for d in dialogues),
    }
