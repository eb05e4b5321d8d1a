"""Utterance types (NPS Chat taxonomy), a rule tagger and tag import."""

import dataclasses
import enum
import json
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List


class UtteranceTag(str, enum.Enum):
    STATEMENT = "Statement"
    EMOTION = "Emotion"
    GREET = "Greet"
    BYE = "Bye"
    ACCEPT = "Accept"
    REJECT = "Reject"
    WH_QUESTION = "whQuestion"
    YN_QUESTION = "ynQuestion"
    Y_ANSWER = "yAnswer"
    N_ANSWER = "nAnswer"
    EMPHASIS = "Emphasis"
    CONTINUER = "Continuer"
    CLARIFY = "Clarify"
    OTHER = "Other"

    @classmethod
    def parse(cls, name) -> "UtteranceTag":
        if isinstance(name, cls):
            return name
        name = str(name)
        for tag in cls:
            if tag.value == name or tag.value.lower() == name.lower():
                return tag
        raise ValueError(f"invalid utterance tag {name!r}")


@dataclass(frozen=True)
class QuestionPolicy:
    question_tags: FrozenSet[UtteranceTag] = frozenset(
        {UtteranceTag.WH_QUESTION, UtteranceTag.YN_QUESTION}
    )

    def __post_init__(self):
        tags = frozenset(UtteranceTag.parse(t) for t in self.question_tags)
        if not tags:
            raise ValueError("question policy needs at least one tag")
        object.__setattr__(self, "question_tags", tags)

    def to_list(self) -> List[str]:
        return sorted(t.value for t in self.question_tags)


WH_WORDS = frozenset(
    "what which who whom whose where when why how".split()
)
AUXILIARIES = frozenset(
    "do does did is are was were can could will would should have has had "
    "am may might must shall".split()
)
GREETINGS = frozenset("hi hello hey hiya howdy greetings yo".split())
GREETING_PHRASES = ("good morning", "good afternoon", "good evening")
FAREWELLS = frozenset("bye goodbye bye-bye farewell cya ciao".split())
FAREWELL_PHRASES = ("see you", "see ya", "good night", "talk to you later", "take care")

_WORD = re.compile(r"[a-z]+(?:[-'][a-z]+)*")
_CLAUSE_SPLIT = re.compile(r"[.!?;,:]+")
# "what's" -> ("what", "is")
_CLITIC_AUX = {"s": "is", "re": "are", "d": "did", "ve": "have", "ll": "will"}


def _words(clause: str) -> List[str]:
    out = []
    for w in _WORD.findall(clause.lower()):
        head, _, clitic = w.partition("'")
        out.append(head)
        if clitic in _CLITIC_AUX:
            out.append(_CLITIC_AUX[clitic])
    return out


def rule_tag(utterance_text: str) -> UtteranceTag:
    """Cheap deterministic tagger covering questions, greetings and farewells.

    Anything ending in "?" is a question.  An utterance opening with a
    wh-word is a ``whQuestion`` when it ends in "?" or the wh-word is
    directly followed by an auxiliary ("what's", "where is"); a wh-word
    followed by an auxiliary anywhere also counts.  A clause opening with an
    auxiliary gives ``ynQuestion``.  Everything else falls through to the
    greeting/farewell lexicons and finally ``Statement``.
    """
    text = utterance_text.strip()
    if not text:
        return UtteranceTag.STATEMENT

    ends_with_q = text.endswith("?")
    clauses = [_words(c) for c in _CLAUSE_SPLIT.split(text)]
    clauses = [c for c in clauses if c]
    if not clauses:
        return UtteranceTag.YN_QUESTION if ends_with_q else UtteranceTag.STATEMENT
    words = [w for c in clauses for w in c]

    for clause in clauses:
        if clause[0] in WH_WORDS and (
            ends_with_q or (len(clause) > 1 and clause[1] in AUXILIARIES)
        ):
            return UtteranceTag.WH_QUESTION
    for a, b in zip(words, words[1:]):
        if a in WH_WORDS and b in AUXILIARIES:
            return UtteranceTag.WH_QUESTION
    if ends_with_q or any(c[0] in AUXILIARIES for c in clauses):
        return UtteranceTag.YN_QUESTION

    lowered = " ".join(words)
    if words[0] in FAREWELLS or lowered.startswith(FAREWELL_PHRASES):
        return UtteranceTag.BYE
    if words[0] in GREETINGS or lowered.startswith(GREETING_PHRASES):
        return UtteranceTag.GREET
    return UtteranceTag.STATEMENT


def effective_tag(utterance) -> UtteranceTag:
    """Imported tag when present, otherwise the rule tagger's guess."""
    if utterance.tag is not None:
        return utterance.tag
    return rule_tag(utterance.text)


def is_question(utterance, policy: QuestionPolicy = QuestionPolicy()) -> bool:
    return effective_tag(utterance) in policy.question_tags


class TagImportError(ValueError):
    pass


def import_tags(dialogues, tag_stream: Iterable[str]):
    """Attach externally produced tags to a corpus.

    ``tag_stream`` holds JSON lines ``{"dialogue_id", "turn", "tag"}``.
    Returns new dialogues; the input corpus is not modified.
    """
    by_id = {d.id: d for d in dialogues}
    updates = {}
    if isinstance(tag_stream, str):
        tag_stream = tag_stream.split("\n")
    for lineno, line in enumerate(tag_stream, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            did, turn, name = str(rec["dialogue_id"]), rec["turn"], rec["tag"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise TagImportError(f"line {lineno}: malformed tag record ({exc})") from None
        if did not in by_id:
            raise TagImportError(f"line {lineno}: unknown dialogue {did!r}")
        if not isinstance(turn, int) or not 0 <= turn < by_id[did].n_utterances:
            raise TagImportError(f"line {lineno}: dialogue {did!r} has no turn {turn!r}")
        try:
            tag = UtteranceTag.parse(name)
        except ValueError as exc:
            raise TagImportError(f"line {lineno}: {exc}") from None
        updates.setdefault(did, {})[turn] = tag

    out = []
    for d in dialogues:
        if d.id not in updates:
            out.append(d)
            continue
        tags = updates[d.id]
        utts = tuple(
            dataclasses.replace(u, tag=tags[u.index]) if u.index in tags else u
            for u in d.utterances
        )
        out.append(dataclasses.replace(d, utterances=utts))
    return out
