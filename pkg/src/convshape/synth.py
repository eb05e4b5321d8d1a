"""Synthetic two-party corpora with controllable question, topic and follow-up rates.

Utterances alternate Assistant/Seeker.  Each utterance is built from
stopword filler plus, at random:

* a freshly coined topic word said twice (one unit of Information),
* the anaphor "it" and a re-use of a topic word the other side coined
  (Repetition).

Questions are placed by quota: exactly ``round(question_rate * slots)`` of
all utterance slots in the corpus become questions, so scaling
``question_rate`` scales the corpus question rate exactly.
"""

import json
from dataclasses import asdict, dataclass, replace
from typing import List

import numpy as np

from .transcript import Dialogue, Role, Utterance


@dataclass(frozen=True)
class GeneratorSpec:
    n_dialogues: int = 100
    n_utterances: int = 12
    question_rate: float = 0.1
    information_rate: float = 0.2
    repetition_rate: float = 0.2
    dataset: str = "synthetic"

    def __post_init__(self):
        if self.n_dialogues < 0 or self.n_utterances < 1:
            raise ValueError("need n_dialogues >= 0 and n_utterances >= 1")
        for name in ("question_rate", "information_rate", "repetition_rate"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")

    def scaled(self, question=1.0, information=1.0, repetition=1.0, dataset=None) -> "GeneratorSpec":
        return replace(
            self,
            question_rate=self.question_rate * question,
            information_rate=self.information_rate * information,
            repetition_rate=self.repetition_rate * repetition,
            dataset=dataset or self.dataset,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(**d)


def preset(name: str, base: GeneratorSpec = GeneratorSpec()) -> GeneratorSpec:
    """Named generators: reference, interviewer, talker, parrot."""
    if name == "reference":
        return replace(base, dataset=base.dataset if base.dataset != "synthetic" else "reference")
    if name == "interviewer":
        return base.scaled(question=3.0, dataset="interviewer")
    if name == "talker":
        return base.scaled(information=2.0, repetition=0.5, dataset="talker")
    if name == "parrot":
        return base.scaled(information=0.5, repetition=2.0, dataset="parrot")
    raise ValueError(f"unknown generator preset {name!r}")


PRESETS = ("reference", "interviewer", "talker", "parrot")


def generate(spec: GeneratorSpec, seed: int = 0) -> List[Dialogue]:
    rng = np.random.default_rng(seed)
    n, m = spec.n_dialogues, spec.n_utterances
    slots = n * m
    n_questions = int(round(spec.question_rate * slots))
    is_q = np.zeros(slots, dtype=bool)
    if n_questions:
        is_q[rng.choice(slots, size=n_questions, replace=False)] = True
    is_q = is_q.reshape(n, m) if slots else is_q

    width = len(str(max(n - 1, 0)))
    dialogues = []
    for d in range(n):
        coined = {Role.ASSISTANT: [], Role.SEEKER: []}
        reused = {Role.ASSISTANT: set(), Role.SEEKER: set()}
        counter = 0
        utts = []
        for i in range(m):
            role = Role.ASSISTANT if i % 2 == 0 else Role.SEEKER
            words = []
            if rng.random() < spec.information_rate:
                topic = f"topic{counter}x"
                counter += 1
                coined[role].append(topic)
                words += [topic, topic]
            if rng.random() < spec.repetition_rate:
                words.append("it")
            if rng.random() < spec.repetition_rate:
                pool = [t for t in coined[role.other] if t not in reused[role]]
                if pool:
                    pick = pool[int(rng.integers(len(pool)))]
                    reused[role].add(pick)
                    words.append(pick)
            body = " ".join(["the"] + words)
            text = f"do you {body}?" if is_q[d, i] else f"so {body}."
            utts.append(Utterance(i, role, text))
        dialogues.append(Dialogue(f"{spec.dataset}-{d:0{width}d}", tuple(utts), spec.dataset))
    return dialogues


def load_spec(path) -> GeneratorSpec:
    """Load a generator spec from JSON; ``{"preset": name, ...}`` starts from a preset."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    name = data.pop("preset", None)
    if name is None:
        return GeneratorSpec.from_dict(data)
    base = preset(name)
    return replace(base, **data)
