"""Serializable run configuration shared by all commands."""

import hashlib
import json
import os
from dataclasses import dataclass, field, fields, replace
from typing import List, Optional

from .diagnostics import Binning, DevianceRules
from .lexical import TokenizerConfig
from .tagging import QuestionPolicy

ENV_VAR = "CONVSHAPE_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig.canonical)
    question_policy: QuestionPolicy = QuestionPolicy()
    balance_band: float = 0.1
    topic_field: str = "delta_i"
    rules: DevianceRules = DevianceRules()
    binning: Binning = Binning()
    inputs: List[str] = field(default_factory=list)
    mapping: Optional[str] = None
    tags: Optional[str] = None
    reference: Optional[str] = None
    out: Optional[str] = None
    seed: int = 0
    format: str = "csv"
    emit_plot: bool = False
    workers: int = 1

    # paths and worker count do not change results
    _NOT_DIGESTED = ("inputs", "mapping", "tags", "reference", "out", "workers")

    def to_dict(self) -> dict:
        return {
            "tokenizer": self.tokenizer.to_dict(),
            "question_policy": self.question_policy.to_list(),
            "balance_band": self.balance_band,
            "topic_field": self.topic_field,
            "rules": self.rules.to_dict(),
            "binning": {"bins": self.binning.bins, "alpha": self.binning.alpha},
            "inputs": list(self.inputs),
            "mapping": self.mapping,
            "tags": self.tags,
            "reference": self.reference,
            "out": self.out,
            "seed": self.seed,
            "format": self.format,
            "emit_plot": self.emit_plot,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(d)
        if "tokenizer" in kw:
            kw["tokenizer"] = TokenizerConfig.from_dict(kw["tokenizer"])
        if "question_policy" in kw:
            kw["question_policy"] = QuestionPolicy(frozenset(kw["question_policy"]))
        if "rules" in kw:
            kw["rules"] = DevianceRules(**kw["rules"])
        if "binning" in kw:
            kw["binning"] = Binning(**kw["binning"])
        if "inputs" in kw:
            kw["inputs"] = list(kw["inputs"])
        return cls(**kw)

    def digest(self) -> str:
        d = self.to_dict()
        for key in self._NOT_DIGESTED:
            d.pop(key)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def resolve(path: Optional[str]) -> RunConfig:
    """Config from an explicit path, else from $CONVSHAPE_CONFIG, else defaults."""
    path = path or os.environ.get(ENV_VAR)
    if path:
        return RunConfig.load(path)
    return RunConfig()
