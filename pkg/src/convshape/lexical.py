"""Token streams, dialogue vocabulary and token attribution.

Every token occurrence in a dialogue becomes a :class:`TokenEvent` that
records who first used the token (the introducer) and whether the
occurrence re-uses a token the other participant introduced.  Information
and Repetition counts are read off these events.
"""

import json
import re
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from .transcript import Dialogue, Role

ANAPHORA: FrozenSet[str] = frozenset(
    ["it", "they", "them", "their", "she", "he", "her", "him", "his", "this", "that"]
)

DEFAULT_MENTION_PATTERN = r"@\w+"


def load_term_list(path) -> FrozenSet[str]:
    """Read a one-term-per-line file; blank lines and ``#`` comments are skipped."""
    with open(path, encoding="utf-8") as fh:
        return _parse_terms(fh.read())


def _parse_terms(text: str) -> FrozenSet[str]:
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line.lower())
    return frozenset(terms)


@lru_cache(maxsize=None)
def _bundled_terms(name: str) -> FrozenSet[str]:
    return _parse_terms(resources.files("convshape").joinpath("data", name).read_text("utf-8"))


def default_stopwords() -> FrozenSet[str]:
    return _bundled_terms("stopwords_en.txt")


def canonical_exclusions() -> FrozenSet[str]:
    return _bundled_terms("canonical_exclusions.txt")


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    stem: bool = True
    stopwords: FrozenSet[str] = field(default_factory=default_stopwords)
    exclusions: FrozenSet[str] = frozenset()
    mention_pattern: str = DEFAULT_MENTION_PATTERN

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "exclusions", frozenset(self.exclusions))

    @classmethod
    def canonical(cls) -> "TokenizerConfig":
        """Default stopwords plus the bundled exclusion list."""
        return cls(exclusions=canonical_exclusions())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stopwords"] = sorted(self.stopwords)
        d["exclusions"] = sorted(self.exclusions)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TokenizerConfig":
        d = dict(d)
        for key in ("stopwords", "exclusions"):
            if key in d:
                d[key] = frozenset(d[key])
        return cls(**d)


def light_stem(token: str) -> str:
    """Strip English plural endings only.

    Deliberately weaker than Porter: ``movies`` and ``movie`` both map to
    ``movie`` and the result stays a readable word.
    """
    if len(token) <= 3 or not token.isalpha():
        return token
    if token.endswith(("sses", "xes", "ches", "shes", "zes")):
        return token[:-2]
    if token.endswith(("ss", "us", "is")):
        return token
    if token.endswith("s"):
        return token[:-1]
    return token


_WORD = r"[^\W_]+(?:'[^\W_]+)*"


@lru_cache(maxsize=32)
def _token_regex(mention_pattern: str) -> "re.Pattern":
    return re.compile(f"(?P<mention>{mention_pattern})|(?P<word>{_WORD})")


@lru_cache(maxsize=32)
def _mention_regex(mention_pattern: str) -> "re.Pattern":
    return re.compile(mention_pattern)


def _split_clitic(token: str) -> str:
    # what's -> what, i'm -> i, don't -> dont
    head, sep, clitic = token.partition("'")
    if not sep:
        return token
    if clitic == "t":
        return head + clitic
    return head


def _raw_tokens(text: str, config: TokenizerConfig):
    if config.strip_punctuation:
        for m in _token_regex(config.mention_pattern).finditer(text):
            if m.group("mention"):
                yield m.group(0), True
            else:
                yield m.group(0), False
    else:
        mention = _mention_regex(config.mention_pattern)
        for piece in text.split():
            yield piece, bool(mention.fullmatch(piece))


def tokenize(utterance_text: str, config: Optional[TokenizerConfig] = None) -> List[str]:
    """Normalise text into content tokens plus anaphora.

    Mentions (``@88487``) pass through untouched.  Anaphora are matched after
    lowercasing and before stemming, and survive stopword filtering.
    """
    if config is None:
        config = TokenizerConfig()
    blocked = config.stopwords | config.exclusions
    out = []
    for raw, is_mention in _raw_tokens(utterance_text, config):
        if is_mention:
            out.append(raw)
            continue
        tok = raw.lower() if config.lowercase else raw
        if config.strip_punctuation:
            tok = _split_clitic(tok)
        if tok.lower() in ANAPHORA:
            out.append(tok.lower())
            continue
        if tok.lower() in blocked:
            continue
        if config.stem:
            tok = light_stem(tok)
            if tok.lower() in blocked:
                continue
        if tok:
            out.append(tok)
    return out


@dataclass(frozen=True)
class TokenEvent:
    token: str
    dialogue_freq: int
    introducer: Role
    occurrence_role: Role
    utterance_index: int
    position: int
    is_anaphor: bool
    is_repetition_across_roles: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["introducer"] = self.introducer.value
        d["occurrence_role"] = self.occurrence_role.value
        return d


def token_events(dialogue: Dialogue, config: Optional[TokenizerConfig] = None) -> List[TokenEvent]:
    """One event per token occurrence, in (utterance, position) order."""
    if config is None:
        config = TokenizerConfig()
    occurrences = []
    introducer: Dict[str, Role] = {}
    freq: Dict[str, int] = {}
    for utt in dialogue.utterances:
        for pos, tok in enumerate(tokenize(utt.text, config)):
            occurrences.append((tok, utt.role, utt.index, pos))
            introducer.setdefault(tok, utt.role)
            freq[tok] = freq.get(tok, 0) + 1

    return [
        TokenEvent(
            token=tok,
            dialogue_freq=freq[tok],
            introducer=introducer[tok],
            occurrence_role=role,
            utterance_index=idx,
            position=pos,
            is_anaphor=tok in ANAPHORA,
            # the first occurrence is always by the introducer, so a role
            # mismatch alone marks cross-role reuse
            is_repetition_across_roles=role is not introducer[tok],
        )
        for tok, role, idx, pos in occurrences
    ]


def frequent_tokens(events: Iterable[TokenEvent]) -> Set[str]:
    return {e.token for e in events if e.dialogue_freq > 1}


def dump_events(events: Iterable[TokenEvent], fh, dialogue_id: Optional[str] = None) -> None:
    """Write events as JSON lines for auditing."""
    for e in events:
        rec = e.to_dict()
        if dialogue_id is not None:
            rec = {"dialogue_id": dialogue_id, **rec}
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
