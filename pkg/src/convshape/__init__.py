"""Unsupervised initiative and collaboration metrics for two-party dialogues."""

__version__ = "0.1.0"

from .transcript import (
    Dialogue, IngestError, MappingConfig, Role, Utterance,
    emit_canonical, ingest, read_corpus,
)
from .tagging import QuestionPolicy, UtteranceTag, import_tags, is_question, rule_tag
from .lexical import (
    ANAPHORA, TokenEvent, TokenizerConfig, frequent_tokens, token_events, tokenize,
)
from .metrics import (
    RoleMetrics, ShapeVector, delta, information_counts, question_counts,
    repetition_counts, shape, shapes,
)
from .profile import CorpusProfile, DialogueTypeLabel, classify, profile, scatter_points
from .diagnostics import (
    Binning, DevianceRules, DiagnosticReport, MetricHistogram, ReferenceDistribution,
    cross_entropy, diagnose, histogram, rank,
)
from .synth import GeneratorSpec, generate, preset
from .config import RunConfig
