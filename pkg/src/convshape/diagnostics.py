"""Compare a model's shape distribution against a human reference corpus.

Each diagnostic field gets a 1-D histogram whose bins span the reference
corpus range.  A model is scored by the mean cross-entropy (nats) of the
reference histograms against the model histograms, and labelled by the
ratios of its corpus means to the reference means.
"""

import csv
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .metrics import ShapeVector

DIAGNOSTIC_FIELDS: Tuple[str, ...] = ("avg_q", "delta_q", "avg_i", "delta_i", "avg_r", "delta_r")
RATIO_FIELDS: Tuple[str, ...] = ("avg_q", "avg_i", "avg_r")
LOG_BASE = "e"

# slack for threshold comparisons on ratios of float means
_RTOL = 1e-9


class BinningMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Binning:
    bins: int = 20
    alpha: float = 1.0

    def __post_init__(self):
        if self.bins < 1:
            raise ValueError("need at least one bin")
        if self.alpha <= 0:
            raise ValueError("smoothing alpha must be positive")


@dataclass(frozen=True)
class MetricHistogram:
    field: str
    bin_edges: Tuple[float, ...]
    probabilities: Tuple[float, ...]
    counts: Tuple[int, ...]
    alpha: float

    @property
    def n_bins(self) -> int:
        return len(self.probabilities)

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "bin_edges": list(self.bin_edges),
            "probabilities": list(self.probabilities),
            "counts": list(self.counts),
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricHistogram":
        return cls(
            d["field"], tuple(d["bin_edges"]), tuple(d["probabilities"]),
            tuple(d["counts"]), d["alpha"],
        )


def reference_edges(values: Sequence[float], bins: int = 20) -> np.ndarray:
    """Equal-width edges over ``[min, max]`` of the reference values.

    A (numerically) constant reference gets a unit-wide range centred on
    its value.
    """
    if len(values) == 0:
        raise ValueError("no reference values")
    lo, hi = float(min(values)), float(max(values))
    if hi - lo <= 1e-9 * max(1.0, abs(lo), abs(hi)):
        lo = hi = (lo + hi) / 2
        lo, hi = lo - 0.5, hi + 0.5
    return np.linspace(lo, hi, bins + 1)


def histogram_values(values: Sequence[float], field_name: str, bin_edges, alpha: float = 1.0) -> MetricHistogram:
    edges = np.asarray(bin_edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise ValueError("need at least two bin edges")
    if np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be strictly ascending")
    if alpha <= 0:
        raise ValueError("smoothing alpha must be positive")
    if len(values) == 0:
        raise ValueError("cannot build a histogram from no values")
    n_bins = len(edges) - 1
    # values outside the range land in the first/last bin
    idx = np.searchsorted(edges[1:-1], np.asarray(values, dtype=float), side="right")
    counts = np.bincount(idx, minlength=n_bins)
    probs = (counts + alpha) / (len(values) + alpha * n_bins)
    return MetricHistogram(
        field_name,
        tuple(float(e) for e in edges),
        tuple(float(p) for p in probs),
        tuple(int(c) for c in counts),
        float(alpha),
    )


def histogram(shapes: Sequence[ShapeVector], field_name: str, bin_edges, alpha: float = 1.0) -> MetricHistogram:
    if not shapes:
        raise ValueError("cannot build a histogram from an empty corpus")
    return histogram_values([v.get(field_name) for v in shapes], field_name, bin_edges, alpha)


def cross_entropy(p_reference: MetricHistogram, q_model: MetricHistogram) -> float:
    """H(p, q) = -sum p log q in nats."""
    if p_reference.bin_edges != q_model.bin_edges:
        raise BinningMismatch(
            f"histograms for {p_reference.field!r} and {q_model.field!r} use different bins"
        )
    return -math.fsum(p * math.log(q) for p, q in zip(p_reference.probabilities, q_model.probabilities))


@dataclass(frozen=True)
class DevianceRules:
    interviewer_ratio: float = 3.0
    information_ratio_hi: float = 1.5
    repetition_ratio_lo: float = 0.67
    information_ratio_lo: float = 0.67
    repetition_ratio_hi: float = 1.5

    def __post_init__(self):
        for name in ("interviewer_ratio", "information_ratio_hi", "repetition_ratio_hi"):
            if not getattr(self, name) > 1:
                raise ValueError(f"{name} must exceed 1")
        for name in ("information_ratio_lo", "repetition_ratio_lo"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1)")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _ge(value: float, threshold: float) -> bool:
    return value >= threshold - _RTOL * max(1.0, abs(threshold))


def _le(value: float, threshold: float) -> bool:
    return value <= threshold + _RTOL * max(1.0, abs(threshold))


def deviance_label(ratios: Dict[str, float], rules: DevianceRules = DevianceRules()) -> str:
    """First matching rule in the order Interviewer, Talker, Parrot."""
    q, i, r = ratios["avg_q"], ratios["avg_i"], ratios["avg_r"]
    if _ge(q, rules.interviewer_ratio):
        return "Interviewer"
    if _ge(i, rules.information_ratio_hi) and _le(r, rules.repetition_ratio_lo):
        return "Talker"
    if _le(i, rules.information_ratio_lo) and _ge(r, rules.repetition_ratio_hi):
        return "Parrot"
    return "Typical"


def _mean(shapes: Sequence[ShapeVector], name: str) -> float:
    return math.fsum(v.get(name) for v in shapes) / len(shapes)


def _ratio(model: float, reference: float) -> float:
    if reference == 0:
        return 1.0 if model == 0 else math.inf
    return model / reference


@dataclass(frozen=True)
class ReferenceDistribution:
    """Reference histograms and means, computed once and shared across models."""

    label: str
    n_dialogues: int
    histograms: Dict[str, MetricHistogram]
    means: Dict[str, float]
    binning: Binning

    @classmethod
    def build(cls, shapes: Sequence[ShapeVector], binning: Binning = Binning(), label: str = "reference"):
        if not shapes:
            raise ValueError("reference corpus is empty")
        hists = {}
        for name in DIAGNOSTIC_FIELDS:
            values = [v.get(name) for v in shapes]
            edges = reference_edges(values, binning.bins)
            hists[name] = histogram_values(values, name, edges, binning.alpha)
        means = {name: _mean(shapes, name) for name in DIAGNOSTIC_FIELDS}
        return cls(label, len(shapes), hists, means, binning)

    def self_entropy(self) -> float:
        return math.fsum(cross_entropy(h, h) for h in self.histograms.values()) / len(self.histograms)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n_dialogues": self.n_dialogues,
            "log_base": LOG_BASE,
            "binning": {"bins": self.binning.bins, "alpha": self.binning.alpha},
            "means": dict(self.means),
            "histograms": {k: h.to_dict() for k, h in self.histograms.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReferenceDistribution":
        return cls(
            d["label"], d["n_dialogues"],
            {k: MetricHistogram.from_dict(h) for k, h in d["histograms"].items()},
            dict(d["means"]),
            Binning(**d["binning"]),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ReferenceDistribution":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class DiagnosticReport:
    model: str
    n_dialogues: int
    cross_entropy: Dict[str, float]
    total: float
    label: str
    ratios: Dict[str, float]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n_dialogues": self.n_dialogues,
            "cross_entropy": {k: self.cross_entropy[k] for k in DIAGNOSTIC_FIELDS},
            "total": self.total,
            "label": self.label,
            "ratios": {k: self.ratios[k] for k in RATIO_FIELDS},
        }


def diagnose(
    model_shapes: Sequence[ShapeVector],
    reference: Union[ReferenceDistribution, Sequence[ShapeVector]],
    rules: DevianceRules = DevianceRules(),
    binning: Binning = Binning(),
    model: str = "model",
) -> DiagnosticReport:
    """Score one model corpus against the reference and label its deviance.

    ``binning`` is ignored when a prebuilt :class:`ReferenceDistribution`
    is passed; its own binning applies.
    """
    if not model_shapes:
        raise ValueError("model corpus is empty")
    if not isinstance(reference, ReferenceDistribution):
        reference = ReferenceDistribution.build(reference, binning)
    alpha = reference.binning.alpha
    ce = {}
    for name in DIAGNOSTIC_FIELDS:
        ref_hist = reference.histograms[name]
        q = histogram(model_shapes, name, ref_hist.bin_edges, alpha)
        ce[name] = cross_entropy(ref_hist, q)
    ratios = {
        name: _ratio(_mean(model_shapes, name), reference.means[name]) for name in RATIO_FIELDS
    }
    total = math.fsum(ce.values()) / len(ce)
    return DiagnosticReport(model, len(model_shapes), ce, total, deviance_label(ratios, rules), ratios)


def rank(reports: Sequence[DiagnosticReport]) -> List[DiagnosticReport]:
    """Lowest total cross-entropy first; ties go by model label."""
    return sorted(reports, key=lambda r: (r.total, r.model))


def write_reports_csv(reports: Sequence[DiagnosticReport], fh, header_comment: Optional[str] = None) -> None:
    if header_comment:
        fh.write(f"# {header_comment}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["rank", "model", "n_dialogues"] + [f"H_{k}" for k in DIAGNOSTIC_FIELDS]
               + ["total", "label"] + [f"ratio_{k}" for k in RATIO_FIELDS])
    for i, r in enumerate(reports, start=1):
        w.writerow([i, r.model, r.n_dialogues] + [repr(r.cross_entropy[k]) for k in DIAGNOSTIC_FIELDS]
                   + [repr(r.total), r.label] + [repr(r.ratios[k]) for k in RATIO_FIELDS])
