"""Dataset-level profiles, dialogue-type quadrants and table/plot output."""

import csv
import enum
import json
import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .metrics import SUMMARY_FIELDS, ShapeVector

FIELD_TITLES = {
    "avg_q": "Question",
    "delta_q": "ΔQuestion",
    "avg_i": "Information",
    "delta_i": "ΔInformation",
    "avg_r": "Repetition",
    "delta_r": "ΔRepetition",
    "flow_A": "Flow_A",
    "flow_S": "Flow_S",
}


@dataclass(frozen=True)
class CorpusProfile:
    dataset: str
    n_dialogues: int
    means: Dict[str, float]
    stds: Dict[str, float]

    def mean(self, name: str) -> float:
        try:
            return self.means[name]
        except KeyError:
            raise KeyError(f"unknown profile field {name!r}") from None

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "n_dialogues": self.n_dialogues,
            "means": {k: self.means[k] for k in SUMMARY_FIELDS},
            "stds": {k: self.stds[k] for k in SUMMARY_FIELDS},
        }

    @classmethod
    def from_means(cls, dataset: str, n_dialogues: int = 1, **means: float) -> "CorpusProfile":
        """Build a profile from known means (missing fields default to 0, stds to 0)."""
        unknown = set(means) - set(SUMMARY_FIELDS)
        if unknown:
            raise KeyError(f"unknown profile fields {sorted(unknown)}")
        full = {k: float(means.get(k, 0.0)) for k in SUMMARY_FIELDS}
        return cls(dataset, n_dialogues, full, {k: 0.0 for k in SUMMARY_FIELDS})


def profile(shapes: Sequence[ShapeVector], dataset: str) -> CorpusProfile:
    """Mean and population standard deviation of each summary field.

    Sums use ``math.fsum`` so the result does not depend on dialogue order.
    """
    if not shapes:
        raise ValueError("cannot profile an empty corpus")
    n = len(shapes)
    means, stds = {}, {}
    for name in SUMMARY_FIELDS:
        values = [v.get(name) for v in shapes]
        mu = math.fsum(values) / n
        means[name] = mu
        stds[name] = math.sqrt(math.fsum((x - mu) ** 2 for x in values) / n)
    return CorpusProfile(dataset, n, means, stds)


def profiles_by_dataset(shapes: Sequence[ShapeVector]) -> List[CorpusProfile]:
    groups: Dict[str, List[ShapeVector]] = {}
    for v in shapes:
        groups.setdefault(v.dataset, []).append(v)
    return [profile(groups[name], name) for name in groups]


class Driver(str, enum.Enum):
    ASSISTANT_DRIVEN = "AssistantDriven"
    SEEKER_DRIVEN = "SeekerDriven"
    BALANCED = "Balanced"


class Topic(str, enum.Enum):
    ASSISTANT_CONTRIBUTED = "AssistantContributed"
    SEEKER_CONTRIBUTED = "SeekerContributed"
    BALANCED = "Balanced"


class DialogueTypeLabel(NamedTuple):
    driver: Driver
    topic: Topic


def _side(value: float, eps: float) -> int:
    if value > eps:
        return 1
    if value < -eps:
        return -1
    return 0


def classify(p: CorpusProfile, balance_band: float = 0.1, topic_field: str = "delta_i") -> DialogueTypeLabel:
    """Place a profile in a quadrant by the signs of its mean deltas.

    ``topic_field`` may be switched to ``"delta_r"`` for follow-up analysis.
    """
    if balance_band < 0:
        raise ValueError("balance band must be non-negative")
    if topic_field not in ("delta_i", "delta_r"):
        raise ValueError(f"topic field must be delta_i or delta_r, got {topic_field!r}")
    driver = {1: Driver.ASSISTANT_DRIVEN, -1: Driver.SEEKER_DRIVEN, 0: Driver.BALANCED}
    topic = {1: Topic.ASSISTANT_CONTRIBUTED, -1: Topic.SEEKER_CONTRIBUTED, 0: Topic.BALANCED}
    return DialogueTypeLabel(
        driver[_side(p.mean("delta_q"), balance_band)],
        topic[_side(p.mean(topic_field), balance_band)],
    )


def scatter_points(profiles: Sequence[CorpusProfile], x_field: str, y_field: str) -> List[Tuple[str, float, float]]:
    for name in (x_field, y_field):
        if name not in SUMMARY_FIELDS:
            raise KeyError(f"unknown profile field {name!r}")
    return [(p.dataset, p.mean(x_field), p.mean(y_field)) for p in profiles]


# -- rendering ---------------------------------------------------------------

def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def write_table_csv(profiles: Sequence[CorpusProfile], fh, header_comment: Optional[str] = None) -> None:
    if header_comment:
        fh.write(f"# {header_comment}\n")
    cols = ["dataset", "n_dialogues"]
    for name in SUMMARY_FIELDS:
        cols += [f"{name}_mean", f"{name}_std"]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for p in profiles:
        row = [p.dataset, p.n_dialogues]
        for name in SUMMARY_FIELDS:
            row += [repr(p.means[name]), repr(p.stds[name])]
        w.writerow(row)


def _cells(profiles: Sequence[CorpusProfile], bold_max: bool) -> List[List[str]]:
    best = {
        name: max(p.means[name] for p in profiles) for name in SUMMARY_FIELDS
    } if profiles else {}
    rows = []
    for p in profiles:
        row = [p.dataset, str(p.n_dialogues)]
        for name in SUMMARY_FIELDS:
            mean = _fmt(p.means[name])
            if bold_max and len(profiles) > 1 and p.means[name] == best[name]:
                mean = f"**{mean}**"
            row.append(f"{mean} ({_fmt(p.stds[name])})")
        rows.append(row)
    return rows


def _headers() -> List[str]:
    return ["Dataset", "N"] + [FIELD_TITLES[n] for n in SUMMARY_FIELDS]


def render_markdown(profiles: Sequence[CorpusProfile]) -> str:
    """Markdown table with ``mean (std)`` cells; column maxima in bold."""
    head = _headers()
    lines = ["| " + " | ".join(head) + " |", "|" + "|".join(["---"] + [":-:"] * (len(head) - 1)) + "|"]
    for row in _cells(profiles, bold_max=True):
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_text(profiles: Sequence[CorpusProfile]) -> str:
    head = _headers()
    rows = [head] + _cells(profiles, bold_max=False)
    widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
    out = []
    for r in rows:
        out.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(line.rstrip() for line in out) + "\n"


def scatter_spec(
    points: Sequence[Tuple[str, float, float]],
    x_field: str,
    y_field: str,
    title: str = "Dialogue types",
    usermeta: Optional[dict] = None,
) -> dict:
    """Vega-Lite scatter of one point per dataset with zero rules as quadrant axes."""
    values = [{"dataset": name, "x": x, "y": y} for name, x, y in points]
    spec = {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "title": title,
        "width": 400,
        "height": 400,
        "data": {"values": values},
        "layer": [
            {"mark": {"type": "rule", "color": "gray"}, "encoding": {"x": {"datum": 0}}},
            {"mark": {"type": "rule", "color": "gray"}, "encoding": {"y": {"datum": 0}}},
            {
                "mark": {"type": "point", "filled": True, "size": 80},
                "encoding": {
                    "x": {"field": "x", "type": "quantitative", "title": FIELD_TITLES[x_field]},
                    "y": {"field": "y", "type": "quantitative", "title": FIELD_TITLES[y_field]},
                    "tooltip": [{"field": "dataset", "type": "nominal"}],
                },
            },
            {
                "mark": {"type": "text", "align": "left", "dx": 6, "dy": -6},
                "encoding": {
                    "x": {"field": "x", "type": "quantitative"},
                    "y": {"field": "y", "type": "quantitative"},
                    "text": {"field": "dataset", "type": "nominal"},
                },
            },
        ],
    }
    if usermeta:
        spec["usermeta"] = usermeta
    return spec


def dumps_spec(spec: dict) -> str:
    return json.dumps(spec, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
