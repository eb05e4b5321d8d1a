import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convshape.lexical import TokenizerConfig, token_events
from convshape.metrics import (
    COLUMNS, ShapeVector, delta, information_counts, question_counts, read_shapes,
    repetition_counts, shape, write_shapes_csv, write_shapes_jsonl,
)
from convshape.tagging import QuestionPolicy, UtteranceTag
from convshape.transcript import Dialogue, Role, Utterance

from oracle import brute_counts

A, S = Role.ASSISTANT, Role.SEEKER


def make(*turns):
    return Dialogue("t", tuple(Utterance(i, r, t) for i, (r, t) in enumerate(turns)), "demo")


# -- delta -------------------------------------------------------------------

def test_delta_examples():
    assert delta(0.29, 0) == 1
    assert delta(0.4, 0.4) == 0
    assert delta(0, 0) == 0
    assert delta(0, 0.1) == -1


def test_delta_rejects_negative():
    with pytest.raises(ValueError):
        delta(-0.1, 0.2)


# counts over lengths, like real per-dialogue rates
rates = st.builds(lambda c, n: c / n, st.integers(0, 500), st.integers(1, 500))


@given(rates, rates)
def test_delta_laws(a, s):
    d = delta(a, s)
    assert -1 <= d <= 1
    assert delta(s, a) == -d
    if a == s:
        assert d == 0
    assert (abs(d) == 1) == ((a == 0) != (s == 0))


@given(rates, rates, st.floats(0.01, 100))
def test_delta_scale_invariant(a, s, k):
    assert delta(k * a, k * s) == pytest.approx(delta(a, s), abs=1e-12)


# -- raw counts --------------------------------------------------------------

def test_question_counts_example(tagged_example):
    assert question_counts(tagged_example) == (2, 0)


def test_question_counts_trivial():
    assert question_counts(make((A, "fine."), (S, "ok."))) == (0, 0)
    d = make((A, "why?"), (S, "why?"), (S, "why?"))
    assert question_counts(d) == (1, 2)


def test_information_example(example_dialogue, golden_config):
    assert information_counts(token_events(example_dialogue, golden_config)) == (1, 1)


def test_information_trivial():
    assert information_counts(token_events(make((A, "apple"), (S, "berry")))) == (0, 0)
    d = make((S, "apple berry cedar"), (A, "apple"), (S, "berry cedar"))
    assert information_counts(token_events(d)) == (0, 3)


def test_repetition_example(example_dialogue, golden_config):
    assert repetition_counts(token_events(example_dialogue, golden_config)) == (2, 0)


def test_repetition_trivial():
    assert repetition_counts(token_events(make((A, "apple"), (S, "berry")))) == (0, 0)
    assert repetition_counts(token_events(make((A, "apple"), (S, "it it it")))) == (0, 3)


def test_repetition_counts_distinct_tokens():
    # seeker re-uses "apple" twice: one distinct repetition
    d = make((A, "apple"), (S, "apple"), (S, "apple"))
    assert repetition_counts(token_events(d)) == (0, 1)


def test_anaphora_do_not_coin_topics():
    d = make((A, "it"), (S, "it"))
    assert information_counts(token_events(d)) == (0, 0)
    assert repetition_counts(token_events(d)) == (1, 1)


# -- shape -------------------------------------------------------------------

def test_example_shape_exact(tagged_example, golden_config):
    v = shape(tagged_example, golden_config)
    assert v.n_utterances == 7
    assert (v.assistant.question, v.seeker.question) == (2 / 7, 0)
    assert (v.assistant.information, v.seeker.information) == (1 / 7, 1 / 7)
    assert (v.assistant.repetition, v.seeker.repetition) == (2 / 7, 0)
    assert v.avg_question == pytest.approx(1 / 7)
    assert v.delta_question == 1
    assert v.avg_information == pytest.approx(1 / 7)
    assert v.delta_information == 0
    assert v.avg_repetition == pytest.approx(1 / 7)
    assert v.delta_repetition == 1
    assert v.flow_a == pytest.approx(1 / 7)
    assert v.flow_s == pytest.approx(-1 / 7)
    assert not v.degenerate


def test_symmetric_dialogue_has_zero_deltas():
    d = make((A, "apple? it"), (S, "berry? apple it"), (A, "berry"))
    v = shape(d)
    assert (v.delta_question, v.delta_information, v.delta_repetition) == (0, 0, 0)


def test_only_seeker_asks():
    v = shape(make((A, "fine."), (S, "why?")))
    assert v.delta_question == -1


def test_single_role_dialogue_is_degenerate():
    v = shape(make((S, "apple apple?")))
    assert v.degenerate
    assert v.delta_question == -1
    assert v.delta_repetition == 0


def test_normalization_doubling_n_halves_rates():
    base = make((A, "apple?"), (S, "apple it"))
    padded = make((A, "apple?"), (S, "apple it"), (A, ""), (S, ""))
    v, w = shape(base), shape(padded)
    for name in ("q_A", "q_S", "i_A", "i_S", "r_A", "r_S", "avg_q", "avg_i", "avg_r", "flow_A", "flow_S"):
        assert w.get(name) == pytest.approx(v.get(name) / 2)
    for name in ("delta_q", "delta_i", "delta_r"):
        assert w.get(name) == v.get(name)


VOCAB = ["apple", "berry", "cedar", "it", "that"]


@st.composite
def dialogues(draw):
    n = draw(st.integers(1, 6))
    turns = []
    for _ in range(n):
        role = draw(st.sampled_from([A, S]))
        words = draw(st.lists(st.sampled_from(VOCAB), max_size=4))
        q = draw(st.booleans())
        turns.append((role, " ".join(words) + ("?" if q else "")))
    return make(*turns)


@settings(max_examples=300)
@given(dialogues())
def test_shape_matches_bruteforce(d):
    v = shape(d)
    c = brute_counts([(u.role.short, u.text) for u in d.utterances])
    n = d.n_utterances
    for key, value in c.items():
        assert v.get(key) == value / n


@settings(max_examples=300)
@given(dialogues())
def test_flow_identities(d):
    v = shape(d)
    assert v.flow_a == v.assistant.repetition - v.assistant.information
    assert v.flow_s == v.seeker.repetition - v.seeker.information
    assert v.flow_a + v.flow_s == pytest.approx(
        (v.assistant.repetition + v.seeker.repetition) - (v.assistant.information + v.seeker.information)
    )


@settings(max_examples=300)
@given(dialogues())
def test_role_swap(d):
    v, w = shape(d), shape(d.swap_roles())
    assert w == v.swapped()
    for name in ("delta_q", "delta_i", "delta_r"):
        assert w.get(name) == -v.get(name)
    assert (w.flow_a, w.flow_s) == (v.flow_s, v.flow_a)


def test_question_policy_is_respected():
    d = Dialogue("x", (Utterance(0, A, "hm", UtteranceTag.CLARIFY), Utterance(1, S, "ok")))
    assert question_counts(d) == (0, 0)
    assert question_counts(d, QuestionPolicy(frozenset({UtteranceTag.CLARIFY}))) == (1, 0)


# -- export ------------------------------------------------------------------

def test_csv_roundtrip(tmp_path, tagged_example, golden_config):
    import io
    v = shape(tagged_example, golden_config)
    buf = io.StringIO()
    write_shapes_csv([v], buf, "digest=abc")
    text = buf.getvalue()
    assert text.startswith("# digest=abc\n")
    assert text.splitlines()[1].split(",") == list(COLUMNS)
    assert read_shapes(io.StringIO(text)) == [v]


def test_jsonl_roundtrip(tagged_example, golden_config):
    import io
    v = shape(tagged_example, golden_config)
    buf = io.StringIO()
    write_shapes_jsonl([v, v.swapped()], buf, {"config_digest": "x"})
    assert read_shapes(io.StringIO(buf.getvalue())) == [v, v.swapped()]


def test_unknown_field():
    with pytest.raises(KeyError):
        shape(make((A, "x"))).get("nope")
