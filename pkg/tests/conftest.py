from pathlib import Path

import pytest

from convshape.lexical import TokenizerConfig, load_term_list
from convshape.tagging import import_tags
from convshape.transcript import read_corpus

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "convshape" / "data" / "redial_example"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def golden_config():
    return TokenizerConfig(exclusions=load_term_list(FIXTURE_DIR / "exclusions.txt"))


@pytest.fixture(scope="session")
def example_dialogue():
    """The 7-utterance movie-recommendation snippet, untagged."""
    return read_corpus(FIXTURE_DIR / "dialogue.jsonl")[0]


@pytest.fixture(scope="session")
def tagged_example(example_dialogue):
    with open(FIXTURE_DIR / "tags.jsonl", encoding="utf-8") as fh:
        return import_tags([example_dialogue], fh)[0]


_acceptance = {}
_failed_params = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        test_id = report.nodeid.split("::")[1]
        name = test_id.split("[")[0]
        ok = _acceptance.get(name, True) and report.outcome == "passed"
        _acceptance[name] = ok
        if report.outcome != "passed" and "[" in test_id:
            _failed_params.setdefault(name, []).append(test_id[len(name) + 1:-1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _acceptance.items():
        detail = f"  ({', '.join(_failed_params[name])})" if name in _failed_params else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}{detail}")
