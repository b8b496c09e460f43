from __future__ import annotations

from pathlib import Path

import pytest

from minstrel.langgpt import PromptDocument, parse

_acceptance_results: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    title = item.function.__doc__ or item.name
    _acceptance_results[title.strip().splitlines()[0]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for title, outcome in _acceptance_results.items():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {title}")

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_VALID = REPO_ROOT / "corpus" / "valid"
CORPUS_INVALID = REPO_ROOT / "corpus" / "invalid"
FIXTURES = REPO_ROOT / "fixtures"

TITLE_FIXTURE = CORPUS_VALID / "magazine-editor.lgpt.md"
FLATTERER_FIXTURE = CORPUS_VALID / "flatterer.lgpt.md"


@pytest.fixture(scope="session")
def title_text() -> str:
    return TITLE_FIXTURE.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def title_doc(title_text: str) -> PromptDocument:
    return parse(title_text)


@pytest.fixture(scope="session")
def flatterer_doc() -> PromptDocument:
    return parse(FLATTERER_FIXTURE.read_text(encoding="utf-8"))


def corpus_valid_files() -> list[Path]:
    return sorted(CORPUS_VALID.glob("*.lgpt.md"))


def corpus_invalid_files() -> list[Path]:
    return sorted(CORPUS_INVALID.glob("*.txt"))
