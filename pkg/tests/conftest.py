from __future__ import annotations

from pathlib import Path

import pytest

from quizsmith.corpus import build_corpus, ingest
from quizsmith.knowledge import load_glossary, load_ontology
from quizsmith.selector import select_sentences

FIXTURES = Path(__file__).parent / "fixtures"
SAMPLE = FIXTURES / "sample"


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(SAMPLE / "ontology.yaml")


@pytest.fixture(scope="session")
def glossary():
    return load_glossary(SAMPLE / "glossary.yaml")


@pytest.fixture(scope="session")
def corpus(ontology, glossary):
    return build_corpus(ingest(SAMPLE / "docs", ontology, glossary), 0.75, ontology.ids)


@pytest.fixture(scope="session")
def selection(corpus, ontology):
    return select_sentences(corpus, ontology)


@pytest.fixture(scope="session")
def synthetic(tmp_path_factory):
    from synth import build_synthetic

    return build_synthetic(tmp_path_factory.mktemp("synthetic"))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
