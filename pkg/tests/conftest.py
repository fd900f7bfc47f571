import json

import pytest

from landscape.corpus import Corpus, Document, PreprocessConfig, preprocess

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        _acceptance_results.append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")


def corpus_from_texts(texts, ids=None, **fields):
    docs = []
    for i, text in enumerate(texts):
        docs.append(
            Document(
                id=(ids[i] if ids else f"d{i + 1}"),
                title="",
                abstract=text,
                **fields,
            )
        )
    return Corpus(documents=tuple(docs))


@pytest.fixture
def toy_corpus():
    texts = [
        "quantum key distribution protocol security",
        "entanglement distribution over quantum networks",
        "photon detector efficiency for secure channels",
        "classical machine learning models",
        "quantum network repeater entanglement swapping",
        "security proof of quantum protocols",
    ]
    return preprocess(corpus_from_texts(texts))


def write_jsonl(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", "utf-8")
    return path
