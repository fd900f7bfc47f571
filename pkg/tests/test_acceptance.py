"""Acceptance gate: one test per criterion, each printed pass/fail in the
terminal summary. Tolerances are pinned here and nowhere else."""

import filecmp
import math
import time

import numpy as np
import pytest

from landscape.agent import RewardCoefficients, approximate_reward, q_update
from landscape.aspect import compute_tfidf, extract_aspect_keywords
from landscape.corpus import preprocess
from landscape.fixtures import (
    aspect_corpus,
    mini_corpus,
    trajectory_plan,
    validation_corpus,
)
from landscape.metrics import MetricsBundle, adns, cosine_similarity, entropy
from landscape.reports import run_sweep
from landscape.session import LdaParams, autopilot, create_session, save_session
from landscape.topics import fit_lda

from conftest import corpus_from_texts
from test_topics import block_topics, greedy_match, synthetic_corpus

# --------------------------------------------------------------------------
# Criterion: Q-update golden rows (Tables 3 and 5), alpha=0.1, gamma=0.9,
# published updated values reproduced within 1e-4.

GOLDEN_ROWS = [
    # (modified reward, current Q, max future Q, published updated Q)
    (0.817206, 2.94253, 0.592063, 2.783283),
    (2.003339, 2.329936, 0.592063, 2.350562),
    (2.806429, 1.675343, 0.592063, 1.841738),
    (2.636102, 1.64776, 0.592063, 1.79988),
    (2.936999, 1.564563, 0.592063, 1.755092),
    (0.740486, 2.783283, 0.585846, 2.63173),
    (2.507128, 1.79988, 0.585846, 1.923331),
    (2.801841, 2.350562, 0.585846, 2.448416),
    (3.024117, 1.755092, 0.585846, 1.934721),
    (2.983367, 1.841738, 0.585846, 2.008627),
]


def test_q_update_golden_rows():
    for reward, q, future, expected in GOLDEN_ROWS:
        got = q_update(q, reward, future, alpha=0.1, gamma=0.9)
        assert got == pytest.approx(expected, abs=1e-4), (reward, q, expected, got)


# --------------------------------------------------------------------------
# Criterion: trajectory fixture reproduces the published per-topic Q deltas
# within 1e-3.

PUBLISHED_DELTAS = {"T19": -0.152, "T32": 0.098, "T39": 0.167, "T21": 0.123,
                    "T33": 0.18}


def test_trajectory_q_deltas():
    state = trajectory_plan().run()
    assert state.status == "ended"
    first, second = state.iterations
    for label, expected in PUBLISHED_DELTAS.items():
        delta = second.q_after[label] - first.q_after[label]
        assert delta == pytest.approx(expected, abs=1e-3), label


# --------------------------------------------------------------------------
# Criterion: metric properties over >= 1000 randomized vectors each,
# total runtime below 10 seconds.


def test_metrics_property_suite():
    start = time.monotonic()
    rng = np.random.default_rng(20240807)

    for _ in range(1000):
        n = int(rng.integers(2, 60))
        a = rng.random(n) * 10
        b = rng.random(n) * 10

        s_ab = cosine_similarity(a, b)
        assert s_ab == pytest.approx(cosine_similarity(b, a), abs=1e-12)
        assert -1e-12 <= s_ab <= 1 + 1e-12
        scale = float(rng.uniform(0.1, 50))
        assert cosine_similarity(scale * a, b) == pytest.approx(s_ab, abs=1e-9)
        assert cosine_similarity(a, a) == pytest.approx(1.0, abs=1e-12)

        h = entropy(a)
        assert 0.0 <= h <= math.log(n) + 1e-9
        assert entropy(scale * a) == pytest.approx(h, abs=1e-8)

        d = adns(a, b)
        assert d == pytest.approx(adns(b, a), abs=1e-12)
        assert 0.0 <= d <= 2.0 + 1e-12
        assert adns(a, a) == pytest.approx(0.0, abs=1e-12)

    # extremal cases at every size in 2..101 (uniform, point mass, disjoint)
    for n in range(2, 102):
        assert entropy([1.0] * n) == pytest.approx(math.log(n), abs=1e-9)
        point = [0.0] * n
        point[0] = 3.5
        assert entropy(point) == 0.0
        other = [0.0] * n
        other[-1] = 1.0
        assert adns(point, other) == pytest.approx(2.0, abs=1e-12)

    assert time.monotonic() - start < 10.0


# --------------------------------------------------------------------------
# Criterion: the approximate reward is linear in each bundle field with
# slope equal to its default coefficient, within 1e-9.


def _bundle(magnitude=2.0, sim=0.4, delta=0.1, adns_val=0.2):
    return MetricsBundle(
        topic_labels=("T01",),
        similarity_matrix=np.array([[sim]]),
        corresponding_similarity=np.array([sim]),
        magnitude=np.array([magnitude]),
        adns=np.array([adns_val]),
        entropy_old=np.array([1.0 - delta]),
        entropy_new=np.array([1.0]),
        entropy_delta=np.array([delta]),
        degenerate=(False,),
    )


def test_eq6_linearity():
    coeffs = RewardCoefficients()  # (0.75, 0.15, 0.05, 0.05)
    expected_slopes = {
        "magnitude": coeffs.lambda1,
        "sim": coeffs.lambda2,
        "delta": coeffs.lambda3,
        "adns_val": coeffs.lambda4,
    }
    eps = 1e-4
    base = approximate_reward(_bundle(), 0, coeffs)
    for field, lam in expected_slopes.items():
        kwargs = dict(magnitude=2.0, sim=0.4, delta=0.1, adns_val=0.2)
        kwargs[field] += eps
        slope = (approximate_reward(_bundle(**kwargs), 0, coeffs) - base) / eps
        assert slope == pytest.approx(lam, abs=1e-9), field


# --------------------------------------------------------------------------
# Criterion: extract_aspect_keywords ranking equals the brute-force tf-idf
# oracle ranking exactly on every fixture corpus of <= 10 documents.


def _brute_force_ranking(corpus):
    n = len(corpus)
    terms = sorted({t for toks in corpus.tokens for t in toks})
    scores = {}
    for term in terms:
        df = sum(1 for toks in corpus.tokens if term in toks)
        idf = math.log(n / df)
        total = sum(
            (toks.count(term) / len(toks)) * idf for toks in corpus.tokens if toks
        )
        scores[term] = total / n
    return [t for t, _ in sorted(scores.items(), key=lambda e: (-e[1], e[0]))]


def _small_fixture_corpora():
    yield "aspect_protocols", aspect_corpus("protocols")
    yield "aspect_networks", aspect_corpus("networks")
    yield "toy_tie", preprocess(corpus_from_texts(
        ["alpha alpha gamma delta", "beta beta gamma delta", "gamma delta epsilon"]
    ))
    yield "toy_overlap", preprocess(corpus_from_texts(
        ["photon photon detector", "photon source", "detector efficiency source",
         "laser detector photon", "source laser"]
    ))
    yield "toy_singleton", preprocess(corpus_from_texts(["quantum key distribution"]))
    rng = np.random.default_rng(99)
    words = ["keying", "photon", "secure", "channel", "proofs", "verify", "lattice"]
    texts = [
        " ".join(words[j] for j in rng.integers(0, len(words), 12)) for _ in range(10)
    ]
    yield "toy_random_10doc", preprocess(corpus_from_texts(texts))


def test_tfidf_oracle_equivalence():
    for name, corpus in _small_fixture_corpora():
        assert len(corpus) <= 10, name
        got = list(
            extract_aspect_keywords(corpus, max_k=len(corpus.vocabulary.terms)).terms()
        )
        assert got == _brute_force_ranking(corpus), name
        # and the raw scores agree cellwise
        scores = compute_tfidf(corpus)
        n = len(corpus)
        for term, score in scores.items():
            df = sum(1 for toks in corpus.tokens if term in toks)
            idf = math.log(n / df)
            brute = sum(
                (toks.count(term) / len(toks)) * idf for toks in corpus.tokens if toks
            ) / n
            assert score == pytest.approx(brute, abs=1e-12), (name, term)


# --------------------------------------------------------------------------
# Criterion: LDA recovery on a synthetic 3-topic corpus (V=30, D=500,
# fixed seed): greedy-matched cosine >= 0.9 per topic, within 60 s.


def test_lda_recovery():
    start = time.monotonic()
    true = block_topics(3, 30)
    corpus = synthetic_corpus(true, n_docs=500, doc_len=50, seed=2024)
    model, _ = fit_lda(corpus, k=3, iterations=300, seed=31)
    scores = greedy_match(true, model.topic_word)
    elapsed = time.monotonic() - start
    assert all(s >= 0.9 for s in scores), scores
    assert elapsed < 60.0, f"took {elapsed:.1f}s"


# --------------------------------------------------------------------------
# Criterion: two identical autopilot runs over the bundled mini-corpus
# produce byte-identical session directories and select exactly five
# topics per iteration.


def _dirs_identical(a, b):
    cmp = filecmp.dircmp(a, b)
    if cmp.left_only or cmp.right_only or cmp.diff_files or cmp.funny_files:
        return False
    return all(_dirs_identical(sa, sb) for sa, sb in (
        (a / name, b / name) for name in cmp.common_dirs
    ))


def test_end_to_end_determinism(tmp_path):
    corpus = mini_corpus()
    aspects = [
        extract_aspect_keywords(aspect_corpus("protocols"), label="protocols"),
        extract_aspect_keywords(aspect_corpus("networks"), label="networks"),
    ]
    validation = [validation_corpus(2023), validation_corpus(2024)]
    for name in ("run_a", "run_b"):
        state = create_session(corpus, lda_params=LdaParams(k=6, iterations=120, seed=11))
        autopilot(state, aspects, validation)
        assert state.status == "ended"
        assert len(state.iterations) == 2
        for record in state.iterations:
            assert len(record.selected_topics) == 5
        save_session(state, tmp_path / name)
    assert _dirs_identical(tmp_path / "run_a", tmp_path / "run_b")


# --------------------------------------------------------------------------
# Criterion: across a 5x5 (alpha, lambda) grid, updated Q strictly increases
# with lambda at fixed alpha for every positive-entropy topic, and the sweep
# table has the published shape (topics x pairs, blanks outside the top 5).


def test_sweep_monotonicity_and_shape():
    state = create_session(mini_corpus(), lda_params=LdaParams(k=6, iterations=60, seed=7))
    aspects = [
        extract_aspect_keywords(aspect_corpus("protocols"), label="protocols"),
        extract_aspect_keywords(aspect_corpus("networks"), label="networks"),
    ]
    autopilot(state, aspects, [validation_corpus(2023), validation_corpus(2024)])

    alphas = [0.1, 0.15, 0.2, 0.25, 0.3]
    lambdas = [0.5, 1.5, 2.5, 3.5, 4.5]
    report = run_sweep(state, alphas, lambdas)
    assert len(report.pairs) == 25

    bundle = state.bundles[len(state.iterations)]
    entropy_by_label = {
        label: float(bundle.entropy_new[i])
        for i, label in enumerate(bundle.topic_labels)
    }
    pair_index = {pair: p for p, pair in enumerate(report.pairs)}
    for i, label in enumerate(report.topic_labels):
        if entropy_by_label[label] <= 0:
            continue
        for a in alphas:
            values = [report.q_after[i, pair_index[(a, lam)]] for lam in lambdas]
            assert all(x < y for x, y in zip(values, values[1:])), (label, a, values)

    from landscape.reports import sweep_table

    header, rows = sweep_table(report)
    assert len(header) == 1 + 25
    assert rows, "at least one topic selected somewhere"
    for p in range(25):
        non_blank = sum(1 for row in rows if row[1 + p] != "")
        assert non_blank == min(5, len(report.topic_labels))
    for row in rows:
        assert any(cell != "" for cell in row[1:])
