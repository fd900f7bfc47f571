"""Topic models: collapsed-Gibbs LDA, hierarchical splitting, aspect reweighting.

The baseline model is fit with a seeded collapsed Gibbs sampler; the
estimates average the count tables over the last 10% of iterations.
Aspect-weighted models multiply topic rows by aspect keyword weights on
the vocabulary intersection and max-normalize the result.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .aspect import AspectKeywords
from .corpus import Corpus, Vocabulary

__all__ = [
    "TopicModel",
    "DocTopicAssignment",
    "TopicsError",
    "fit_lda",
    "split_topics",
    "apply_aspect",
    "topic_relevance_scores",
    "top_words",
    "save_model",
    "load_model",
]


class TopicsError(ValueError):
    pass


@dataclass(frozen=True)
class TopicModel:
    """A labeled K x V topic-word weight matrix with lineage."""

    id: str
    kind: str  # "initial" | "aspect_weighted"
    topic_word: np.ndarray
    topic_labels: tuple[str, ...]
    vocabulary: Vocabulary
    lineage: tuple[str, str] | None = None  # (parent model id, aspect label)

    def __post_init__(self):
        tw = np.asarray(self.topic_word, dtype=float)
        object.__setattr__(self, "topic_word", tw)
        if self.kind not in ("initial", "aspect_weighted"):
            raise TopicsError(f"unknown model kind {self.kind!r}")
        if tw.ndim != 2 or tw.shape[0] < 1 or tw.shape[1] < 1:
            raise TopicsError("topic_word must be a K x V matrix with K,V >= 1")
        if tw.shape[1] != self.vocabulary.size:
            raise TopicsError("topic_word width does not match vocabulary size")
        if not np.all(np.isfinite(tw)) or np.any(tw < 0):
            raise TopicsError("topic weights must be finite and nonnegative")
        if len(self.topic_labels) != tw.shape[0]:
            raise TopicsError("label count must equal K")
        if len(set(self.topic_labels)) != len(self.topic_labels):
            raise TopicsError("topic labels must be unique")
        if self.kind == "initial":
            sums = tw.sum(axis=1)
            if not np.allclose(sums, 1.0, atol=1e-9):
                raise TopicsError("initial model rows must sum to 1")
        tw.setflags(write=False)

    @property
    def k(self) -> int:
        return int(self.topic_word.shape[0])

    @property
    def v(self) -> int:
        return int(self.topic_word.shape[1])

    @property
    def vocabulary_hash(self) -> str:
        return self.vocabulary.content_hash()

    def label_index(self, label: str) -> int:
        return self.topic_labels.index(label)


@dataclass(frozen=True)
class DocTopicAssignment:
    """Row-stochastic D x K document-topic proportions."""

    doc_topic: np.ndarray

    def __post_init__(self):
        dt = np.asarray(self.doc_topic, dtype=float)
        object.__setattr__(self, "doc_topic", dt)
        if dt.ndim != 2:
            raise TopicsError("doc_topic must be a D x K matrix")
        if not np.allclose(dt.sum(axis=1), 1.0, atol=1e-9):
            raise TopicsError("doc_topic rows must sum to 1 within 1e-9")
        dt.setflags(write=False)


def make_labels(k: int) -> tuple[str, ...]:
    width = max(2, len(str(k)))
    return tuple(f"T{i + 1:0{width}d}" for i in range(k))


def _model_id(prefix: str, *parts) -> str:
    digest = hashlib.sha256(repr(parts).encode("utf-8")).hexdigest()[:12]
    return f"{prefix}-{digest}"


# ---------------------------------------------------------------------------
# Collapsed Gibbs sampling


@njit(cache=True)
def _gibbs_iteration(z, doc_ids, word_ids, n_dk, n_kw, n_k, alpha, beta, uniforms):
    k_topics = n_kw.shape[0]
    v = n_kw.shape[1]
    beta_total = beta * v
    for t in range(z.shape[0]):
        d = doc_ids[t]
        w = word_ids[t]
        old = z[t]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1

        total = 0.0
        for k in range(k_topics):
            total += (n_kw[k, w] + beta) / (n_k[k] + beta_total) * (n_dk[d, k] + alpha)
        r = uniforms[t] * total
        acc = 0.0
        new = k_topics - 1
        for k in range(k_topics):
            acc += (n_kw[k, w] + beta) / (n_k[k] + beta_total) * (n_dk[d, k] + alpha)
            if r < acc:
                new = k
                break

        z[t] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


def _fit_gibbs(doc_ids, word_ids, n_docs, v, k, alpha, beta, iterations, seed):
    """Run the sampler; return (phi K x V, theta D x K) averaged over the tail."""
    rng = np.random.default_rng(seed)
    n_tokens = doc_ids.shape[0]
    z = rng.integers(0, k, size=n_tokens, dtype=np.int64)

    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, v), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    np.add.at(n_dk, (doc_ids, z), 1)
    np.add.at(n_kw, (z, word_ids), 1)
    np.add.at(n_k, z, 1)

    tail = max(1, math.ceil(iterations * 0.1))
    acc_kw = np.zeros((k, v), dtype=np.float64)
    acc_dk = np.zeros((n_docs, k), dtype=np.float64)
    for it in range(iterations):
        uniforms = rng.random(n_tokens)
        _gibbs_iteration(z, doc_ids, word_ids, n_dk, n_kw, n_k, alpha, beta, uniforms)
        if it >= iterations - tail:
            acc_kw += n_kw
            acc_dk += n_dk

    mean_kw = acc_kw / tail
    mean_dk = acc_dk / tail
    phi = (mean_kw + beta) / (mean_kw.sum(axis=1, keepdims=True) + beta * v)
    theta = (mean_dk + alpha) / (mean_dk.sum(axis=1, keepdims=True) + alpha * k)
    return phi, theta


def _token_arrays(corpus: Corpus):
    vocab = corpus.vocabulary
    doc_ids, word_ids = [], []
    for d, toks in enumerate(corpus.tokens):
        for tok in toks:
            doc_ids.append(d)
            word_ids.append(vocab.index(tok))
    return (
        np.asarray(doc_ids, dtype=np.int64),
        np.asarray(word_ids, dtype=np.int64),
    )


def fit_lda(
    corpus: Corpus,
    k: int,
    alpha_dir: float | None = None,
    beta_dir: float = 0.01,
    iterations: int = 200,
    seed: int = 0,
) -> tuple[TopicModel, DocTopicAssignment]:
    """Fit the baseline model with collapsed Gibbs sampling.

    Symmetric priors default to alpha = 50/k and beta = 0.01; the run is
    deterministic for a fixed seed.
    """
    if not corpus.is_preprocessed or not corpus.documents:
        raise TopicsError("fit_lda requires a preprocessed, non-empty corpus")
    if k < 1:
        raise TopicsError("k must be >= 1")
    if iterations < 1:
        raise TopicsError("iterations must be >= 1")
    v = corpus.vocabulary.size
    if k > v:
        raise TopicsError(f"k={k} exceeds vocabulary size {v}")
    nonempty = sum(1 for t in corpus.tokens if t)
    if nonempty < k:
        raise TopicsError(f"need at least k={k} non-empty documents, have {nonempty}")
    alpha = 50.0 / k if alpha_dir is None else float(alpha_dir)
    if alpha <= 0 or beta_dir <= 0:
        raise TopicsError("Dirichlet priors must be positive")

    doc_ids, word_ids = _token_arrays(corpus)
    phi, theta = _fit_gibbs(
        doc_ids, word_ids, len(corpus), v, k, alpha, float(beta_dir), iterations, seed
    )
    model = TopicModel(
        id=_model_id("ctp", "lda", k, alpha, beta_dir, iterations, seed,
                     corpus.vocabulary.content_hash(), len(corpus)),
        kind="initial",
        topic_word=phi,
        topic_labels=make_labels(k),
        vocabulary=corpus.vocabulary,
    )
    return model, DocTopicAssignment(doc_topic=theta)


def allocate_subtopics(sizes: list[int], total: int) -> list[int]:
    """Largest-remainder allocation, one topic minimum per partition."""
    n = len(sizes)
    if total < n:
        raise TopicsError(f"total_subtopics={total} below partition count {n}")
    weight = sum(sizes)
    if weight <= 0:
        raise TopicsError("cannot allocate subtopics over empty partitions")
    quotas = [total * s / weight for s in sizes]
    alloc = [int(math.floor(q)) for q in quotas]
    remainders = sorted(
        range(n), key=lambda i: (-(quotas[i] - alloc[i]), i)
    )
    short = total - sum(alloc)
    for i in remainders[:short]:
        alloc[i] += 1
    # enforce the one-per-partition floor by taking from the largest shares
    for i in range(n):
        if alloc[i] == 0:
            donor = max(range(n), key=lambda j: (alloc[j], -j))
            if alloc[donor] <= 1:
                raise TopicsError("cannot give every partition a subtopic")
            alloc[donor] -= 1
            alloc[i] += 1
    return alloc


def split_topics(
    model: TopicModel,
    assignment: DocTopicAssignment,
    corpus: Corpus,
    total_subtopics: int,
    seed: int = 0,
    alpha_dir: float | None = None,
    beta_dir: float = 0.01,
    iterations: int = 200,
) -> TopicModel:
    """Partition documents by argmax topic and fit a sub-model per partition.

    Sub-topic counts are allocated to partitions proportionally to their
    sizes (largest remainder, at least one each); the concatenated rows are
    relabeled T01..T{total}.
    """
    if model.kind != "initial":
        raise TopicsError("split_topics requires an initial model")
    if assignment.doc_topic.shape != (len(corpus), model.k):
        raise TopicsError("assignment shape does not match corpus/model")
    if total_subtopics < model.k:
        raise TopicsError("total_subtopics must be >= the primary topic count")

    primary = np.argmax(assignment.doc_topic, axis=1)
    partitions = [np.flatnonzero(primary == j) for j in range(model.k)]
    sizes = [int(p.size) for p in partitions]
    alloc = allocate_subtopics(sizes, total_subtopics)

    v = model.vocabulary.size
    rows = []
    for j, (part, sub_k) in enumerate(zip(partitions, alloc)):
        nonempty = sum(1 for i in part if corpus.tokens[i])
        if nonempty < sub_k:
            raise TopicsError(
                f"partition {model.topic_labels[j]} has {nonempty} non-empty documents "
                f"but was allocated {sub_k} subtopics; lower total_subtopics"
            )
        doc_ids, word_ids = [], []
        for local, i in enumerate(part):
            for tok in corpus.tokens[i]:
                doc_ids.append(local)
                word_ids.append(model.vocabulary.index(tok))
        alpha = 50.0 / sub_k if alpha_dir is None else float(alpha_dir)
        phi, _ = _fit_gibbs(
            np.asarray(doc_ids, dtype=np.int64),
            np.asarray(word_ids, dtype=np.int64),
            int(part.size),
            v,
            sub_k,
            alpha,
            float(beta_dir),
            iterations,
            seed + j,
        )
        rows.append(phi)

    topic_word = np.vstack(rows)
    topic_word = topic_word / topic_word.sum(axis=1, keepdims=True)
    return TopicModel(
        id=_model_id("ctp", "split", model.id, total_subtopics, seed, iterations),
        kind="initial",
        topic_word=topic_word,
        topic_labels=make_labels(total_subtopics),
        vocabulary=model.vocabulary,
    )


# ---------------------------------------------------------------------------
# Aspect weighting


def apply_aspect(
    model: TopicModel,
    aspect: AspectKeywords,
    retain_factor: float = 0.0,
    normalize: str = "global",
) -> TopicModel:
    """Reweight topic rows by aspect keyword weights on the intersection.

    Words outside the intersection keep ``retain_factor`` times their
    weight; the result is max-normalized (globally by default, or per
    topic) so the strongest cell is 1.0.
    """
    if normalize not in ("global", "per_topic"):
        raise TopicsError(f"unknown normalization scope {normalize!r}")
    if retain_factor < 0:
        raise TopicsError("retain_factor must be >= 0")
    vocab = model.vocabulary
    multiplier = np.full(vocab.size, float(retain_factor))
    hit = False
    for term, weight in aspect.entries:
        if term in vocab:
            multiplier[vocab.index(term)] = weight
            hit = True
    if not hit:
        raise TopicsError("aspect disjoint from model vocabulary")

    raw = model.topic_word * multiplier[None, :]
    if normalize == "global":
        peak = raw.max()
        weighted = raw / peak if peak > 0 else raw
    else:
        peaks = raw.max(axis=1, keepdims=True)
        weighted = np.where(peaks > 0, raw / np.where(peaks > 0, peaks, 1.0), raw)

    return TopicModel(
        id=_model_id("ctp", "aspect", model.id, aspect.label, retain_factor, normalize,
                     tuple(aspect.entries)),
        kind="aspect_weighted",
        topic_word=weighted,
        topic_labels=model.topic_labels,
        vocabulary=model.vocabulary,
        lineage=(model.id, aspect.label),
    )


def topic_relevance_scores(model: TopicModel, aspect: AspectKeywords) -> np.ndarray:
    """Per-topic dot product with the aspect weights over the intersection."""
    vocab = model.vocabulary
    weights = np.zeros(vocab.size)
    for term, weight in aspect.entries:
        if term in vocab:
            weights[vocab.index(term)] = weight
    return model.topic_word @ weights


def top_words(model: TopicModel, topic_index: int, n: int) -> list[tuple[str, float]]:
    """The ``n`` highest-weight terms of a topic, weight desc, term asc on ties."""
    if not (0 <= topic_index < model.k):
        raise TopicsError(f"topic index {topic_index} out of range")
    if n <= 0:
        return []
    row = model.topic_word[topic_index]
    order = sorted(range(model.v), key=lambda i: (-row[i], model.vocabulary.terms[i]))
    return [(model.vocabulary.terms[i], float(row[i])) for i in order[: min(n, model.v)]]


# ---------------------------------------------------------------------------
# Serialization: JSON header + CSV matrix


def save_model(model: TopicModel, directory: str | Path) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header_path = directory / f"{model.id}.json"
    matrix_path = directory / f"{model.id}.csv"
    header = {
        "id": model.id,
        "kind": model.kind,
        "labels": list(model.topic_labels),
        "lineage": list(model.lineage) if model.lineage else None,
        "vocabulary_hash": model.vocabulary_hash,
        "vocabulary": list(model.vocabulary.terms),
        "doc_frequency": list(model.vocabulary.doc_frequency),
    }
    header_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", "utf-8")
    lines = [",".join(model.vocabulary.terms)]
    for row in model.topic_word:
        lines.append(",".join(repr(float(x)) for x in row))
    matrix_path.write_text("\n".join(lines) + "\n", "utf-8")
    return header_path, matrix_path


def load_model(header_path: str | Path) -> TopicModel:
    header_path = Path(header_path)
    header = json.loads(header_path.read_text("utf-8"))
    matrix_path = header_path.with_suffix(".csv")
    lines = matrix_path.read_text("utf-8").splitlines()
    terms = tuple(lines[0].split(","))
    if list(terms) != list(header["vocabulary"]):
        raise TopicsError(f"{matrix_path}: vocabulary does not match header")
    matrix = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    vocab = Vocabulary(terms=terms, doc_frequency=tuple(header["doc_frequency"]))
    if vocab.content_hash() != header["vocabulary_hash"]:
        raise TopicsError(f"{header_path}: vocabulary hash mismatch")
    lineage = header.get("lineage")
    return TopicModel(
        id=header["id"],
        kind=header["kind"],
        topic_word=matrix,
        topic_labels=tuple(header["labels"]),
        vocabulary=vocab,
        lineage=tuple(lineage) if lineage else None,
    )
