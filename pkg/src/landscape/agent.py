"""Tabular Q-learning over topics.

Approximate rewards blend magnitude, similarity, entropy change, and
ADNS; validation-stage rewards score selected topics against fresh
documents and add an entropy exploration bonus; Q-values update with the
standard discounted rule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .metrics import MetricsBundle, entropy
from .topics import TopicModel

__all__ = [
    "AgentError",
    "RewardCoefficients",
    "AgentConfig",
    "QTable",
    "QUpdateEvent",
    "DocTopicMatrix",
    "approximate_reward",
    "init_qtable",
    "q_update",
    "doc_topic_similarity",
    "base_reward",
    "modified_reward",
    "max_future_q",
    "select_topics",
    "parameter_sweep",
    "SweepReport",
]


class AgentError(ValueError):
    pass


@dataclass(frozen=True)
class RewardCoefficients:
    """Weights of the approximate-reward blend (magnitude, similarity,
    entropy change, ADNS)."""

    lambda1: float = 0.75
    lambda2: float = 0.15
    lambda3: float = 0.05
    lambda4: float = 0.05
    use_divergence: bool = False  # score 1 - similarity instead of similarity
    entropy_mode: str = "delta"  # "delta" | "absolute"

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3", "lambda4"):
            if not math.isfinite(getattr(self, name)):
                raise AgentError(f"{name} must be finite")
        if self.entropy_mode not in ("delta", "absolute"):
            raise AgentError(f"unknown entropy_mode {self.entropy_mode!r}")


@dataclass(frozen=True)
class AgentConfig:
    alpha: float = 0.1
    gamma: float = 0.9
    lambda_entropy: float = 0.5
    sim_threshold: float = 0.3
    top_n: int = 5
    base_reward_mode: str = "indicator_mean"
    top_k_docs: int = 5
    future_q_mode: str = "shared_max"  # "shared_max" | "per_topic"
    update_all_topics: bool = False

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise AgentError("alpha must be in (0, 1]")
        if not (0 <= self.gamma < 1):
            raise AgentError("gamma must be in [0, 1)")
        if self.lambda_entropy < 0:
            raise AgentError("lambda_entropy must be >= 0")
        if not (0 <= self.sim_threshold <= 1):
            raise AgentError("sim_threshold must be in [0, 1]")
        if self.top_n < 1:
            raise AgentError("top_n must be >= 1")
        if self.base_reward_mode not in ("indicator_mean", "thresholded_mean", "top_k_mean"):
            raise AgentError(f"unknown base_reward_mode {self.base_reward_mode!r}")
        if self.top_k_docs < 1:
            raise AgentError("top_k_docs must be >= 1")
        if self.future_q_mode not in ("shared_max", "per_topic"):
            raise AgentError(f"unknown future_q_mode {self.future_q_mode!r}")


@dataclass(frozen=True)
class QUpdateEvent:
    iteration: int
    label: str
    reward: float
    max_future_q: float
    q_before: float
    q_after: float


@dataclass
class QTable:
    """Per-topic Q-values with an append-only update history."""

    q: dict[str, float]
    history: list[QUpdateEvent] = field(default_factory=list)

    def __post_init__(self):
        for label, value in self.q.items():
            if not math.isfinite(value):
                raise AgentError(f"non-finite Q-value for {label!r}")

    def apply(self, iteration: int, label: str, reward: float,
              future_q: float, alpha: float, gamma: float) -> QUpdateEvent:
        before = self.q[label]
        after = q_update(before, reward, future_q, alpha, gamma)
        self.q[label] = after
        event = QUpdateEvent(iteration, label, reward, future_q, before, after)
        self.history.append(event)
        return event

    def copy(self) -> "QTable":
        return QTable(q=dict(self.q), history=list(self.history))


@dataclass(frozen=True)
class DocTopicMatrix:
    """Cosine similarities between validation documents and topic rows."""

    sims: np.ndarray  # D x K in [0, 1]
    doc_ids: tuple[str, ...]
    topic_labels: tuple[str, ...]
    empty_docs: tuple[str, ...] = ()  # fully out-of-vocabulary, zero rows

    def __post_init__(self):
        sims = np.asarray(self.sims, dtype=float)
        object.__setattr__(self, "sims", sims)
        if sims.shape != (len(self.doc_ids), len(self.topic_labels)):
            raise AgentError("sims shape inconsistent with ids/labels")
        if sims.size and (sims.min() < -1e-12 or sims.max() > 1 + 1e-12):
            raise AgentError("similarities must lie in [0, 1]")
        sims.setflags(write=False)


def approximate_reward(
    bundle: MetricsBundle, topic_index: int, coeffs: RewardCoefficients | None = None
) -> float:
    """Weighted blend of the bundle fields for one topic."""
    coeffs = coeffs or RewardCoefficients()
    if not (0 <= topic_index < bundle.k):
        raise AgentError(f"topic index {topic_index} out of range")
    sim = float(bundle.corresponding_similarity[topic_index])
    if coeffs.use_divergence:
        sim = 1.0 - sim
    if coeffs.entropy_mode == "delta":
        ent = float(bundle.entropy_delta[topic_index])
    else:
        ent = float(bundle.entropy_new[topic_index])
    return (
        coeffs.lambda1 * float(bundle.magnitude[topic_index])
        + coeffs.lambda2 * sim
        + coeffs.lambda3 * ent
        + coeffs.lambda4 * float(bundle.adns[topic_index])
    )


def init_qtable(model: TopicModel) -> QTable:
    """Seed Q-values with the Euclidean norm of each topic row."""
    norms = np.linalg.norm(model.topic_word, axis=1)
    return QTable(q={label: float(n) for label, n in zip(model.topic_labels, norms)})


def q_update(q_current: float, reward: float, max_future_q: float,
             alpha: float, gamma: float) -> float:
    """(1 - alpha) * q + alpha * (reward + gamma * max_future_q)."""
    values = (q_current, reward, max_future_q, alpha, gamma)
    if not all(math.isfinite(x) for x in values):
        raise AgentError("q_update requires finite inputs")
    return (1.0 - alpha) * q_current + alpha * (reward + gamma * max_future_q)


def doc_topic_similarity(model: TopicModel, docs: Corpus) -> DocTopicMatrix:
    """Cosine of each document's term-count vector against each topic row.

    Documents are projected onto the model vocabulary; fully
    out-of-vocabulary documents get a zero row and are flagged.
    """
    if not docs.is_preprocessed:
        raise AgentError("validation documents must be preprocessed")
    vocab = model.vocabulary
    d = len(docs)
    counts = np.zeros((d, vocab.size))
    for i, toks in enumerate(docs.tokens):
        for tok in toks:
            if tok in vocab:
                counts[i, vocab.index(tok)] += 1.0

    doc_norms = np.linalg.norm(counts, axis=1)
    topic_norms = np.linalg.norm(model.topic_word, axis=1)
    denom = np.outer(doc_norms, topic_norms)
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = np.where(denom > 0, counts @ model.topic_word.T / np.where(denom > 0, denom, 1.0), 0.0)
    empty = tuple(doc.id for doc, n in zip(docs.documents, doc_norms) if n == 0)
    return DocTopicMatrix(
        sims=sims,
        doc_ids=tuple(doc.id for doc in docs.documents),
        topic_labels=tuple(model.topic_labels),
        empty_docs=empty,
    )


def base_reward(topic_index: int, matrix: DocTopicMatrix, config: AgentConfig) -> float:
    """Document-alignment reward for one topic under the configured mode."""
    if not (0 <= topic_index < len(matrix.topic_labels)):
        raise AgentError(f"topic index {topic_index} out of range")
    col = matrix.sims[:, topic_index]
    d = col.shape[0]
    if d < 1:
        raise AgentError("base_reward requires at least one document")
    t = config.sim_threshold
    if config.base_reward_mode == "indicator_mean":
        return float((col > t).sum() / d)
    if config.base_reward_mode == "thresholded_mean":
        above = col[col > t]
        return float(above.mean()) if above.size else 0.0
    top = np.sort(col)[::-1][: min(config.top_k_docs, d)]
    return float(top.mean())


def modified_reward(base: float, entropy_new_topic: float, lambda_entropy: float) -> float:
    """Validation reward plus the entropy exploration bonus."""
    values = (base, entropy_new_topic, lambda_entropy)
    if not all(math.isfinite(x) for x in values):
        raise AgentError("modified_reward requires finite inputs")
    return base + lambda_entropy * entropy_new_topic


def max_future_q(matrix: DocTopicMatrix, model: TopicModel, config: AgentConfig) -> float:
    """One scalar shared by all per-topic updates within an iteration:
    the best base reward attainable in the new state."""
    rewards = [base_reward(i, matrix, config) for i in range(len(matrix.topic_labels))]
    return float(max(rewards))


def select_topics(q: QTable | dict[str, float], top_n: int) -> list[str]:
    """Labels ranked by Q descending (label ascending on ties), truncated."""
    if top_n < 1:
        raise AgentError("top_n must be >= 1")
    values = q.q if isinstance(q, QTable) else q
    ranked = sorted(values, key=lambda label: (-values[label], label))
    return ranked[:top_n]


# ---------------------------------------------------------------------------
# Parameter sweep


@dataclass(frozen=True)
class SweepCell:
    label: str
    alpha: float
    lambda_entropy: float
    q_after: float
    selected: bool


@dataclass(frozen=True)
class SweepReport:
    """Topic x (alpha, lambda) table of updated Q-values with per-pair
    top-n selections; non-selected cells render blank."""

    pairs: tuple[tuple[float, float], ...]
    topic_labels: tuple[str, ...]
    q_after: np.ndarray  # len(labels) x len(pairs)
    selected: np.ndarray  # bool, same shape
    top_n: int

    def selection(self, pair_index: int) -> list[str]:
        mask = self.selected[:, pair_index]
        chosen = [
            (self.topic_labels[i], self.q_after[i, pair_index])
            for i in range(len(self.topic_labels))
            if mask[i]
        ]
        chosen.sort(key=lambda e: (-e[1], e[0]))
        return [label for label, _ in chosen]


@dataclass(frozen=True)
class SweepInputs:
    """Frozen pre-update state a sweep reruns from: per-topic current Q,
    base rewards, new-model entropies, and the shared future value."""

    topic_labels: tuple[str, ...]
    q_current: dict[str, float]
    base_rewards: dict[str, float]
    entropy_new: dict[str, float]
    future_q: float
    gamma: float = 0.9


def parameter_sweep(
    inputs: SweepInputs,
    alphas: list[float],
    lambdas: list[float],
    top_n: int = 5,
) -> SweepReport:
    """Rerun reward shaping and Q-updates for every (alpha, lambda) pair
    from the same pre-update state."""
    if not alphas or not lambdas:
        raise AgentError("sweep grids must be non-empty")
    labels = inputs.topic_labels
    pairs = tuple(
        (float(a), float(lam)) for a, lam in itertools.product(alphas, lambdas)
    )
    q_after = np.zeros((len(labels), len(pairs)))
    selected = np.zeros((len(labels), len(pairs)), dtype=bool)
    for p, (a, lam) in enumerate(pairs):
        updated = {}
        for label in labels:
            reward = modified_reward(inputs.base_rewards[label], inputs.entropy_new[label], lam)
            updated[label] = q_update(inputs.q_current[label], reward, inputs.future_q, a,
                                      inputs.gamma)
        chosen = set(select_topics(updated, top_n))
        for i, label in enumerate(labels):
            q_after[i, p] = updated[label]
            selected[i, p] = label in chosen
    return SweepReport(
        pairs=pairs,
        topic_labels=labels,
        q_after=q_after,
        selected=selected,
        top_n=top_n,
    )
