"""Topic-vector metrics and the two-model comparison bundle.

Magnitude, cosine similarity, entropy, sum-normalization, and the
absolute difference of normalized sums (ADNS), plus their assembly into
the per-topic bundle the learning agent consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MetricsError",
    "MetricsBundle",
    "magnitude",
    "cosine_similarity",
    "entropy",
    "normalize_sum",
    "adns",
    "compare_models",
]


class MetricsError(ValueError):
    pass


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise MetricsError("expected a 1-D weight vector")
    if not np.all(np.isfinite(arr)):
        raise MetricsError("weight vector contains non-finite entries")
    return arr


def magnitude(v) -> float:
    """Euclidean norm of a weight vector."""
    return float(np.linalg.norm(_as_vector(v)))


def cosine_similarity(v_a, v_b, zero_flags: list | None = None) -> float:
    """Dot product over the norm product; zero vectors yield 0.0.

    When ``zero_flags`` is given, a degenerate (zero-vector) comparison
    appends True to it so callers can surface the degeneracy.
    """
    a, b = _as_vector(v_a), _as_vector(v_b)
    if a.shape != b.shape:
        raise MetricsError("vectors must have the same length")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        if zero_flags is not None:
            zero_flags.append(True)
        return 0.0
    if zero_flags is not None:
        zero_flags.append(False)
    return float(np.dot(a, b) / (na * nb))


def normalize_sum(v) -> np.ndarray:
    """Divide by the element sum, turning weights into a distribution."""
    arr = _as_vector(v)
    if np.any(arr < 0):
        raise MetricsError("normalize_sum requires nonnegative entries")
    total = arr.sum()
    if total <= 0:
        raise MetricsError("cannot normalize a zero-sum vector")
    return arr / total


def entropy(v, base: str = "nat") -> float:
    """Shannon entropy of the sum-normalized vector (0*ln 0 = 0).

    ``base`` is ``"nat"`` (natural log, default) or ``"2"``.
    """
    p = normalize_sum(v)
    nonzero = p[p > 0]
    h = float(-(nonzero * np.log(nonzero)).sum())
    if base == "2":
        return h / float(np.log(2.0))
    if base != "nat":
        raise MetricsError(f"unknown entropy base {base!r}")
    return h


def adns(v_a, v_b) -> float:
    """L1 distance between the two sum-normalized vectors; range [0, 2]."""
    pa, pb = normalize_sum(v_a), normalize_sum(v_b)
    if pa.shape != pb.shape:
        raise MetricsError("vectors must have the same length")
    return float(np.abs(pa - pb).sum())


@dataclass(frozen=True)
class MetricsBundle:
    """Per-topic comparison of an old and a new topic model.

    ``similarity_matrix[i][j]`` is cosine(old topic i, new topic j);
    the remaining fields are per corresponding index pair. Degenerate
    (all-zero) rows are flagged and carry neutral values (0).
    """

    topic_labels: tuple[str, ...]
    similarity_matrix: np.ndarray
    corresponding_similarity: np.ndarray
    magnitude: np.ndarray  # of the NEW model's rows
    adns: np.ndarray
    entropy_old: np.ndarray
    entropy_new: np.ndarray
    entropy_delta: np.ndarray
    degenerate: tuple[bool, ...] = field(default=())
    entropy_base: str = "nat"

    @property
    def k(self) -> int:
        return len(self.topic_labels)


def compare_models(old, new, entropy_base: str = "nat") -> MetricsBundle:
    """Assemble the full bundle for two models over the same vocabulary."""
    from .topics import TopicModel  # local import to avoid a cycle

    if not isinstance(old, TopicModel) or not isinstance(new, TopicModel):
        raise MetricsError("compare_models expects two topic models")
    if old.k != new.k:
        raise MetricsError(f"topic count mismatch: {old.k} vs {new.k}")
    if old.vocabulary_hash != new.vocabulary_hash:
        raise MetricsError("models were built over different vocabularies")

    k = old.k
    a, b = old.topic_word, new.topic_word
    norms_a = np.linalg.norm(a, axis=1)
    norms_b = np.linalg.norm(b, axis=1)
    denom = np.outer(norms_a, norms_b)
    with np.errstate(invalid="ignore", divide="ignore"):
        sim = np.where(denom > 0, a @ b.T / np.where(denom > 0, denom, 1.0), 0.0)

    degenerate = tuple(bool(norms_a[i] == 0 or norms_b[i] == 0) for i in range(k))
    ent_old = np.zeros(k)
    ent_new = np.zeros(k)
    adns_vec = np.zeros(k)
    for i in range(k):
        sum_a, sum_b = a[i].sum(), b[i].sum()
        if sum_a > 0:
            ent_old[i] = entropy(a[i], base=entropy_base)
        if sum_b > 0:
            ent_new[i] = entropy(b[i], base=entropy_base)
        if sum_a > 0 and sum_b > 0:
            adns_vec[i] = adns(a[i], b[i])

    return MetricsBundle(
        topic_labels=tuple(new.topic_labels),
        similarity_matrix=sim,
        corresponding_similarity=np.diagonal(sim).copy(),
        magnitude=norms_b.copy(),
        adns=adns_vec,
        entropy_old=ent_old,
        entropy_new=ent_new,
        entropy_delta=ent_new - ent_old,
        degenerate=degenerate,
        entropy_base=entropy_base,
    )
