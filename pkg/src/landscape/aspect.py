"""Weighted aspect keyword extraction from expert-supplied texts.

Ranks the terms of a small aspect corpus (conference abstracts, workshop
notes) by mean tf-idf, filters them through an exclusion wordlist, and
packages the survivors as a weighted keyword set used to reweight topic
models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from ._porter import stem
from .corpus import Corpus

__all__ = [
    "AspectKeywords",
    "ExclusionList",
    "AspectError",
    "compute_tfidf",
    "extract_aspect_keywords",
    "normalize_weights",
]


class AspectError(ValueError):
    pass


@dataclass(frozen=True)
class ExclusionList:
    """Stemmed terms banned from aspect keyword sets."""

    terms: frozenset[str]

    @staticmethod
    def from_words(words) -> "ExclusionList":
        return ExclusionList(terms=frozenset(stem(w) for w in words))

    @staticmethod
    def from_file(path: str | Path) -> "ExclusionList":
        lines = Path(path).read_text("utf-8").splitlines()
        return ExclusionList.from_words(w.strip() for w in lines if w.strip())


EMPTY_EXCLUSIONS = ExclusionList(terms=frozenset())


@dataclass(frozen=True)
class AspectKeywords:
    """Weight-ranked stemmed keywords describing one domain aspect."""

    entries: tuple[tuple[str, float], ...]
    label: str = ""
    source_ids: tuple[str, ...] = ()

    def __post_init__(self):
        seen = set()
        prev = None
        for term, weight in self.entries:
            if term in seen:
                raise AspectError(f"duplicate aspect term {term!r}")
            seen.add(term)
            if not math.isfinite(weight) or weight < 0:
                raise AspectError(f"aspect weight for {term!r} must be finite and >= 0")
            key = (-weight, term)
            if prev is not None and key < prev:
                raise AspectError("aspect entries must be sorted by weight desc, term asc")
            prev = key

    def terms(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.entries)

    def weight_map(self) -> dict[str, float]:
        return dict(self.entries)

    def to_json(self) -> str:
        payload = {
            "label": self.label,
            "entries": [[t, w] for t, w in self.entries],
            "source_ids": list(self.source_ids),
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "AspectKeywords":
        # Hand-written files are accepted in any order; canonicalize here.
        payload = json.loads(text)
        entries = sorted(
            ((str(t), float(w)) for t, w in payload["entries"]),
            key=lambda e: (-e[1], e[0]),
        )
        return AspectKeywords(
            entries=tuple(entries),
            label=str(payload.get("label", "")),
            source_ids=tuple(payload.get("source_ids", ())),
        )

    @staticmethod
    def from_file(path: str | Path) -> "AspectKeywords":
        return AspectKeywords.from_json(Path(path).read_text("utf-8"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", "utf-8")


def compute_tfidf(aspect_corpus: Corpus) -> dict[str, float]:
    """Mean over documents of tf(t,d) * idf(t).

    tf(t,d) = count(t,d)/|d|, idf(t) = ln(N/df(t)); documents lacking a
    term contribute 0 to its mean.
    """
    if not aspect_corpus.is_preprocessed:
        raise AspectError("aspect corpus must be preprocessed")
    n_docs = len(aspect_corpus)
    nonempty = [t for t in aspect_corpus.tokens if t]
    if n_docs == 0 or not nonempty:
        raise AspectError("aspect corpus has no non-empty documents")

    vocab = aspect_corpus.vocabulary
    idf = {
        t: math.log(n_docs / df) for t, df in zip(vocab.terms, vocab.doc_frequency)
    }
    totals = {t: 0.0 for t in vocab.terms}
    for toks in aspect_corpus.tokens:
        if not toks:
            continue
        length = len(toks)
        counts: dict[str, int] = {}
        for tok in toks:
            counts[tok] = counts.get(tok, 0) + 1
        for term, c in counts.items():
            totals[term] += (c / length) * idf[term]
    return {t: totals[t] / n_docs for t in vocab.terms}


def extract_aspect_keywords(
    aspect_corpus: Corpus,
    max_k: int = 100,
    min_score: float = 0.0,
    exclusions: ExclusionList = EMPTY_EXCLUSIONS,
    label: str = "",
) -> AspectKeywords:
    """Top ``max_k`` tf-idf terms after exclusion and threshold filtering."""
    scores = compute_tfidf(aspect_corpus)
    kept = [
        (term, score)
        for term, score in scores.items()
        if term not in exclusions.terms and score >= min_score
    ]
    kept.sort(key=lambda e: (-e[1], e[0]))
    kept = kept[:max_k]
    if not kept:
        raise AspectError("aspect signal empty: no keywords survive filtering")
    return AspectKeywords(
        entries=tuple(kept),
        label=label,
        source_ids=tuple(d.id for d in aspect_corpus.documents),
    )


def normalize_weights(ak: AspectKeywords, mode: str = "max_one") -> AspectKeywords:
    """Rescale weights: ``max_one`` tops out at 1.0, ``sum_one`` sums to 1."""
    if mode not in ("max_one", "sum_one", "none"):
        raise AspectError(f"unknown normalization mode {mode!r}")
    if not ak.entries:
        raise AspectError("cannot normalize empty aspect")
    if mode == "none":
        return ak
    weights = [w for _, w in ak.entries]
    denom = max(weights) if mode == "max_one" else sum(weights)
    if denom <= 0:
        raise AspectError("cannot normalize all-zero aspect weights")
    entries = tuple((t, w / denom) for t, w in ak.entries)
    return AspectKeywords(entries=entries, label=ak.label, source_ids=ak.source_ids)
