"""Corpus ingestion, boolean search filtering, and text preprocessing.

Loads exported bibliographic records (JSONL or CSV), filters them with a
boolean keyword query, and turns the surviving documents into stemmed
token streams over a shared vocabulary.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from ._porter import stem

__all__ = [
    "Document",
    "Vocabulary",
    "Corpus",
    "SearchQuery",
    "PreprocessConfig",
    "CorpusError",
    "load_corpus",
    "filter_by_query",
    "preprocess",
    "relevance_filter",
    "default_stopwords",
]


class CorpusError(ValueError):
    """Raised on malformed input files or corpus contract violations."""


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    abstract: str
    keywords: tuple[str, ...] = ()
    year: int | None = None
    source: str = ""

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if self.year is not None and not (1900 <= self.year <= 2100):
            raise CorpusError(f"document {self.id!r}: year {self.year} outside [1900, 2100]")

    def full_text(self) -> str:
        return " ".join([self.title, self.abstract, " ".join(self.keywords)])


@dataclass(frozen=True)
class Vocabulary:
    """Dense term index with per-term document frequencies."""

    terms: tuple[str, ...]
    doc_frequency: tuple[int, ...]

    def __post_init__(self):
        if len(self.terms) != len(self.doc_frequency):
            raise CorpusError("terms and doc_frequency length mismatch")

    @property
    def size(self) -> int:
        return len(self.terms)

    def index(self, term: str) -> int:
        return self._term_to_index[term]

    def __contains__(self, term: str) -> bool:
        return term in self._term_to_index

    @property
    def _term_to_index(self) -> dict[str, int]:
        cached = getattr(self, "_idx_cache", None)
        if cached is None:
            cached = {t: i for i, t in enumerate(self.terms)}
            object.__setattr__(self, "_idx_cache", cached)
        return cached

    def content_hash(self) -> str:
        import hashlib

        return hashlib.sha256("\n".join(self.terms).encode("utf-8")).hexdigest()


_EMPTY_VOCAB = Vocabulary(terms=(), doc_frequency=())


@dataclass(frozen=True)
class Corpus:
    """Documents plus (after preprocess) aligned token lists and a vocabulary."""

    documents: tuple[Document, ...]
    tokens: tuple[tuple[str, ...], ...] = ()
    vocabulary: Vocabulary = _EMPTY_VOCAB

    def __post_init__(self):
        seen: dict[str, int] = {}
        for i, doc in enumerate(self.documents):
            if doc.id in seen:
                raise CorpusError(
                    f"duplicate document id {doc.id!r} (records {seen[doc.id] + 1} and {i + 1})"
                )
            seen[doc.id] = i
        if self.tokens and len(self.tokens) != len(self.documents):
            raise CorpusError("tokens list length must equal documents list length")

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def is_preprocessed(self) -> bool:
        return bool(self.tokens) or (not self.documents and self.vocabulary.size == 0)

    @property
    def empty_doc_ids(self) -> tuple[str, ...]:
        """Documents reduced to zero tokens by preprocessing (retained, flagged)."""
        if not self.tokens:
            return ()
        return tuple(d.id for d, t in zip(self.documents, self.tokens) if not t)

    def subset(self, indices: Sequence[int]) -> "Corpus":
        docs = tuple(self.documents[i] for i in indices)
        if not self.tokens:
            return Corpus(documents=docs)
        toks = tuple(self.tokens[i] for i in indices)
        return Corpus(documents=docs, tokens=toks, vocabulary=_build_vocabulary(toks))


# ---------------------------------------------------------------------------
# Boolean search queries


@dataclass(frozen=True)
class _Literal:
    term: str


@dataclass(frozen=True)
class _Node:
    op: str  # "and" | "or"
    children: tuple


@dataclass(frozen=True)
class SearchQuery:
    """Boolean AND/OR tree over word-boundary term literals."""

    expression: _Literal | _Node

    @staticmethod
    def parse(text: str) -> "SearchQuery":
        return SearchQuery(expression=_parse_query(text))

    def literals(self) -> tuple[str, ...]:
        out: list[str] = []

        def walk(node):
            if isinstance(node, _Literal):
                out.append(node.term)
            else:
                for c in node.children:
                    walk(c)

        walk(self.expression)
        # de-duplicate preserving first appearance
        seen = set()
        uniq = []
        for t in out:
            if t not in seen:
                seen.add(t)
                uniq.append(t)
        return tuple(uniq)

    def matches(self, text: str) -> bool:
        folded = text.casefold()

        def ev(node) -> bool:
            if isinstance(node, _Literal):
                return _literal_matches(node.term, folded)
            if node.op == "and":
                return all(ev(c) for c in node.children)
            return any(ev(c) for c in node.children)

        return ev(self.expression)


def _literal_matches(term: str, folded_text: str) -> bool:
    pattern = r"\b" + re.escape(term.casefold()) + r"\b"
    return re.search(pattern, folded_text) is not None


_QUERY_TOKEN = re.compile(r"\(|\)|\"[^\"]*\"|[^\s()]+")


def _parse_query(text: str):
    tokens = _QUERY_TOKEN.findall(text)
    if not tokens:
        raise CorpusError("empty search query")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_or():
        left = parse_and()
        parts = [left]
        while peek() is not None and peek().upper() == "OR":
            take()
            parts.append(parse_and())
        return parts[0] if len(parts) == 1 else _Node("or", tuple(parts))

    def parse_and():
        left = parse_atom()
        parts = [left]
        while peek() is not None and peek().upper() == "AND":
            take()
            parts.append(parse_atom())
        return parts[0] if len(parts) == 1 else _Node("and", tuple(parts))

    def parse_atom():
        tok = peek()
        if tok is None:
            raise CorpusError("search query ended unexpectedly")
        if tok == "(":
            take()
            node = parse_or()
            if peek() != ")":
                raise CorpusError("unbalanced parenthesis in search query")
            take()
            return node
        if tok == ")":
            raise CorpusError("unbalanced parenthesis in search query")
        if tok.upper() in ("AND", "OR"):
            raise CorpusError(f"misplaced operator {tok!r} in search query")
        take()
        return _Literal(tok.strip('"'))

    node = parse_or()
    if pos != len(tokens):
        raise CorpusError("trailing tokens in search query")
    return node


# ---------------------------------------------------------------------------
# Loading


_REQUIRED_FIELDS = ("id", "title", "abstract")


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Load documents from a JSONL or CSV export, order preserved."""
    path = Path(path)
    if format not in ("jsonl", "csv"):
        raise CorpusError(f"unknown corpus format {format!r}")
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    records = _read_jsonl(path) if format == "jsonl" else _read_csv(path)
    if not records:
        raise CorpusError(f"no records in {path}")
    docs = []
    for lineno, rec in records:
        for fld in _REQUIRED_FIELDS:
            if fld not in rec or rec[fld] is None:
                raise CorpusError(f"{path}:{lineno}: missing required field {fld!r}")
        year = rec.get("year")
        if year in ("", None):
            year = None
        else:
            try:
                year = int(year)
            except (TypeError, ValueError):
                raise CorpusError(f"{path}:{lineno}: year {year!r} is not an integer")
        keywords = rec.get("keywords") or ()
        if isinstance(keywords, str):
            keywords = tuple(k.strip() for k in keywords.split(";") if k.strip())
        docs.append(
            Document(
                id=str(rec["id"]),
                title=str(rec["title"]),
                abstract=str(rec["abstract"]),
                keywords=tuple(str(k) for k in keywords),
                year=year,
                source=str(rec.get("source") or ""),
            )
        )
    return Corpus(documents=tuple(docs))


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON record ({exc.msg})")
            if not isinstance(rec, dict):
                raise CorpusError(f"{path}:{lineno}: record is not an object")
            records.append((lineno, rec))
    return records


def _read_csv(path: Path) -> list[tuple[int, dict]]:
    records = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for lineno, row in enumerate(reader, start=2):
            if row.get(None):
                raise CorpusError(f"{path}:{lineno}: malformed CSV row (extra columns)")
            records.append((lineno, row))
    return records


# ---------------------------------------------------------------------------
# Filtering


def filter_by_query(corpus: Corpus, query: SearchQuery) -> Corpus:
    """Keep documents whose title+abstract+keywords satisfy the boolean query."""
    keep = [i for i, d in enumerate(corpus.documents) if query.matches(d.full_text())]
    return corpus.subset(keep)


def relevance_filter(corpus: Corpus, query: SearchQuery, min_hits: int) -> Corpus:
    """Keep documents matching at least ``min_hits`` distinct query literals."""
    literals = query.literals()
    keep = []
    for i, doc in enumerate(corpus.documents):
        folded = doc.full_text().casefold()
        hits = sum(1 for t in literals if _literal_matches(t, folded))
        if hits >= min_hits:
            keep.append(i)
    return corpus.subset(keep)


# ---------------------------------------------------------------------------
# Preprocessing


@dataclass(frozen=True)
class PreprocessConfig:
    min_len: int = 3
    stopwords: frozenset[str] = field(default_factory=lambda: default_stopwords())
    extra_stopwords: tuple[str, ...] = ()

    def all_stopwords(self) -> frozenset[str]:
        return self.stopwords | frozenset(w.lower() for w in self.extra_stopwords)


def default_stopwords() -> frozenset[str]:
    text = resources.files("landscape.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a one-word-per-line stopword file."""
    return frozenset(
        w.strip().lower() for w in Path(path).read_text("utf-8").splitlines() if w.strip()
    )


_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def tokenize(text: str, config: PreprocessConfig | None = None) -> list[str]:
    """Lowercase, split on non-alphanumerics, length/stopword filter, stem."""
    config = config or PreprocessConfig()
    stops = config.all_stopwords()
    out = []
    for raw in _TOKEN_SPLIT.split(text.lower()):
        if len(raw) < config.min_len or raw in stops:
            continue
        out.append(stem(raw))
    return out


def preprocess(corpus: Corpus, config: PreprocessConfig | None = None) -> Corpus:
    """Tokenize every document and build the shared vocabulary.

    Documents reduced to zero tokens are retained (see
    :attr:`Corpus.empty_doc_ids`) so document indices stay aligned.
    """
    config = config or PreprocessConfig()
    token_lists = tuple(tuple(tokenize(d.full_text(), config)) for d in corpus.documents)
    return Corpus(
        documents=corpus.documents,
        tokens=token_lists,
        vocabulary=_build_vocabulary(token_lists),
    )


def _build_vocabulary(token_lists: Iterable[tuple[str, ...]]) -> Vocabulary:
    df: dict[str, int] = {}
    for toks in token_lists:
        for term in set(toks):
            df[term] = df.get(term, 0) + 1
    terms = tuple(sorted(df))
    return Vocabulary(terms=terms, doc_frequency=tuple(df[t] for t in terms))
