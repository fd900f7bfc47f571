import itertools

import pytest

from landscape._porter import stem
from landscape.corpus import (
    Corpus,
    CorpusError,
    Document,
    PreprocessConfig,
    SearchQuery,
    filter_by_query,
    load_corpus,
    preprocess,
    relevance_filter,
    tokenize,
)

from conftest import corpus_from_texts, write_jsonl


class TestStemmer:
    # Stems displayed in the domain vocabulary this pipeline is pinned to.
    VECTORS = {
        "security": "secur",
        "secure": "secur",
        "cryptography": "cryptographi",
        "entanglement": "entangl",
        "entangled": "entangl",
        "distribution": "distribut",
        "efficiency": "effici",
        "technology": "technolog",
        "technological": "technolog",
        "challenges": "challeng",
        "transmission": "transmiss",
        "verify": "verifi",
        "verified": "verifi",
        "verifies": "verifi",
        "independent": "independ",
        "optical": "optic",
        "protocols": "protocol",
        "photon": "photon",
        "function": "function",
        "computing": "comput",
        "measurement": "measur",
        "requirements": "requir",
        "application": "applic",
        "classic": "classic",
        "based": "base",
        "settings": "set",
        "shared": "share",
    }

    def test_pinned_vectors(self):
        for word, expected in self.VECTORS.items():
            assert stem(word) == expected, word

    def test_short_words_pass_through(self):
        assert stem("of") == "of"
        assert stem("qk") == "qk"


class TestLoadCorpus:
    def test_jsonl_roundtrip(self, tmp_path):
        path = write_jsonl(
            tmp_path / "c.jsonl",
            [
                {"id": "a", "title": "t1", "abstract": "x", "keywords": ["k"], "year": 2021,
                 "source": "scopus"},
                {"id": "b", "title": "t2", "abstract": "y"},
                {"id": "c", "title": "t3", "abstract": "z", "year": None},
            ],
        )
        corpus = load_corpus(path, format="jsonl")
        assert [d.id for d in corpus.documents] == ["a", "b", "c"]
        assert corpus.documents[0].keywords == ("k",)
        assert corpus.documents[1].year is None
        assert not corpus.is_preprocessed

    def test_empty_file_errors(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", "utf-8")
        with pytest.raises(CorpusError, match="no records"):
            load_corpus(path)

    def test_duplicate_id_reports_both_records(self, tmp_path):
        path = write_jsonl(
            tmp_path / "dup.jsonl",
            [{"id": "a", "title": "", "abstract": ""},
             {"id": "a", "title": "", "abstract": ""}],
        )
        with pytest.raises(CorpusError, match=r"'a' \(records 1 and 2\)"):
            load_corpus(path)

    def test_malformed_line_reports_lineno(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "title": "", "abstract": ""}\n{oops\n', "utf-8")
        with pytest.raises(CorpusError, match="bad.jsonl:2"):
            load_corpus(path)

    def test_missing_required_field(self, tmp_path):
        path = write_jsonl(tmp_path / "m.jsonl", [{"id": "a", "title": "t"}])
        with pytest.raises(CorpusError, match="abstract"):
            load_corpus(path)

    def test_csv_with_semicolon_keywords(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text(
            "id,title,abstract,keywords,year,source\n"
            "a,T1,Quantum networks,qkd;photon,2020,wos\n"
            "b,T2,Entanglement,,,\n",
            "utf-8",
        )
        corpus = load_corpus(path, format="csv")
        assert corpus.documents[0].keywords == ("qkd", "photon")
        assert corpus.documents[1].year is None

    def test_year_bounds(self):
        with pytest.raises(CorpusError, match="year"):
            Document(id="a", title="", abstract="", year=1800)


class TestSearchQuery:
    def test_and_semantics(self):
        q = SearchQuery.parse("quantum AND network")
        doc = Document(id="a", title="quantum effects", abstract="")
        assert not filter_by_query(Corpus(documents=(doc,)), q).documents

    def test_paper_query_includes_quantum_network(self):
        q = SearchQuery.parse("quantum AND (communication OR network)")
        doc = Document(id="a", title="a quantum network testbed", abstract="")
        assert len(filter_by_query(Corpus(documents=(doc,)), q)) == 1

    def test_word_boundary_matching(self):
        q = SearchQuery.parse("quant")
        doc = Document(id="a", title="quantum", abstract="")
        assert not filter_by_query(Corpus(documents=(doc,)), q).documents

    def test_quoted_multiword_literal(self):
        q = SearchQuery.parse('"key distribution" AND quantum')
        doc = Document(id="a", title="Quantum key distribution", abstract="")
        assert len(filter_by_query(Corpus(documents=(doc,)), q)) == 1

    def test_malformed_queries_rejected(self):
        for bad in ("", "(quantum", "quantum AND", "AND quantum", "a b ) c"):
            with pytest.raises(CorpusError):
                SearchQuery.parse(bad)

    def test_brute_force_boolean_oracle(self):
        # ten synthetic docs vs a brute-force evaluation over term presence
        q = SearchQuery.parse("alpha AND (beta OR gamma)")
        vocab = ["alpha", "beta", "gamma", "delta"]
        texts = []
        for bits in itertools.islice(itertools.product([0, 1], repeat=4), 4, 14):
            texts.append(" ".join(w for w, b in zip(vocab, bits) if b))
        corpus = corpus_from_texts(texts)

        def brute(text):
            words = set(text.split())
            return "alpha" in words and ("beta" in words or "gamma" in words)

        expected = [d.id for d, t in zip(corpus.documents, texts) if brute(t)]
        got = [d.id for d in filter_by_query(corpus, q).documents]
        assert got == expected
        assert sum(1 for t in texts if brute(t)) == 4

    def test_filter_idempotent_and_order_preserving(self, toy_corpus):
        q = SearchQuery.parse("quantum OR photon")
        once = filter_by_query(toy_corpus, q)
        twice = filter_by_query(once, q)
        assert [d.id for d in once.documents] == [d.id for d in twice.documents]
        ids = [d.id for d in toy_corpus.documents]
        kept = [d.id for d in once.documents]
        assert kept == [i for i in ids if i in set(kept)]


class TestPreprocess:
    def test_published_token_forms(self):
        assert tokenize("Security of cryptography") == ["secur", "cryptographi"]
        assert tokenize("Entanglement distribution efficiency") == [
            "entangl", "distribut", "effici",
        ]

    def test_empty_document_retained_and_flagged(self):
        corpus = preprocess(corpus_from_texts(["", "quantum networks"]))
        assert len(corpus) == 2
        assert corpus.tokens[0] == ()
        assert corpus.empty_doc_ids == ("d1",)

    def test_min_len_drops_fragments(self):
        assert tokenize("qk of qkd") == ["qkd"]

    def test_extra_stopwords(self):
        cfg = PreprocessConfig(extra_stopwords=("quantum",))
        assert tokenize("quantum photon", cfg) == ["photon"]

    def test_idempotent_on_fixpoint_tokens(self, toy_corpus):
        for toks in toy_corpus.tokens:
            text = " ".join(toks)
            assert tokenize(text) == list(toks)

    def test_doc_frequency_matches_brute_force(self, toy_corpus):
        vocab = toy_corpus.vocabulary
        for term, df in zip(vocab.terms, vocab.doc_frequency):
            brute = sum(1 for toks in toy_corpus.tokens if term in toks)
            assert df == brute
            assert 1 <= df <= len(toy_corpus)

    def test_every_token_in_vocabulary(self, toy_corpus):
        for toks in toy_corpus.tokens:
            for tok in toks:
                assert tok in toy_corpus.vocabulary


class TestRelevanceFilter:
    def test_min_hits_zero_is_identity(self, toy_corpus):
        q = SearchQuery.parse("quantum AND security")
        out = relevance_filter(toy_corpus, q, min_hits=0)
        assert [d.id for d in out.documents] == [d.id for d in toy_corpus.documents]

    def test_min_hits_above_literal_count_empties(self, toy_corpus):
        q = SearchQuery.parse("quantum AND security")
        assert len(relevance_filter(toy_corpus, q, min_hits=3)) == 0

    def test_brute_force_literal_count_oracle(self, toy_corpus):
        q = SearchQuery.parse("quantum AND (security OR entanglement)")
        literals = ("quantum", "security", "entanglement")
        expected = []
        for doc in toy_corpus.documents:
            text = doc.full_text().casefold().split()
            hits = sum(1 for lit in literals if lit in text)
            if hits >= 2:
                expected.append(doc.id)
        out = relevance_filter(toy_corpus, q, min_hits=2)
        assert [d.id for d in out.documents] == expected

    def test_subset_rebuilds_vocabulary(self, toy_corpus):
        q = SearchQuery.parse("entanglement")
        out = relevance_filter(toy_corpus, q, min_hits=1)
        assert 0 < len(out) < len(toy_corpus)
        for term, df in zip(out.vocabulary.terms, out.vocabulary.doc_frequency):
            assert df == sum(1 for toks in out.tokens if term in toks)
