"""Screening a bibliographic export down to a modeling corpus.

Walks the ingestion path: load the bundled export, apply the boolean
search keywords, drop weakly-matching records, and preprocess the
survivors into stemmed tokens over a shared vocabulary.
"""

from landscape.corpus import SearchQuery, filter_by_query, preprocess, relevance_filter
from landscape.fixtures import mini_corpus

raw = mini_corpus(preprocessed=False)
print(f"loaded export: {len(raw)} records")

query = SearchQuery.parse("quantum AND (communication OR network)")
screened = filter_by_query(raw, query)
print(f"after boolean search keywords: {len(screened)} records")

focused = relevance_filter(screened, query, min_hits=2)
print(f"after relevance screening (>= 2 distinct literals): {len(focused)} records")

corpus = preprocess(focused)
print(f"vocabulary: {corpus.vocabulary.size} stemmed terms")
print(f"empty after preprocessing: {len(corpus.empty_doc_ids)} documents")

doc = corpus.documents[0]
print(f"\nexample record {doc.id} ({doc.year}, {doc.source})")
print(f"  title:  {doc.title}")
print(f"  tokens: {' '.join(corpus.tokens[0][:12])} ...")

top_df = sorted(
    zip(corpus.vocabulary.terms, corpus.vocabulary.doc_frequency),
    key=lambda e: -e[1],
)[:10]
print("\nhighest document frequency terms:")
for term, df in top_df:
    print(f"  {term:<12} {df}/{len(corpus)}")
