"""Building topic models: baseline, hierarchical split, aspect-weighted.

Fits the baseline model with collapsed Gibbs sampling, splits its topics
into subtopics proportionally to document mass, extracts weighted aspect
keywords from conference-style texts, and reweights the model with them.
"""

from landscape.aspect import ExclusionList, extract_aspect_keywords
from landscape.fixtures import aspect_corpus, mini_corpus
from landscape.topics import apply_aspect, fit_lda, split_topics, top_words, topic_relevance_scores

corpus = mini_corpus()

model, assignment = fit_lda(corpus, k=6, iterations=150, seed=3)
print(f"baseline model: {model.k} topics over {model.v} terms")
for i, label in enumerate(model.topic_labels):
    head = ", ".join(t for t, _ in top_words(model, i, 6))
    print(f"  {label}: {head}")

split = split_topics(model, assignment, corpus, total_subtopics=12, seed=3, iterations=100)
print(f"\nsplit model: {split.k} subtopics, labels {split.topic_labels[0]}..{split.topic_labels[-1]}")

exclusions = ExclusionList.from_words(["algorithm", "application"])
aspect = extract_aspect_keywords(
    aspect_corpus("protocols"), max_k=100, exclusions=exclusions, label="protocols"
)
print(f"\naspect '{aspect.label}' head keywords:")
for term, weight in aspect.entries[:5]:
    print(f"  {term:<10} {weight:.4f}")

weighted = apply_aspect(model, aspect, retain_factor=0.0)
print(f"\naspect-weighted model (strongest cell normalized to 1.0):")
for i, label in enumerate(weighted.topic_labels):
    head = ", ".join(f"{t}({w:.2f})" for t, w in top_words(weighted, i, 4))
    print(f"  {label}: {head}")

scores = topic_relevance_scores(model, aspect)
ranked = sorted(zip(model.topic_labels, scores), key=lambda e: -e[1])
print("\ntopic relevance to the aspect (dot product on the intersection):")
for label, score in ranked:
    print(f"  {label}: {score:.5f}")
