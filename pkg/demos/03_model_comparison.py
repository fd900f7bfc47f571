"""Comparing two model generations: similarity, magnitude, entropy, ADNS.

Builds the comparison bundle between a baseline and an aspect-weighted
model, then shows the per-topic metrics that feed the approximate reward,
and exports the heatmap-ready tables.
"""

from pathlib import Path

from landscape.agent import approximate_reward
from landscape.aspect import extract_aspect_keywords
from landscape.fixtures import aspect_corpus, mini_corpus
from landscape.metrics import compare_models
from landscape.reports import export_comparison_bundle, export_model_heatmap
from landscape.topics import apply_aspect, fit_lda

corpus = mini_corpus()
baseline, _ = fit_lda(corpus, k=6, iterations=150, seed=42)
aspect = extract_aspect_keywords(aspect_corpus("protocols"), label="protocols")
weighted = apply_aspect(baseline, aspect)

bundle = compare_models(baseline, weighted)
print(f"similarity matrix: {bundle.similarity_matrix.shape[0]}x"
      f"{bundle.similarity_matrix.shape[1]}")
print(f"{'topic':<6} {'magnitude':>9} {'cos-sim':>8} {'adns':>6} "
      f"{'H(old)':>7} {'H(new)':>7} {'dH':>7} {'approx R':>9}")
for i, label in enumerate(bundle.topic_labels):
    reward = approximate_reward(bundle, i)
    print(
        f"{label:<6} {bundle.magnitude[i]:>9.4f} "
        f"{bundle.corresponding_similarity[i]:>8.4f} {bundle.adns[i]:>6.3f} "
        f"{bundle.entropy_old[i]:>7.4f} {bundle.entropy_new[i]:>7.4f} "
        f"{bundle.entropy_delta[i]:>+7.4f} {reward:>9.4f}"
    )

out = Path("demo_output")
out.mkdir(exist_ok=True)
files = export_comparison_bundle(bundle, out / "comparison.csv", format="csv")
heatmap = export_model_heatmap(weighted, 8, out / "heatmap.csv")
print(f"\nwrote {', '.join(str(f) for f in [*files, heatmap])}")
print("(rows x columns tables; rendering is the consumer's job)")
