"""Reward-shaping sensitivity: the (learning rate, entropy bonus) sweep.

Reruns the last iteration's Q-updates from identical pre-update state
across a grid of alpha and lambda values and prints the topic-by-pair
table with per-pair top-5 membership, the reading behind the published
parameter-progression table.
"""

from landscape.aspect import extract_aspect_keywords
from landscape.fixtures import aspect_corpus, mini_corpus, validation_corpus
from landscape.reports import run_sweep, sweep_table
from landscape.session import LdaParams, autopilot, create_session

state = create_session(mini_corpus(), lda_params=LdaParams(k=6, iterations=150, seed=42))
aspects = [
    extract_aspect_keywords(aspect_corpus("protocols"), label="protocols"),
    extract_aspect_keywords(aspect_corpus("networks"), label="networks"),
]
autopilot(state, aspects, [validation_corpus(2023), validation_corpus(2024)])

alphas = [0.1, 0.15, 0.2, 0.25, 0.3]
lambdas = [0.5, 1.5, 2.5, 3.5, 4.5]
report = run_sweep(state, alphas, lambdas)

# show the diagonal pairs, one column per (alpha, lambda) pairing
diagonal = [(a, lam) for a, lam in zip(alphas, lambdas)]
pair_index = {pair: p for p, pair in enumerate(report.pairs)}
print("updated Q per topic; '-' marks cells outside that pair's top 5\n")
print(f"{'topic':<6}" + "".join(f"  a={a:<4} l={lam:<4}" for a, lam in diagonal))
for i, label in enumerate(report.topic_labels):
    cells = []
    for pair in diagonal:
        p = pair_index[pair]
        cells.append(f"{report.q_after[i, p]:>13.3f}" if report.selected[i, p] else f"{'-':>13}")
    print(f"{label:<6}" + "".join(cells))

print("\nper-pair top-5 selections along the diagonal:")
for pair in diagonal:
    p = pair_index[pair]
    print(f"  a={pair[0]:<5} l={pair[1]:<5} -> {', '.join(report.selection(p))}")

columns, rows = sweep_table(report)
print(f"\nfull export table: {len(rows)} topics x {len(columns) - 1} pairs")
