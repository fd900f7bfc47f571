"""The expert-in-the-loop session, driven step by step.

Opens a session over the bundled corpus, runs an iteration against fresh
validation documents, records a continue decision with an edited aspect,
runs a second iteration, and stops. Ends by replaying the bundled
golden-trajectory fixture whose Q-values land on published figures.
"""

from landscape.aspect import AspectKeywords, extract_aspect_keywords
from landscape.fixtures import aspect_corpus, mini_corpus, trajectory_plan, validation_corpus
from landscape.session import LdaParams, create_session, record_decision, run_iteration

corpus = mini_corpus()
state = create_session(corpus, lda_params=LdaParams(k=6, iterations=150, seed=42))
print(f"session {state.id}: status {state.status}")

protocols = extract_aspect_keywords(aspect_corpus("protocols"), label="protocols")
record = run_iteration(state, protocols, validation_corpus(2023))
print(f"\niteration 1 selected: {', '.join(record.selected_topics)}")
for label in record.selected_topics:
    print(
        f"  {label}: Q {record.q_before[label]:.4f} -> {record.q_after[label]:.4f} "
        f"(modified reward {record.modified_rewards[label]:.4f})"
    )

# the expert trims the aspect and continues
edited = AspectKeywords(
    entries=protocols.entries[:50], label="protocols (edited)"
)
record_decision(state, continue_=True, edited_aspect=edited, notes="narrowing focus")
print(f"\ndecision: continue with '{edited.label}'; status {state.status}")

record2 = run_iteration(state, None, validation_corpus(2024))
print(f"iteration 2 used aspect '{record2.aspect_label}'")
print(f"iteration 2 selected: {', '.join(record2.selected_topics)}")

record_decision(state, continue_=False, notes="novel pattern identified")
print(f"final status: {state.status}; novelty flag {state.iterations[-1].novelty_flag}")

print("\n--- golden trajectory fixture (published reward path) ---")
fixture_state = trajectory_plan().run()
first, second = fixture_state.iterations
for label in ("T19", "T32", "T39", "T21", "T33"):
    print(
        f"  {label}: {first.q_after[label]:.6f} -> {second.q_after[label]:.6f} "
        f"(change {second.q_after[label] - first.q_after[label]:+.3f})"
    )
