"""Expert-in-the-loop technology-landscape exploration.

Builds topic models from a document corpus, reweights them with expert
aspect keywords, and drives topic selection across iterations with a
tabular Q-learning loop validated against fresh documents.
"""

from .aspect import (
    AspectKeywords,
    ExclusionList,
    compute_tfidf,
    extract_aspect_keywords,
    normalize_weights,
)
from .agent import (
    AgentConfig,
    DocTopicMatrix,
    QTable,
    RewardCoefficients,
    approximate_reward,
    base_reward,
    doc_topic_similarity,
    init_qtable,
    max_future_q,
    modified_reward,
    parameter_sweep,
    q_update,
    select_topics,
)
from .corpus import (
    Corpus,
    Document,
    PreprocessConfig,
    SearchQuery,
    Vocabulary,
    filter_by_query,
    load_corpus,
    preprocess,
    relevance_filter,
)
from .metrics import (
    MetricsBundle,
    adns,
    compare_models,
    cosine_similarity,
    entropy,
    magnitude,
    normalize_sum,
)
from .session import (
    IterationRecord,
    LdaParams,
    SessionConfig,
    SessionState,
    SplitPlan,
    autopilot,
    create_session,
    create_session_from_model,
    load_session,
    record_decision,
    run_iteration,
    save_session,
)
from .topics import (
    DocTopicAssignment,
    TopicModel,
    apply_aspect,
    fit_lda,
    split_topics,
    top_words,
    topic_relevance_scores,
)

__version__ = "0.1.0"
