"""The iteration state machine driving the expert-in-the-loop exploration.

A session holds the current and previous topic models, runs one
aspect-application + metric-comparison + selection + reward + Q-update
pass per iteration, records every number it produced, and persists the
whole run as a deterministic directory of JSON/CSV files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .agent import (
    AgentConfig,
    AgentError,
    DocTopicMatrix,
    QTable,
    QUpdateEvent,
    RewardCoefficients,
    approximate_reward,
    base_reward,
    doc_topic_similarity,
    init_qtable,
    max_future_q,
    modified_reward,
    q_update,
    select_topics,
)
from .aspect import AspectKeywords
from .corpus import Corpus
from .metrics import MetricsBundle, compare_models
from .topics import (
    DocTopicAssignment,
    TopicModel,
    apply_aspect,
    fit_lda,
    load_model,
    save_model,
    split_topics,
)

__all__ = [
    "SessionError",
    "SessionConfig",
    "LdaParams",
    "SplitPlan",
    "IterationRecord",
    "SessionState",
    "create_session",
    "create_session_from_model",
    "run_iteration",
    "record_decision",
    "autopilot",
    "save_session",
    "load_session",
    "sessions_equal",
]


class SessionError(ValueError):
    pass


@dataclass(frozen=True)
class LdaParams:
    k: int = 6
    alpha_dir: float | None = None
    beta_dir: float = 0.01
    iterations: int = 200
    seed: int = 0


@dataclass(frozen=True)
class SplitPlan:
    total_subtopics: int
    iterations: int = 200


@dataclass(frozen=True)
class SessionConfig:
    agent: AgentConfig = field(default_factory=AgentConfig)
    coeffs: RewardCoefficients = field(default_factory=RewardCoefficients)
    retain_factor: float = 0.0
    normalize: str = "global"
    entropy_base: str = "nat"


@dataclass
class IterationRecord:
    index: int
    aspect_label: str
    aspect_entries: list[list]
    selected_topics: list[str]
    approx_rewards: dict[str, float]
    provisional_q: dict[str, float]
    base_rewards: dict[str, float]
    modified_rewards: dict[str, float]
    max_future_q: float
    q_before: dict[str, float]
    q_after: dict[str, float]
    model_old_id: str
    model_new_id: str
    validation_ref: str = ""
    novelty_flag: bool = False
    expert_notes: str = ""


@dataclass
class SessionState:
    id: str
    config: SessionConfig
    ctp1: TopicModel
    ctp2: TopicModel | None
    qtable: QTable
    iterations: list[IterationRecord] = field(default_factory=list)
    status: str = "awaiting_aspect"
    corpus_ref: str = ""
    staged_aspect: AspectKeywords | None = None
    models: dict[str, TopicModel] = field(default_factory=dict)
    bundles: dict[int, MetricsBundle] = field(default_factory=dict)
    doc_matrices: dict[int, DocTopicMatrix] = field(default_factory=dict)

    def lineage_chain(self) -> list[str]:
        """Model ids from the active CTP back to the fitted root."""
        chain = []
        current: TopicModel | None = self.ctp2 or self.ctp1
        while current is not None:
            chain.append(current.id)
            parent_id = current.lineage[0] if current.lineage else None
            current = self.models.get(parent_id) if parent_id else None
        return chain

    def require_status(self, *allowed: str) -> None:
        if self.status not in allowed:
            raise SessionError(
                f"operation not allowed in status {self.status!r} (needs {' or '.join(allowed)})"
            )


def _session_id(model_id: str, config: SessionConfig) -> str:
    digest = hashlib.sha256(
        (model_id + json.dumps(asdict(config), sort_keys=True)).encode("utf-8")
    ).hexdigest()[:12]
    return f"sess-{digest}"


def create_session(
    corpus: Corpus,
    lda_params: LdaParams | None = None,
    split_plan: SplitPlan | None = None,
    config: SessionConfig | None = None,
    corpus_ref: str = "",
) -> SessionState:
    """Fit the starting model (flat, or split per plan) and open the loop."""
    if not corpus.is_preprocessed:
        raise SessionError("create_session requires a preprocessed corpus")
    lda_params = lda_params or LdaParams()
    config = config or SessionConfig()
    model, assignment = fit_lda(
        corpus,
        k=lda_params.k,
        alpha_dir=lda_params.alpha_dir,
        beta_dir=lda_params.beta_dir,
        iterations=lda_params.iterations,
        seed=lda_params.seed,
    )
    if split_plan is not None:
        model = split_topics(
            model,
            assignment,
            corpus,
            total_subtopics=split_plan.total_subtopics,
            seed=lda_params.seed,
            alpha_dir=lda_params.alpha_dir,
            beta_dir=lda_params.beta_dir,
            iterations=split_plan.iterations,
        )
    return create_session_from_model(model, config=config, corpus_ref=corpus_ref)


def create_session_from_model(
    model: TopicModel, config: SessionConfig | None = None, corpus_ref: str = ""
) -> SessionState:
    """Open a session around an existing initial model (replays, fixtures)."""
    config = config or SessionConfig()
    state = SessionState(
        id=_session_id(model.id, config),
        config=config,
        ctp1=model,
        ctp2=None,
        qtable=init_qtable(model),
        corpus_ref=corpus_ref,
    )
    state.models[model.id] = model
    return state


def _promote(state: SessionState) -> None:
    if state.ctp2 is None:
        raise SessionError("no refined model to promote")
    state.ctp1 = state.ctp2
    state.ctp2 = None


def run_iteration(
    state: SessionState,
    aspect: AspectKeywords | None,
    validation_docs: Corpus,
    reward_override: dict[str, float] | None = None,
    future_q_override: float | None = None,
    validation_ref: str = "",
) -> IterationRecord:
    """One full pass: aspect application, comparison, selection, rewards,
    Q-updates. Leaves the session awaiting the expert's decision.

    Calling this while a decision is pending performs an implicit
    continue (the previous refined model is promoted first).
    ``reward_override`` substitutes expert-supplied modified rewards per
    label; ``future_q_override`` pins the shared future value.
    """
    state.require_status("awaiting_aspect", "awaiting_decision")
    implicit_continue = state.status == "awaiting_decision"
    base_model = state.ctp2 if implicit_continue else state.ctp1
    assert base_model is not None

    aspect = aspect or state.staged_aspect
    if aspect is None:
        raise SessionError("no aspect supplied and none staged")
    if not validation_docs.is_preprocessed or len(validation_docs) == 0:
        raise SessionError("validation corpus must be preprocessed and non-empty")

    cfg = state.config
    agent = cfg.agent
    prev_status, state.status = state.status, "running"
    try:
        index = len(state.iterations) + 1
        ctp2 = apply_aspect(
            base_model, aspect, retain_factor=cfg.retain_factor, normalize=cfg.normalize
        )

        # First iteration seeds the table with the refined model's row
        # magnitudes; later iterations carry values forward.
        qtable = init_qtable(ctp2) if index == 1 else state.qtable.copy()

        bundle = compare_models(base_model, ctp2, entropy_base=cfg.entropy_base)

        labels = list(ctp2.topic_labels)
        approx = {
            label: approximate_reward(bundle, i, cfg.coeffs)
            for i, label in enumerate(labels)
        }
        best_known = max(qtable.q.values())
        provisional = {
            label: q_update(qtable.q[label], approx[label], best_known,
                            agent.alpha, agent.gamma)
            for label in labels
        }
        selected = select_topics(provisional, agent.top_n)

        matrix = doc_topic_similarity(ctp2, validation_docs)
        bases = {label: base_reward(i, matrix, agent) for i, label in enumerate(labels)}
        if future_q_override is not None:
            shared_future = float(future_q_override)
        elif agent.future_q_mode == "per_topic":
            shared_future = None  # each topic uses its own base reward
        else:
            shared_future = max_future_q(matrix, ctp2, agent)

        modified = {}
        for i, label in enumerate(labels):
            if reward_override is not None and label in reward_override:
                modified[label] = float(reward_override[label])
            else:
                modified[label] = modified_reward(
                    bases[label], float(bundle.entropy_new[i]), agent.lambda_entropy
                )

        q_before = dict(qtable.q)
        to_update = labels if agent.update_all_topics else selected
        applied_futures = []
        for label in to_update:
            topic_future = bases[label] if shared_future is None else shared_future
            applied_futures.append(topic_future)
            qtable.apply(index, label, modified[label], topic_future,
                         agent.alpha, agent.gamma)

        record = IterationRecord(
            index=index,
            aspect_label=aspect.label,
            aspect_entries=[[t, w] for t, w in aspect.entries],
            selected_topics=list(selected),
            approx_rewards=approx,
            provisional_q=provisional,
            base_rewards=bases,
            modified_rewards=modified,
            max_future_q=(
                shared_future if shared_future is not None
                else max(applied_futures, default=0.0)
            ),
            q_before=q_before,
            q_after=dict(qtable.q),
            model_old_id=base_model.id,
            model_new_id=ctp2.id,
            validation_ref=validation_ref,
        )
    except Exception:
        state.status = prev_status
        raise

    # Commit: the iteration succeeded, mutate the session in one place.
    if implicit_continue:
        state.ctp1 = base_model
    state.ctp2 = ctp2
    state.models[ctp2.id] = ctp2
    state.qtable = qtable
    state.bundles[index] = bundle
    state.doc_matrices[index] = matrix
    state.iterations.append(record)
    state.staged_aspect = None
    state.status = "awaiting_decision"
    return record


def record_decision(
    state: SessionState,
    continue_: bool,
    edited_aspect: AspectKeywords | None = None,
    notes: str = "",
) -> SessionState:
    """Expert verdict: stop (novel patterns found) or continue, optionally
    staging an edited aspect for the next iteration."""
    state.require_status("awaiting_decision")
    last = state.iterations[-1]
    if notes:
        last.expert_notes = notes
    if not continue_:
        last.novelty_flag = True
        state.status = "ended"
        return state
    _promote(state)
    state.staged_aspect = edited_aspect
    state.status = "awaiting_aspect"
    return state


def autopilot(
    state: SessionState,
    aspects: list[AspectKeywords],
    validation_corpora: list[Corpus],
    max_iterations: int | None = None,
    epsilon: float = 0.0,
    reward_overrides: list[dict[str, float] | None] | None = None,
    future_q_overrides: list[float | None] | None = None,
    validation_refs: list[str] | None = None,
) -> SessionState:
    """Run iterations headlessly, always continuing, until the aspect list
    is exhausted, ``max_iterations`` is reached, or the largest Q change
    drops below ``epsilon``."""
    if not aspects or len(aspects) != len(validation_corpora):
        raise SessionError("need equal-length, non-empty aspect/validation lists")
    if reward_overrides is not None and len(reward_overrides) != len(aspects):
        raise SessionError("reward_overrides length must match aspects")
    if future_q_overrides is not None and len(future_q_overrides) != len(aspects):
        raise SessionError("future_q_overrides length must match aspects")

    limit = len(aspects) if max_iterations is None else min(max_iterations, len(aspects))
    for i in range(limit):
        record = run_iteration(
            state,
            aspects[i],
            validation_corpora[i],
            reward_override=reward_overrides[i] if reward_overrides else None,
            future_q_override=future_q_overrides[i] if future_q_overrides else None,
            validation_ref=validation_refs[i] if validation_refs else "",
        )
        deltas = [
            abs(record.q_after[label] - record.q_before[label])
            for label in record.q_after
        ]
        stalled = max(deltas) < epsilon
        is_last = i == limit - 1
        record_decision(state, continue_=not (is_last or stalled))
        if is_last or stalled:
            break
    return state


# ---------------------------------------------------------------------------
# Persistence
#
# Layout: manifest.json, models/<id>.{json,csv}, qtable.json,
# iterations/<n>.json, matrices/<n>_docsim.csv; every file hash is
# recorded in the manifest.


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _bundle_payload(bundle: MetricsBundle) -> dict:
    return {
        "topic_labels": list(bundle.topic_labels),
        "similarity_matrix": [[float(x) for x in row] for row in bundle.similarity_matrix],
        "corresponding_similarity": [float(x) for x in bundle.corresponding_similarity],
        "magnitude": [float(x) for x in bundle.magnitude],
        "adns": [float(x) for x in bundle.adns],
        "entropy_old": [float(x) for x in bundle.entropy_old],
        "entropy_new": [float(x) for x in bundle.entropy_new],
        "entropy_delta": [float(x) for x in bundle.entropy_delta],
        "degenerate": list(bundle.degenerate),
        "entropy_base": bundle.entropy_base,
    }


def _bundle_from_payload(payload: dict) -> MetricsBundle:
    return MetricsBundle(
        topic_labels=tuple(payload["topic_labels"]),
        similarity_matrix=np.asarray(payload["similarity_matrix"], dtype=float),
        corresponding_similarity=np.asarray(payload["corresponding_similarity"], dtype=float),
        magnitude=np.asarray(payload["magnitude"], dtype=float),
        adns=np.asarray(payload["adns"], dtype=float),
        entropy_old=np.asarray(payload["entropy_old"], dtype=float),
        entropy_new=np.asarray(payload["entropy_new"], dtype=float),
        entropy_delta=np.asarray(payload["entropy_delta"], dtype=float),
        degenerate=tuple(bool(x) for x in payload["degenerate"]),
        entropy_base=payload["entropy_base"],
    )


def save_session(state: SessionState, directory: str | Path) -> Path:
    """Write the session directory; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "models").mkdir(exist_ok=True)
    (directory / "iterations").mkdir(exist_ok=True)
    (directory / "matrices").mkdir(exist_ok=True)

    written: list[Path] = []
    for model in state.models.values():
        written.extend(save_model(model, directory / "models"))

    qtable_path = directory / "qtable.json"
    qtable_path.write_text(
        _dump_json(
            {
                "q": {k: float(v) for k, v in state.qtable.q.items()},
                "history": [asdict(e) for e in state.qtable.history],
            }
        ),
        "utf-8",
    )
    written.append(qtable_path)

    for record in state.iterations:
        payload = asdict(record)
        bundle = state.bundles.get(record.index)
        payload["bundle"] = _bundle_payload(bundle) if bundle else None
        rec_path = directory / "iterations" / f"{record.index}.json"
        rec_path.write_text(_dump_json(payload), "utf-8")
        written.append(rec_path)

        matrix = state.doc_matrices.get(record.index)
        if matrix is not None:
            mat_path = directory / "matrices" / f"{record.index}_docsim.csv"
            lines = ["doc_id," + ",".join(matrix.topic_labels)]
            for doc_id, row in zip(matrix.doc_ids, matrix.sims):
                lines.append(doc_id + "," + ",".join(repr(float(x)) for x in row))
            if matrix.empty_docs:
                lines.append("# empty_docs: " + " ".join(matrix.empty_docs))
            mat_path.write_text("\n".join(lines) + "\n", "utf-8")
            written.append(mat_path)

    manifest = {
        "id": state.id,
        "status": state.status,
        "corpus_ref": state.corpus_ref,
        "config": asdict(state.config),
        "ctp1": state.ctp1.id,
        "ctp2": state.ctp2.id if state.ctp2 else None,
        "iteration_count": len(state.iterations),
        "staged_aspect": (
            {
                "label": state.staged_aspect.label,
                "entries": [[t, w] for t, w in state.staged_aspect.entries],
                "source_ids": list(state.staged_aspect.source_ids),
            }
            if state.staged_aspect
            else None
        ),
        "hashes": {
            str(p.relative_to(directory)): _sha256(p) for p in sorted(written)
        },
    }
    manifest_path = directory / "manifest.json"
    manifest_path.write_text(_dump_json(manifest), "utf-8")
    return manifest_path


def load_session(directory: str | Path) -> SessionState:
    """Reconstruct a session from disk, verifying every recorded hash."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise SessionError(f"missing session manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise SessionError(f"corrupt session manifest {manifest_path}: {exc.msg}")

    for rel, expected in manifest["hashes"].items():
        path = directory / rel
        if not path.exists():
            raise SessionError(f"session file missing: {path}")
        actual = _sha256(path)
        if actual != expected:
            raise SessionError(f"hash mismatch for {path}")

    models: dict[str, TopicModel] = {}
    for header in sorted((directory / "models").glob("*.json")):
        model = load_model(header)
        models[model.id] = model

    qtable_payload = json.loads((directory / "qtable.json").read_text("utf-8"))
    qtable = QTable(
        q={k: float(v) for k, v in qtable_payload["q"].items()},
        history=[QUpdateEvent(**e) for e in qtable_payload["history"]],
    )

    cfg = manifest["config"]
    config = SessionConfig(
        agent=AgentConfig(**cfg["agent"]),
        coeffs=RewardCoefficients(**cfg["coeffs"]),
        retain_factor=cfg["retain_factor"],
        normalize=cfg["normalize"],
        entropy_base=cfg["entropy_base"],
    )

    state = SessionState(
        id=manifest["id"],
        config=config,
        ctp1=models[manifest["ctp1"]],
        ctp2=models[manifest["ctp2"]] if manifest.get("ctp2") else None,
        qtable=qtable,
        status=manifest["status"],
        corpus_ref=manifest.get("corpus_ref", ""),
        models=models,
    )
    staged = manifest.get("staged_aspect")
    if staged:
        state.staged_aspect = AspectKeywords(
            entries=tuple((t, float(w)) for t, w in staged["entries"]),
            label=staged["label"],
            source_ids=tuple(staged.get("source_ids", ())),
        )

    for rec_path in sorted(
        (directory / "iterations").glob("*.json"), key=lambda p: int(p.stem)
    ):
        payload = json.loads(rec_path.read_text("utf-8"))
        bundle_payload = payload.pop("bundle", None)
        record = IterationRecord(**payload)
        state.iterations.append(record)
        if bundle_payload:
            state.bundles[record.index] = _bundle_from_payload(bundle_payload)

        mat_path = directory / "matrices" / f"{record.index}_docsim.csv"
        if mat_path.exists():
            lines = mat_path.read_text("utf-8").splitlines()
            labels = tuple(lines[0].split(",")[1:])
            doc_ids, rows = [], []
            empty: tuple[str, ...] = ()
            for line in lines[1:]:
                if line.startswith("# empty_docs:"):
                    empty = tuple(line.split(":", 1)[1].split())
                    continue
                parts = line.split(",")
                doc_ids.append(parts[0])
                rows.append([float(x) for x in parts[1:]])
            state.doc_matrices[record.index] = DocTopicMatrix(
                sims=np.asarray(rows, dtype=float),
                doc_ids=tuple(doc_ids),
                topic_labels=labels,
                empty_docs=empty,
            )
    return state


def sessions_equal(a: SessionState, b: SessionState) -> bool:
    """Structural equality over every persisted field."""
    if (a.id, a.status, a.corpus_ref) != (b.id, b.status, b.corpus_ref):
        return False
    if asdict(a.config) != asdict(b.config):
        return False
    if a.qtable.q != b.qtable.q or a.qtable.history != b.qtable.history:
        return False
    if [asdict(r) for r in a.iterations] != [asdict(r) for r in b.iterations]:
        return False
    if set(a.models) != set(b.models):
        return False
    for mid, model in a.models.items():
        other = b.models[mid]
        if (model.kind, model.topic_labels, model.lineage) != (
            other.kind,
            other.topic_labels,
            other.lineage,
        ):
            return False
        if not np.array_equal(model.topic_word, other.topic_word):
            return False
        if model.vocabulary != other.vocabulary:
            return False
    return True
