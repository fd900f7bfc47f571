"""Tabular exporters over sessions and models.

Every export is byte-deterministic for a fixed session directory and is
available as CSV or JSON carrying identical values; rendering (heatmaps,
word clouds, charts) is left to the consumer.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import DocTopicMatrix, SweepInputs, SweepReport, parameter_sweep
from .corpus import Corpus
from .metrics import MetricsBundle
from .session import IterationRecord, SessionState
from .topics import TopicModel, top_words

__all__ = [
    "ReportError",
    "export_model_heatmap",
    "export_comparison_bundle",
    "export_q_report",
    "export_doc_matrix",
    "export_keyword_comparison",
    "export_sweep",
    "sweep_inputs_from",
    "run_sweep",
]

log = logging.getLogger("landscape.reports")


class ReportError(ValueError):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", "utf-8")


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")


def _table_payload(header: list[str], rows: list[list]) -> dict:
    return {"columns": header, "rows": [[c for c in row] for row in rows]}


def facts_to_files(path: str | Path, format: str, header: list[str], rows: list[list]) -> Path:
    path = Path(path)
    if format == "csv":
        _write_csv(path, header, rows)
    elif format == "json":
        _write_json(path, _table_payload(header, rows))
    else:
        raise ReportError(f"unknown format {format!r}")
    return path


# ---------------------------------------------------------------------------


def export_model_heatmap(
    model: TopicModel, top_words_per_topic: int, path: str | Path, format: str = "csv"
) -> Path:
    """Union of each topic's top words (rows) against topic labels (columns)."""
    if top_words_per_topic <= 0:
        log.warning("top_words_per_topic=%d produces an empty heatmap table",
                    top_words_per_topic)
        union: list[str] = []
    else:
        seen = set()
        for i in range(model.k):
            for term, _ in top_words(model, i, top_words_per_topic):
                seen.add(term)
        # order rows by the strongest cell anywhere, ties by term
        peak = {
            term: float(model.topic_word[:, model.vocabulary.index(term)].max())
            for term in seen
        }
        union = sorted(seen, key=lambda t: (-peak[t], t))
    header = ["term"] + list(model.topic_labels)
    rows = []
    for term in union:
        col = model.vocabulary.index(term)
        rows.append([term] + [float(x) for x in model.topic_word[:, col]])
    return facts_to_files(path, format, header, rows)


def export_comparison_bundle(
    bundle: MetricsBundle, path: str | Path, format: str = "csv"
) -> list[Path]:
    """The K x K similarity matrix plus the per-topic metric table."""
    path = Path(path)
    labels = list(bundle.topic_labels)
    matrix_header = ["topic"] + labels
    matrix_rows = [
        [labels[i]] + [float(x) for x in bundle.similarity_matrix[i]]
        for i in range(bundle.k)
    ]
    topic_header = [
        "label", "magnitude", "corresponding_similarity", "adns",
        "entropy_old", "entropy_new", "entropy_delta",
    ]
    topic_rows = [
        [
            labels[i],
            float(bundle.magnitude[i]),
            float(bundle.corresponding_similarity[i]),
            float(bundle.adns[i]),
            float(bundle.entropy_old[i]),
            float(bundle.entropy_new[i]),
            float(bundle.entropy_delta[i]),
        ]
        for i in range(bundle.k)
    ]
    if format == "csv":
        matrix_path = path.with_name(path.stem + "_matrix.csv")
        topics_path = path.with_name(path.stem + "_topics.csv")
        _write_csv(matrix_path, matrix_header, matrix_rows)
        _write_csv(topics_path, topic_header, topic_rows)
        return [matrix_path, topics_path]
    if format == "json":
        _write_json(
            path,
            {
                "matrix": _table_payload(matrix_header, matrix_rows),
                "topics": _table_payload(topic_header, topic_rows),
                "entropy_base": bundle.entropy_base,
            },
        )
        return [path]
    raise ReportError(f"unknown format {format!r}")


Q_REPORT_COLUMNS = [
    "label", "q_before", "approx_reward", "base_reward", "modified_reward",
    "max_future_q", "q_after", "selected",
]


def q_report_rows(record: IterationRecord) -> list[list]:
    rows = []
    selected = set(record.selected_topics)
    for label in sorted(record.q_before):
        rows.append(
            [
                label,
                record.q_before[label],
                record.approx_rewards[label],
                record.base_rewards[label],
                record.modified_rewards[label],
                record.max_future_q,
                record.q_after[label],
                label in selected,
            ]
        )
    return rows


def export_q_report(
    state: SessionState,
    path: str | Path,
    format: str = "csv",
    iteration: int | None = None,
) -> Path:
    """Per-topic reward and Q-value table for one iteration or the full run."""
    if not state.iterations:
        raise ReportError("session has no iterations to report")
    if iteration is not None:
        record = _find_record(state, iteration)
        return facts_to_files(path, format, Q_REPORT_COLUMNS, q_report_rows(record))
    header = ["iteration"] + Q_REPORT_COLUMNS
    rows = []
    for record in state.iterations:
        for row in q_report_rows(record):
            rows.append([record.index] + row)
    return facts_to_files(path, format, header, rows)


def _find_record(state: SessionState, iteration: int) -> IterationRecord:
    for record in state.iterations:
        if record.index == iteration:
            return record
    raise ReportError(f"iteration {iteration} not found (have 1..{len(state.iterations)})")


def export_doc_matrix(
    state: SessionState, iteration: int, path: str | Path, format: str = "csv"
) -> Path:
    _find_record(state, iteration)
    matrix = state.doc_matrices.get(iteration)
    if matrix is None:
        raise ReportError(f"iteration {iteration} has no document matrix")
    header = ["doc_id"] + list(matrix.topic_labels)
    rows = [
        [doc_id] + [float(x) for x in matrix.sims[i]]
        for i, doc_id in enumerate(matrix.doc_ids)
    ]
    return facts_to_files(path, format, header, rows)


def export_keyword_comparison(
    model: TopicModel,
    matrix: DocTopicMatrix,
    validation_docs: Corpus,
    selected_topics: list[str],
    path: str | Path,
    format: str = "csv",
    top_words_per_topic: int = 10,
    docs_per_topic: int = 5,
) -> Path:
    """Keyword weights in the selected topics vs the weights induced by the
    validation documents most associated with those topics (mean term
    frequency), side by side."""
    if validation_docs.vocabulary.size == 0 or not validation_docs.is_preprocessed:
        raise ReportError("validation documents must be preprocessed")
    if tuple(matrix.topic_labels) != tuple(model.topic_labels):
        raise ReportError("document matrix does not match the model's topics")
    missing = [t for t in selected_topics if t not in model.topic_labels]
    if missing:
        raise ReportError(f"unknown selected topics: {missing}")

    keyword_set: set[str] = set()
    sel_idx = [model.label_index(t) for t in selected_topics]
    for i in sel_idx:
        for term, _ in top_words(model, i, top_words_per_topic):
            keyword_set.add(term)

    doc_idx: set[int] = set()
    for i in sel_idx:
        order = np.argsort(-matrix.sims[:, i], kind="stable")
        doc_idx.update(int(j) for j in order[:docs_per_topic])
    chosen = sorted(doc_idx)

    rows = []
    for term in sorted(keyword_set):
        col = model.vocabulary.index(term)
        model_weight = float(np.mean([model.topic_word[i, col] for i in sel_idx]))
        tfs = []
        for j in chosen:
            toks = validation_docs.tokens[j]
            tfs.append(toks.count(term) / len(toks) if toks else 0.0)
        doc_weight = float(np.mean(tfs)) if tfs else 0.0
        rows.append([term, model_weight, doc_weight])
    rows.sort(key=lambda r: (-r[1], r[0]))
    return facts_to_files(path, format, ["term", "topic_weight", "document_weight"], rows)


# ---------------------------------------------------------------------------
# Sweeps


def sweep_inputs_from(state: SessionState, iteration: int | None = None) -> SweepInputs:
    """Freeze the pre-update state of an iteration for parameter sweeps."""
    if not state.iterations:
        raise ReportError("session has no iterations to sweep")
    record = state.iterations[-1] if iteration is None else _find_record(state, iteration)
    bundle = state.bundles.get(record.index)
    if bundle is None:
        raise ReportError(f"iteration {record.index} has no stored comparison bundle")
    entropy_new = {
        label: float(bundle.entropy_new[i])
        for i, label in enumerate(bundle.topic_labels)
    }
    return SweepInputs(
        topic_labels=tuple(sorted(record.q_before)),
        q_current=dict(record.q_before),
        base_rewards=dict(record.base_rewards),
        entropy_new=entropy_new,
        future_q=record.max_future_q,
        gamma=state.config.agent.gamma,
    )


def run_sweep(
    state: SessionState,
    alphas: list[float],
    lambdas: list[float],
    iteration: int | None = None,
    top_n: int | None = None,
) -> SweepReport:
    inputs = sweep_inputs_from(state, iteration)
    n = state.config.agent.top_n if top_n is None else top_n
    return parameter_sweep(inputs, alphas, lambdas, top_n=n)


def sweep_table(report: SweepReport) -> tuple[list[str], list[list]]:
    """Rows = topics selected under at least one pair; blank cells where the
    topic left the top-n for that pair."""
    header = ["topic"] + [f"(a={a:g}; l={lam:g})" for a, lam in report.pairs]
    rows = []
    for i, label in enumerate(report.topic_labels):
        if not report.selected[i].any():
            continue
        row = [label]
        for p in range(len(report.pairs)):
            row.append(float(report.q_after[i, p]) if report.selected[i, p] else "")
        rows.append(row)
    return header, rows


def export_sweep(report: SweepReport, path: str | Path, format: str = "csv") -> Path:
    header, rows = sweep_table(report)
    return facts_to_files(path, format, header, rows)
