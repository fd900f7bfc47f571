"""Command-line interface.

Subcommands cover the whole loop: ingest and screen a corpus, fit the
starting model, extract aspect keywords, run iterations (interactive or
autopilot), record decisions, export reports and sweeps, and serve the
HTTP gateway. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .agent import AgentConfig, AgentError, RewardCoefficients
from .aspect import (
    AspectError,
    AspectKeywords,
    ExclusionList,
    extract_aspect_keywords,
    normalize_weights,
)
from .corpus import (
    CorpusError,
    PreprocessConfig,
    SearchQuery,
    filter_by_query,
    load_corpus,
    load_stopwords,
    preprocess,
    relevance_filter,
)
from .fixtures import data_path, load_plan
from .metrics import MetricsError
from .reports import (
    ReportError,
    export_comparison_bundle,
    export_doc_matrix,
    export_keyword_comparison,
    export_model_heatmap,
    export_q_report,
    export_sweep,
    run_sweep,
)
from .session import (
    LdaParams,
    SessionConfig,
    SessionError,
    SplitPlan,
    create_session,
    load_session,
    record_decision,
    run_iteration,
    save_session,
)
from .topics import TopicsError

log = logging.getLogger("landscape")

DATA_ERRORS = (
    CorpusError, AspectError, TopicsError, MetricsError, AgentError,
    SessionError, ReportError, FileNotFoundError, json.JSONDecodeError,
    ValueError, OSError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# Config file handling: JSON with sections preprocess/lda/agent/reward_coeffs;
# LANDSCAPE_CONFIG is the fallback path; --seed overrides the file.


def _load_config_file(path: str | None) -> dict:
    if path is None:
        path = os.environ.get("LANDSCAPE_CONFIG")
    if not path:
        return {}
    return json.loads(Path(path).read_text("utf-8"))


def _preprocess_config(cfg: dict) -> PreprocessConfig:
    section = cfg.get("preprocess", {})
    kwargs = {}
    if "min_len" in section:
        kwargs["min_len"] = int(section["min_len"])
    if "stopword_file" in section:
        kwargs["stopwords"] = load_stopwords(section["stopword_file"])
    if "extra_stopwords" in section:
        kwargs["extra_stopwords"] = tuple(section["extra_stopwords"])
    return PreprocessConfig(**kwargs)


def _lda_params(cfg: dict, args) -> LdaParams:
    section = dict(cfg.get("lda", {}))
    for name in ("k", "iterations", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            section[name] = value
    return LdaParams(**section)


def _session_config(cfg: dict) -> SessionConfig:
    return SessionConfig(
        agent=AgentConfig(**cfg.get("agent", {})),
        coeffs=RewardCoefficients(**cfg.get("reward_coeffs", {})),
        retain_factor=cfg.get("retain_factor", 0.0),
        normalize=cfg.get("normalize", "global"),
        entropy_base=cfg.get("entropy_base", "nat"),
    )


def _log_effective_config(command: str, cfg: dict, extras: dict) -> None:
    merged = dict(cfg)
    merged.update(extras)
    log.info("%s effective config: %s", command, json.dumps(merged, sort_keys=True,
                                                            default=str))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# Subcommand implementations


def _cmd_ingest(args) -> int:
    cfg = _load_config_file(args.config)
    _log_effective_config("ingest", cfg, {"query": args.query, "min_hits": args.min_hits})
    corpus = load_corpus(args.input, format=args.format)
    if args.query:
        query = SearchQuery.parse(args.query)
        corpus = filter_by_query(corpus, query)
        if args.min_hits > 0:
            corpus = relevance_filter(corpus, query, args.min_hits)
    records = []
    for doc in corpus.documents:
        records.append(
            {
                "id": doc.id,
                "title": doc.title,
                "abstract": doc.abstract,
                "keywords": list(doc.keywords),
                "year": doc.year,
                "source": doc.source,
            }
        )
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n", "utf-8")
    print(f"ingested {len(records)} documents -> {out}")
    return 0


def _cmd_fit(args) -> int:
    cfg = _load_config_file(args.config)
    lda = _lda_params(cfg, args)
    _log_effective_config("fit", cfg, {"lda": asdict(lda), "subtopics": args.subtopics})
    corpus = preprocess(load_corpus(args.corpus), _preprocess_config(cfg))
    split = SplitPlan(total_subtopics=args.subtopics) if args.subtopics else None
    state = create_session(
        corpus, lda_params=lda, split_plan=split, config=_session_config(cfg),
        corpus_ref=str(args.corpus),
    )
    save_session(state, args.out)
    print(f"session {state.id}: {state.ctp1.k} topics, status {state.status} -> {args.out}")
    return 0


def _cmd_aspect(args) -> int:
    cfg = _load_config_file(args.config)
    _log_effective_config("aspect", cfg, {"max_k": args.max_k, "min_score": args.min_score})
    corpus = preprocess(load_corpus(args.input), _preprocess_config(cfg))
    exclusions = (
        ExclusionList.from_file(args.exclude) if args.exclude
        else ExclusionList(terms=frozenset())
    )
    ak = extract_aspect_keywords(
        corpus, max_k=args.max_k, min_score=args.min_score,
        exclusions=exclusions, label=args.label,
    )
    if args.normalize != "none":
        ak = normalize_weights(ak, args.normalize)
    ak.save(args.out)
    print(f"aspect '{ak.label}': {len(ak.entries)} keywords -> {args.out}")
    return 0


def _cmd_iterate(args) -> int:
    cfg = _load_config_file(args.config)
    _log_effective_config("iterate", cfg, {"session": args.session})
    state = load_session(args.session)
    aspect = AspectKeywords.from_file(args.aspect) if args.aspect else None
    validation = preprocess(load_corpus(args.validation), _preprocess_config(cfg))
    record = run_iteration(
        state, aspect, validation, validation_ref=str(args.validation)
    )
    save_session(state, args.session)
    print(
        f"iteration {record.index}: selected {', '.join(record.selected_topics)} "
        f"(max future Q {record.max_future_q!r})"
    )
    return 0


def _cmd_autopilot(args) -> int:
    cfg = _load_config_file(args.config)
    plan_path = args.plan
    if plan_path == "trajectory":
        plan_path = data_path("trajectory_plan.json")
    _log_effective_config("autopilot", cfg, {"plan": str(plan_path)})
    plan = load_plan(plan_path, preprocess_config=_preprocess_config(cfg))
    state = plan.run(max_iterations=args.max_iterations, epsilon=args.epsilon)
    save_session(state, args.out)
    print(
        f"session {state.id}: ran {len(state.iterations)} iterations, "
        f"status {state.status} -> {args.out}"
    )
    return 0


def _cmd_decide(args) -> int:
    state = load_session(args.session)
    edited = AspectKeywords.from_file(args.aspect) if args.aspect else None
    record_decision(state, continue_=args.go_on, edited_aspect=edited, notes=args.notes)
    save_session(state, args.session)
    print(f"session {state.id}: status {state.status}")
    return 0


def _cmd_report(args) -> int:
    state = load_session(args.session)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    kind = args.kind
    if kind == "q_report":
        export_q_report(state, out, format=args.format, iteration=args.iteration)
    elif kind == "model_heatmap":
        model = state.models.get(args.model) if args.model else (state.ctp2 or state.ctp1)
        if model is None:
            raise ReportError(f"model {args.model!r} not found in session")
        export_model_heatmap(model, args.top_words, out, format=args.format)
    elif kind == "comparison_bundle":
        index = args.iteration or len(state.iterations)
        bundle = state.bundles.get(index)
        if bundle is None:
            raise ReportError(f"iteration {index} has no stored comparison bundle")
        export_comparison_bundle(bundle, out, format=args.format)
    elif kind == "doc_matrix":
        index = args.iteration or len(state.iterations)
        export_doc_matrix(state, index, out, format=args.format)
    elif kind == "keyword_comparison":
        index = args.iteration or len(state.iterations)
        record = next(r for r in state.iterations if r.index == index)
        validation_path = args.validation or record.validation_ref
        if not validation_path:
            raise ReportError("keyword_comparison needs --validation (no recorded path)")
        validation = preprocess(load_corpus(validation_path))
        model = state.models[record.model_new_id]
        export_keyword_comparison(
            model,
            state.doc_matrices[index],
            validation,
            record.selected_topics,
            out,
            format=args.format,
            top_words_per_topic=args.top_words,
        )
    elif kind == "sweep":
        report = run_sweep(
            state, _floats(args.alphas), _floats(args.lambdas), iteration=args.iteration
        )
        export_sweep(report, out, format=args.format)
    else:
        raise _UsageError(f"unknown report kind {kind!r}")
    print(f"wrote {kind} -> {out}")
    return 0


def _cmd_sweep(args) -> int:
    state = load_session(args.session)
    report = run_sweep(
        state, _floats(args.alphas), _floats(args.lambdas), iteration=args.iteration
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_sweep(report, out, format=args.format)
    print(f"wrote sweep ({len(report.pairs)} pairs) -> {out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .gateway import build_app

    app = build_app(args.store, cors_origin=args.cors)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="landscape", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, screen, and normalize a corpus export")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--query", default="")
    p.add_argument("--min-hits", type=int, default=0, dest="min_hits")
    p.add_argument("--output", required=True)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("fit", help="fit the starting topic model and open a session")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--subtopics", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("aspect", help="extract weighted aspect keywords from texts")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="")
    p.add_argument("--max-k", type=int, default=100, dest="max_k")
    p.add_argument("--min-score", type=float, default=0.0, dest="min_score")
    p.add_argument("--exclude")
    p.add_argument("--normalize", choices=("max_one", "sum_one", "none"), default="none")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_aspect)

    p = sub.add_parser("iterate", help="run one expert-loop iteration")
    p.add_argument("--session", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--aspect")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("autopilot", help="run a whole plan headlessly")
    p.add_argument("--plan", required=True,
                   help="plan file, or 'trajectory' for the bundled fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--max-iterations", type=int, dest="max_iterations")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_autopilot)

    p = sub.add_parser("decide", help="record the expert's continue/stop decision")
    p.add_argument("--session", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--continue", dest="go_on", action="store_true")
    group.add_argument("--stop", dest="go_on", action="store_false")
    p.add_argument("--notes", default="")
    p.add_argument("--aspect", help="edited aspect keywords for the next iteration")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("report", help="export session data tables")
    p.add_argument("--session", required=True)
    p.add_argument("--kind", required=True,
                   choices=("model_heatmap", "comparison_bundle", "q_report",
                            "doc_matrix", "keyword_comparison", "sweep"))
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--iteration", type=int)
    p.add_argument("--model", help="model id for model_heatmap")
    p.add_argument("--top-words", type=int, default=10, dest="top_words")
    p.add_argument("--validation", help="validation corpus for keyword_comparison")
    p.add_argument("--alphas", default="0.1")
    p.add_argument("--lambdas", default="0.5")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("sweep", help="rerun Q-updates across an (alpha, lambda) grid")
    p.add_argument("--session", required=True)
    p.add_argument("--alphas", required=True)
    p.add_argument("--lambdas", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--iteration", type=int)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("serve", help="serve the HTTP gateway for the expert console")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8756)
    p.add_argument("--cors", default="")
    p.set_defaults(func=_cmd_serve)

    return parser


def cli_dispatch(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help paths
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
