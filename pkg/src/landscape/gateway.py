"""HTTP gateway exposing sessions to the expert console.

JSON over HTTP/1.1; every number the console displays comes from these
payloads. Mutations are serialized per session, support Idempotency-Key
replay, and invalid state transitions surface as 409 conflicts.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .agent import AgentConfig, RewardCoefficients
from .aspect import AspectError, AspectKeywords, extract_aspect_keywords
from .corpus import Corpus, CorpusError, Document, PreprocessConfig, load_corpus, preprocess
from .metrics import MetricsError
from .reports import ReportError, run_sweep, sweep_table
from .session import (
    LdaParams,
    SessionConfig,
    SessionError,
    SessionState,
    SplitPlan,
    _bundle_payload,
    create_session,
    load_session,
    record_decision,
    run_iteration,
    save_session,
)
from .topics import TopicsError, top_words

__all__ = ["build_app", "serve", "ApiError"]

DATA_ERRORS = (CorpusError, AspectError, TopicsError, MetricsError, ReportError,
               FileNotFoundError, ValueError)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.details is not None:
            body["details"] = self.details
        return JSONResponse(status_code=self.status, content=body)


# ---------------------------------------------------------------------------
# Request bodies


class CreateSessionBody(BaseModel):
    corpus: str
    k: int = 6
    subtopics: int | None = None
    iterations: int = 150
    seed: int = 0
    config: dict = {}


class AspectBody(BaseModel):
    label: str = ""
    entries: list | None = None
    texts: list[str] | None = None
    corpus: str | None = None
    max_k: int = 100
    min_score: float = 0.0


class IterationBody(BaseModel):
    validation: str


class DecisionBody(BaseModel):
    go_on: bool = Field(alias="continue")
    notes: str = ""
    edited_aspect: dict | None = None

    model_config = {"populate_by_name": True}


class SweepBody(BaseModel):
    alphas: list[float]
    lambdas: list[float]
    iteration: int | None = None


class RegisterCorpusBody(BaseModel):
    name: str
    path: str


# ---------------------------------------------------------------------------


class SessionStore:
    """Disk-backed session registry with per-session write locks."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._idempotency: dict[tuple[str, str], tuple[int, dict]] = {}

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get(self, session_id: str) -> SessionState:
        with self._registry_lock:
            cached = self._cache.get(session_id)
        if cached is not None:
            return cached
        path = self.root / session_id
        if not path.exists():
            raise ApiError(404, "not_found", f"session {session_id!r} not found")
        state = load_session(path)
        with self._registry_lock:
            self._cache[session_id] = state
        return state

    def put(self, state: SessionState) -> None:
        save_session(state, self.root / state.id)
        with self._registry_lock:
            self._cache[state.id] = state

    # Corpora registry: name -> file path

    @property
    def _corpora_file(self) -> Path:
        return self.root / "corpora.json"

    def corpora(self) -> dict[str, str]:
        if self._corpora_file.exists():
            return json.loads(self._corpora_file.read_text("utf-8"))
        return {}

    def register_corpus(self, name: str, path: str) -> None:
        if not Path(path).exists():
            raise ApiError(400, "invalid_request", f"corpus file not found: {path}")
        registry = self.corpora()
        registry[name] = str(path)
        self._corpora_file.write_text(
            json.dumps(registry, indent=2, sort_keys=True) + "\n", "utf-8"
        )

    def resolve_corpus(self, ref: str) -> str:
        registry = self.corpora()
        if ref in registry:
            return registry[ref]
        if Path(ref).exists():
            return ref
        raise ApiError(404, "not_found", f"corpus {ref!r} is neither registered nor a file")

    def remember(self, key: tuple[str, str], status: int, body: dict) -> None:
        with self._registry_lock:
            self._idempotency[key] = (status, body)

    def replay(self, key: tuple[str, str]) -> tuple[int, dict] | None:
        with self._registry_lock:
            return self._idempotency.get(key)


# ---------------------------------------------------------------------------
# Payload shaping


def _aspect_payload(aspect: AspectKeywords | None) -> dict | None:
    if aspect is None:
        return None
    return {
        "label": aspect.label,
        "entries": [[t, w] for t, w in aspect.entries],
        "source_ids": list(aspect.source_ids),
    }


def _session_summary(state: SessionState) -> dict:
    return {
        "id": state.id,
        "status": state.status,
        "corpus_ref": state.corpus_ref,
        "iteration_count": len(state.iterations),
        "topic_labels": list(state.ctp1.topic_labels),
        "ctp1": state.ctp1.id,
        "ctp2": state.ctp2.id if state.ctp2 else None,
        "q": {k: float(v) for k, v in sorted(state.qtable.q.items())},
        "staged_aspect": _aspect_payload(state.staged_aspect),
        "config": asdict(state.config),
    }


def _record_payload(state: SessionState, index: int) -> dict:
    record = next((r for r in state.iterations if r.index == index), None)
    if record is None:
        raise ApiError(404, "not_found", f"iteration {index} not found")
    payload = asdict(record)
    model = state.models[record.model_new_id]
    payload["selected_topic_details"] = [
        {
            "label": label,
            "keywords": [[t, w] for t, w in top_words(model, model.label_index(label), 10)],
            "q_before": record.q_before[label],
            "q_after": record.q_after[label],
            "approx_reward": record.approx_rewards[label],
            "base_reward": record.base_rewards[label],
            "modified_reward": record.modified_rewards[label],
        }
        for label in record.selected_topics
    ]
    return payload


def _parse_aspect_body(body: AspectBody, store: SessionStore) -> AspectKeywords:
    if body.entries is not None:
        entries = sorted(
            ((str(t), float(w)) for t, w in body.entries), key=lambda e: (-e[1], e[0])
        )
        return AspectKeywords(entries=tuple(entries), label=body.label)
    if body.texts is not None:
        docs = tuple(
            Document(id=f"text-{i + 1}", title="", abstract=text)
            for i, text in enumerate(body.texts)
        )
        corpus = preprocess(Corpus(documents=docs))
        return extract_aspect_keywords(
            corpus, max_k=body.max_k, min_score=body.min_score, label=body.label
        )
    if body.corpus is not None:
        corpus = preprocess(load_corpus(store.resolve_corpus(body.corpus)))
        return extract_aspect_keywords(
            corpus, max_k=body.max_k, min_score=body.min_score, label=body.label
        )
    raise ApiError(400, "invalid_request",
                   "aspect body needs one of entries, texts, or corpus")


def _session_config_from(payload: dict) -> SessionConfig:
    return SessionConfig(
        agent=AgentConfig(**payload.get("agent", {})),
        coeffs=RewardCoefficients(**payload.get("reward_coeffs", {})),
        retain_factor=payload.get("retain_factor", 0.0),
        normalize=payload.get("normalize", "global"),
        entropy_base=payload.get("entropy_base", "nat"),
    )


# ---------------------------------------------------------------------------


def build_app(store_dir: str | Path, cors_origin: str = "") -> FastAPI:
    store = SessionStore(store_dir)
    app = FastAPI(title="landscape gateway")

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(SessionError)
    async def _session_error(request: Request, exc: SessionError):
        # state-machine violations are conflicts, not server faults
        return ApiError(409, "invalid_state", str(exc)).response()

    for error_type in DATA_ERRORS:
        @app.exception_handler(error_type)
        async def _data_error(request: Request, exc: Exception):
            return ApiError(422, "data_error", str(exc)).response()

    def idempotent(request: Request, session_scope: str):
        key = request.headers.get("Idempotency-Key")
        if not key:
            return None, None
        return (session_scope, key), store.replay((session_scope, key))

    def finish(key, status: int, body: dict) -> JSONResponse:
        if key is not None:
            store.remember(key, status, body)
        return JSONResponse(status_code=status, content=body)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/corpora")
    def list_corpora():
        return {"corpora": store.corpora()}

    @app.post("/corpora")
    def register_corpus(body: RegisterCorpusBody):
        store.register_corpus(body.name, body.path)
        return {"corpora": store.corpora()}

    @app.post("/sessions")
    def create(body: CreateSessionBody, request: Request):
        key, replayed = idempotent(request, "/sessions")
        if replayed:
            return finish(None, *replayed)
        corpus_path = store.resolve_corpus(body.corpus)
        corpus = preprocess(load_corpus(corpus_path))
        split = SplitPlan(total_subtopics=body.subtopics) if body.subtopics else None
        state = create_session(
            corpus,
            lda_params=LdaParams(k=body.k, iterations=body.iterations, seed=body.seed),
            split_plan=split,
            config=_session_config_from(body.config),
            corpus_ref=corpus_path,
        )
        store.put(state)
        return finish(key, 201, _session_summary(state))

    @app.get("/sessions/{session_id}")
    def summary(session_id: str):
        return _session_summary(store.get(session_id))

    @app.post("/sessions/{session_id}/aspects")
    def submit_aspect(session_id: str, body: AspectBody, request: Request):
        key, replayed = idempotent(request, session_id)
        if replayed:
            return finish(None, *replayed)
        with store.lock(session_id):
            state = store.get(session_id)
            if state.status not in ("awaiting_aspect", "awaiting_decision"):
                raise ApiError(409, "invalid_state",
                               f"cannot stage an aspect while {state.status}")
            aspect = _parse_aspect_body(body, store)
            state.staged_aspect = aspect
            store.put(state)
        return finish(key, 200, {"staged_aspect": _aspect_payload(aspect)})

    @app.post("/sessions/{session_id}/iterations")
    def iterate(session_id: str, body: IterationBody, request: Request):
        key, replayed = idempotent(request, session_id)
        if replayed:
            return finish(None, *replayed)
        with store.lock(session_id):
            state = store.get(session_id)
            if state.staged_aspect is None:
                raise ApiError(409, "invalid_state",
                               "no aspect staged; POST aspects first")
            validation_path = store.resolve_corpus(body.validation)
            validation = preprocess(load_corpus(validation_path))
            record = run_iteration(
                state, None, validation, validation_ref=validation_path
            )
            store.put(state)
            payload = _record_payload(state, record.index)
        return finish(key, 200, payload)

    @app.get("/sessions/{session_id}/iterations/{index}")
    def iteration(session_id: str, index: int):
        return _record_payload(store.get(session_id), index)

    @app.get("/sessions/{session_id}/iterations/{index}/heatmap")
    def heatmap(session_id: str, index: int):
        state = store.get(session_id)
        _record_payload(state, index)
        bundle = state.bundles.get(index)
        if bundle is None:
            raise ApiError(404, "not_found", f"iteration {index} has no bundle data")
        return _bundle_payload(bundle)

    @app.get("/sessions/{session_id}/iterations/{index}/docsim")
    def docsim(session_id: str, index: int):
        state = store.get(session_id)
        _record_payload(state, index)
        matrix = state.doc_matrices.get(index)
        if matrix is None:
            raise ApiError(404, "not_found", f"iteration {index} has no document matrix")
        return {
            "doc_ids": list(matrix.doc_ids),
            "topic_labels": list(matrix.topic_labels),
            "sims": [[float(x) for x in row] for row in matrix.sims],
            "empty_docs": list(matrix.empty_docs),
        }

    @app.post("/sessions/{session_id}/decision")
    def decide(session_id: str, body: DecisionBody, request: Request):
        key, replayed = idempotent(request, session_id)
        if replayed:
            return finish(None, *replayed)
        edited = None
        if body.edited_aspect is not None:
            entries = sorted(
                ((str(t), float(w)) for t, w in body.edited_aspect.get("entries", [])),
                key=lambda e: (-e[1], e[0]),
            )
            edited = AspectKeywords(
                entries=tuple(entries), label=body.edited_aspect.get("label", "")
            )
        with store.lock(session_id):
            state = store.get(session_id)
            record_decision(state, continue_=body.go_on, edited_aspect=edited,
                            notes=body.notes)
            store.put(state)
            payload = _session_summary(state)
        return finish(key, 200, payload)

    @app.post("/sessions/{session_id}/sweep")
    def sweep(session_id: str, body: SweepBody):
        state = store.get(session_id)
        if not body.alphas or not body.lambdas:
            raise ApiError(400, "invalid_request", "sweep grids must be non-empty")
        report = run_sweep(state, body.alphas, body.lambdas, iteration=body.iteration)
        columns, rows = sweep_table(report)
        return {
            "columns": columns,
            "rows": rows,
            "pairs": [[a, lam] for a, lam in report.pairs],
            "selections": [report.selection(p) for p in range(len(report.pairs))],
            "top_n": report.top_n,
        }

    return app


def serve(bind_address: str, session_store_dir: str | Path, cors_origin: str = "") -> None:
    """Blocking entry point used by the CLI's ``serve`` subcommand."""
    import uvicorn

    host, _, port = bind_address.partition(":")
    app = build_app(session_store_dir, cors_origin=cors_origin)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8756))
