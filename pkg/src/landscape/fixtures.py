"""Accessors for the data files bundled with the package.

Includes the small synthetic corpus, two aspect source corpora, two
validation document sets, and the golden-trajectory session fixture
(constructed topic matrices plus published per-iteration rewards).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .aspect import AspectKeywords
from .corpus import Corpus, PreprocessConfig, load_corpus, preprocess
from .session import LdaParams, SessionConfig, SessionState, SplitPlan, autopilot
from .session import create_session, create_session_from_model
from .topics import TopicModel, load_model

__all__ = [
    "data_path",
    "mini_corpus",
    "aspect_corpus",
    "validation_corpus",
    "TrajectoryPlan",
    "trajectory_plan",
    "load_plan",
    "run_plan",
]


def data_path(name: str) -> Path:
    path = resources.files("landscape.data").joinpath(name)
    return Path(str(path))


def mini_corpus(preprocessed: bool = True, config: PreprocessConfig | None = None) -> Corpus:
    corpus = load_corpus(data_path("mini_corpus.jsonl"))
    return preprocess(corpus, config) if preprocessed else corpus


def aspect_corpus(name: str, config: PreprocessConfig | None = None) -> Corpus:
    if name not in ("protocols", "networks"):
        raise ValueError(f"unknown aspect corpus {name!r}")
    return preprocess(load_corpus(data_path(f"aspect_{name}.jsonl")), config)


def validation_corpus(year: int, config: PreprocessConfig | None = None) -> Corpus:
    if year not in (2023, 2024):
        raise ValueError(f"no validation corpus for {year}")
    return preprocess(load_corpus(data_path(f"validation_{year}.jsonl")), config)


@dataclass(frozen=True)
class TrajectoryPlan:
    """A ready-to-run autopilot plan: session source, per-iteration aspects,
    validation corpora, and optional reward/future-Q overrides."""

    model: TopicModel | None
    corpus: Corpus | None
    lda: LdaParams | None
    split: SplitPlan | None
    aspects: tuple[AspectKeywords, ...]
    validation: tuple[Corpus, ...]
    validation_refs: tuple[str, ...]
    reward_overrides: tuple[dict[str, float] | None, ...]
    future_q_overrides: tuple[float | None, ...]
    config: SessionConfig

    def open_session(self) -> SessionState:
        if self.model is not None:
            return create_session_from_model(self.model, config=self.config)
        return create_session(
            self.corpus, lda_params=self.lda, split_plan=self.split, config=self.config
        )

    def run(self, max_iterations: int | None = None, epsilon: float = 0.0) -> SessionState:
        state = self.open_session()
        return autopilot(
            state,
            aspects=list(self.aspects),
            validation_corpora=list(self.validation),
            max_iterations=max_iterations,
            epsilon=epsilon,
            reward_overrides=list(self.reward_overrides),
            future_q_overrides=list(self.future_q_overrides),
            validation_refs=list(self.validation_refs),
        )


def load_plan(path: str | Path, preprocess_config: PreprocessConfig | None = None) -> TrajectoryPlan:
    """Read an autopilot plan file; relative paths resolve next to it."""
    path = Path(path)
    payload = json.loads(path.read_text("utf-8"))
    root = path.parent

    def resolve(name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else root / p

    session = payload["session"]
    model = corpus = lda = split = None
    if "model" in session:
        model = load_model(resolve(session["model"]))
    else:
        corpus = preprocess(load_corpus(resolve(session["corpus"])), preprocess_config)
        lda = LdaParams(**session.get("lda", {}))
        if session.get("split"):
            split = SplitPlan(**session["split"])

    aspects = tuple(
        AspectKeywords.from_file(resolve(name)) for name in payload["aspects"]
    )
    validation = tuple(
        preprocess(load_corpus(resolve(name)), preprocess_config)
        for name in payload["validation"]
    )
    validation_refs = tuple(str(resolve(name)) for name in payload["validation"])
    n = len(aspects)
    rewards = payload.get("reward_overrides") or [None] * n
    futures = payload.get("future_q_overrides") or [None] * n

    cfg_payload = payload.get("config") or {}
    from .agent import AgentConfig, RewardCoefficients

    config = SessionConfig(
        agent=AgentConfig(**cfg_payload.get("agent", {})),
        coeffs=RewardCoefficients(**cfg_payload.get("coeffs", {})),
        retain_factor=cfg_payload.get("retain_factor", 0.0),
        normalize=cfg_payload.get("normalize", "global"),
        entropy_base=cfg_payload.get("entropy_base", "nat"),
    )
    return TrajectoryPlan(
        model=model,
        corpus=corpus,
        lda=lda,
        split=split,
        aspects=aspects,
        validation=validation,
        validation_refs=validation_refs,
        reward_overrides=tuple(rewards),
        future_q_overrides=tuple(futures),
        config=config,
    )


def trajectory_plan() -> TrajectoryPlan:
    """The bundled golden-trajectory fixture plan."""
    return load_plan(data_path("trajectory_plan.json"))


def run_plan(path: str | Path, **kwargs) -> SessionState:
    return load_plan(path).run(**kwargs)
