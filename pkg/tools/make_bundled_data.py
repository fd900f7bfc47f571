"""Generate the deterministic data files bundled with the package.

Writes, under src/landscape/data/:
  - mini_corpus.jsonl        synthetic bibliographic records, six themes
  - aspect_protocols.jsonl   aspect source texts (protocol verification)
  - aspect_networks.jsonl    aspect source texts (network integration)
  - validation_2023.jsonl    fresh validation documents, protocol-heavy
  - validation_2024.jsonl    fresh validation documents, network-heavy
  - trajectory_root.{json,csv}, trajectory_aspect_{1,2}.json,
    trajectory_plan.json     the golden-trajectory session fixture

Rerunning reproduces byte-identical files.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))

from landscape.aspect import AspectKeywords  # noqa: E402
from landscape.corpus import Vocabulary  # noqa: E402
from landscape.topics import TopicModel, save_model  # noqa: E402

DATA = SRC / "landscape" / "data"


def write_jsonl(path: Path, records: list[dict]) -> None:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    path.write_text("\n".join(lines) + "\n", "utf-8")
    print(f"wrote {path.name}: {len(records)} records")


# ---------------------------------------------------------------------------
# Mini corpus

THEMES = {
    "qkd_protocols": dict(
        words="""key distribution protocol security secure photon detector rate error
                 correction privacy amplification decoy state measurement basis qkd
                 sifting round verification""".split(),
        title="quantum key distribution protocols",
    ),
    "entanglement_networks": dict(
        words="""entanglement entangled swapping repeater network node channel fidelity
                 teleportation link memory photon pair bell routing topology
                 distribution""".split(),
        title="entanglement distribution in quantum networks",
    ),
    "photonic_hardware": dict(
        words="""photon source detector laser waveguide chip integrated optical fiber
                 loss efficiency superconducting nanowire cryogenic silicon
                 communication""".split(),
        title="photonic hardware for quantum communication",
    ),
    "quantum_computing": dict(
        words="""algorithm computing circuit gate qubit error correction fault tolerant
                 optimization complexity simulation annealing speedup network""".split(),
        title="quantum computing algorithms",
    ),
    "machine_learning": dict(
        words="""learning model neural training classifier feature data prediction
            optimization regression clustering network communication""".split(),
        title="machine learning for quantum network analysis",
    ),
    "cryptanalysis": dict(
        words="""cryptography cryptographic attack adversary authentication signature
                 hash lattice resistant encryption cipher proof security
                 communication""".split(),
        title="post quantum cryptography and security",
    ),
}

SHARED_WORDS = """quantum communication system research method result experiment
    demonstrate approach analysis performance application development technology
    implementation study propose scheme design challenge future trend progress""".split()

OFFTOPIC_WORDS = """database indexing storage compiler hardware cache pipeline
    scheduling benchmark latency""".split()


def make_mini_corpus() -> list[dict]:
    rng = np.random.default_rng(20240142)
    records = []
    doc_no = 0
    for theme, spec in THEMES.items():
        for _ in range(18):
            doc_no += 1
            pool = spec["words"]
            n_theme = int(rng.integers(22, 34))
            n_shared = int(rng.integers(10, 18))
            body = [pool[i] for i in rng.integers(0, len(pool), n_theme)]
            body += [SHARED_WORDS[i] for i in rng.integers(0, len(SHARED_WORDS), n_shared)]
            rng.shuffle(body)
            # keep the search keywords satisfiable for nearly every record
            lead = "quantum communication" if doc_no % 3 else "quantum network"
            abstract = lead + " " + " ".join(body)
            title_words = [pool[i] for i in rng.integers(0, len(pool), 3)]
            records.append(
                {
                    "id": f"D{doc_no:04d}",
                    "title": spec["title"] + ": " + " ".join(title_words),
                    "abstract": abstract,
                    "keywords": sorted({pool[i] for i in rng.integers(0, len(pool), 3)}),
                    "year": int(2018 + (doc_no % 5)),
                    "source": "scopus" if doc_no % 2 else "wos",
                }
            )
    # off-topic records exercising the search filter
    for j in range(12):
        doc_no += 1
        body = [OFFTOPIC_WORDS[i] for i in rng.integers(0, len(OFFTOPIC_WORDS), 30)]
        records.append(
            {
                "id": f"D{doc_no:04d}",
                "title": "classical systems engineering survey",
                "abstract": " ".join(body),
                "keywords": [],
                "year": int(2018 + (j % 5)),
                "source": "scopus",
            }
        )
    return records


# ---------------------------------------------------------------------------
# Aspect source corpora
#
# The protocols corpus is engineered so the mean tf-idf ranking head is
# exactly: verifi > function = proof (tie) > protocol > secur. Every
# document carries the same number of surviving tokens, so per-document
# tf shares a common denominator and the tie is exact.

PAD_WORDS = ["quantum", "research", "conference"]


def _pad(tokens: list[str], target: int) -> list[str]:
    out = list(tokens)
    need = target - len(out)
    # spread padding over the three shared words, each present at least once
    for i in range(need):
        out.append(PAD_WORDS[i % len(PAD_WORDS)])
    return out


def make_aspect_protocols() -> list[dict]:
    # rows: per-document counts of the raw word groups (stems in comments)
    plans = [
        # verifi, function, protocol, key, photon
        ["verify"] * 3 + ["functions"] * 2 + ["protocol"] * 2 + ["key"] * 2 + ["photon"] * 2,
        ["verified"] * 3 + ["function"] * 2 + ["protocols"] * 2 + ["based"] + ["photons"] + ["high"],
        ["verifies"] * 3 + ["functions"] * 2 + ["security"] * 2 + ["keys"] + ["photon"],
        ["verify"] * 3 + ["function"] * 2 + ["secure"] * 2 + ["base"] + ["photon"] + ["high"],
        ["proofs"] * 2 + ["protocol"] * 2 + ["key"] + ["distribution"],
        ["proof"] * 2 + ["protocols"] + ["based"] + ["distribution"] + ["high"],
        ["proofs"] * 2 + ["security"] + ["key"] + ["base"] + ["distributed"],
        ["proof"] * 2 + ["secure"] + ["keys"] + ["based"] + ["distribution"] + ["high"],
    ]
    records = []
    for i, tokens in enumerate(plans, start=1):
        body = _pad(tokens, 20)
        records.append(
            {
                "id": f"A1-{i:02d}",
                "title": "aspect source document",
                "abstract": " ".join(body),
                "keywords": [],
                "year": 2023,
                "source": "conference",
            }
        )
    return records


def make_aspect_networks() -> list[dict]:
    plans = [
        ["independent"] * 3 + ["classical"] * 2 + ["key"] * 2 + ["pairs"] * 2 + ["shared"],
        ["independent"] * 3 + ["classic"] * 2 + ["technology"] * 2 + ["challenge"] + ["settings"],
        ["independent"] * 2 + ["keys"] * 2 + ["pair"] + ["secure"] + ["protocol"] + ["shared"],
        ["independence"] + ["classical"] * 2 + ["technology"] + ["challenges"] + ["security"] + ["sets"],
        ["entangled"] * 2 + ["channel"] * 2 + ["repeater"] + ["network"] * 2 + ["protocol"],
        ["entanglement"] * 2 + ["channels"] + ["repeaters"] + ["networks"] * 2 + ["pair"],
        ["swapping"] + ["channel"] + ["network"] + ["technology"] + ["challenge"] + ["key"],
        ["swapping"] + ["channels"] + ["networks"] + ["classic"] + ["secure"] + ["sets"],
    ]
    records = []
    for i, tokens in enumerate(plans, start=1):
        body = _pad(tokens, 18)
        records.append(
            {
                "id": f"A2-{i:02d}",
                "title": "aspect source document",
                "abstract": " ".join(body),
                "keywords": [],
                "year": 2024,
                "source": "conference",
            }
        )
    return records


# ---------------------------------------------------------------------------
# Validation documents


def make_validation(year: int) -> list[dict]:
    rng = np.random.default_rng(year)
    if year == 2023:
        pool = """key protocol security secure photon distribution qkd channel rate
                  verification proof error correction entangled state measurement
                  efficiency transmission""".split()
    else:
        pool = """network entanglement channel repeater key distribution qkd protocol
                  independent classical pair technology challenge security state
                  transmission rate photon""".split()
    records = []
    for i in range(1, 11):
        n = int(rng.integers(24, 40))
        body = [pool[j] for j in rng.integers(0, len(pool), n)]
        records.append(
            {
                "id": f"V{year}-{i:02d}",
                "title": f"conference paper {i}",
                "abstract": "quantum " + " ".join(body),
                "keywords": sorted({pool[j] for j in rng.integers(0, len(pool), 4)}),
                "year": year,
                "source": "conference",
            }
        )
    return records


# ---------------------------------------------------------------------------
# Golden trajectory fixture

PUBLISHED_ROWS = {
    "T19": [("secur", 0.980), ("key", 0.963), ("function", 0.945), ("cryptographi", 0.941),
            ("design", 0.938), ("communic", 0.938), ("applic", 0.937), ("effici", 0.919),
            ("base", 0.872), ("protocol", 0.868)],
    "T32": [("protocol", 0.956), ("photon", 0.950), ("secur", 0.820), ("key", 0.818),
            ("entangl", 0.734), ("distribut", 0.719), ("optic", 0.602), ("rate", 0.578),
            ("qkd", 0.520), ("channel", 0.499)],
    "T39": [("entangl", 0.660), ("photon", 0.628), ("key", 0.573), ("protocol", 0.561),
            ("distribut", 0.549), ("state", 0.504), ("secur", 0.481), ("optic", 0.474),
            ("channel", 0.459), ("qkd", 0.333)],
    "T21": [("applic", 0.620), ("protocol", 0.588), ("base", 0.574), ("communic", 0.540),
            ("key", 0.533), ("cryptographi", 0.527), ("secur", 0.480), ("distribut", 0.474),
            ("comput", 0.442), ("design", 0.389)],
    "T33": [("photon", 0.571), ("distribut", 0.564), ("secur", 0.541), ("key", 0.526),
            ("channel", 0.523), ("protocol", 0.522), ("optic", 0.424), ("entangl", 0.416),
            ("state", 0.411), ("qkd", 0.409)],
    "T34": [("key", 0.416), ("protocol", 0.397), ("secur", 0.385), ("distribut", 0.371),
            ("optic", 0.365), ("photon", 0.360), ("channel", 0.308), ("entangl", 0.301),
            ("high", 0.246), ("qkd", 0.232)],
    "T37": [("photon", 0.015), ("qkd", 0.014), ("key", 0.011), ("state", 0.010),
            ("protocol", 0.010), ("distribut", 0.009), ("experiment", 0.008),
            ("effici", 0.008), ("model", 0.007), ("channel", 0.002)],
    "T24": [("qkd", 0.187), ("secur", 0.170), ("distribut", 0.160), ("key", 0.145),
            ("rate", 0.127), ("low", 0.120), ("base", 0.117), ("high", 0.106),
            ("protocol", 0.106), ("transmiss", 0.095)],
}

# Target row magnitudes (the published iteration-1 current Q-values).
TARGET_NORMS = {
    "T19": 2.94253,
    "T32": 2.329936,
    "T39": 1.675343,
    "T21": 1.64776,
    "T33": 1.564563,
}

DECOY_WORDS = [
    "problem", "time", "complex", "optim", "power", "architectur", "learn", "signal",
    "algorithm", "network", "node", "repeat", "swap", "teleport", "fidel", "memori",
    "laser", "chip", "fiber", "loss", "superconduct", "silicon", "circuit", "qubit",
    "gate", "error", "correct", "toler", "anneal", "speedup",
]

REWARD_OVERRIDES = [
    {"T19": 0.817206, "T32": 2.003339, "T39": 2.806429, "T21": 2.636102, "T33": 2.936999},
    {"T19": 0.740486, "T21": 2.507128, "T32": 2.801841, "T33": 3.024117, "T39": 2.983367},
]
FUTURE_Q_OVERRIDES = [0.592063, 0.585846]

MIX = 0.1  # share of each constructed row carried by the initial model
FILLER = "background"


def make_trajectory_fixture() -> None:
    named = set(PUBLISHED_ROWS)
    labels = [f"T{i:02d}" for i in range(1, 40)]
    decoy_labels = [lb for lb in labels if lb not in named and lb != "T01"]
    assert len(decoy_labels) == len(DECOY_WORDS)

    terms = sorted(
        {t for row in PUBLISHED_ROWS.values() for t, _ in row}
        | set(DECOY_WORDS)
        | {"quantum", FILLER}
    )
    vocab = Vocabulary(terms=tuple(terms), doc_frequency=tuple(1 for _ in terms))
    index = {t: i for i, t in enumerate(terms)}

    # Target refined-model rows: published weights, the five updated topics
    # rescaled so their row magnitudes equal the published current Q-values.
    target = np.zeros((39, len(terms)))
    for label, row in PUBLISHED_ROWS.items():
        r = labels.index(label)
        scale = 1.0
        if label in TARGET_NORMS:
            norm = float(np.linalg.norm([w for _, w in row]))
            scale = TARGET_NORMS[label] / norm
        for term, weight in row:
            target[r, index[term]] = weight * scale
    target[labels.index("T01"), index["quantum"]] = 1.0
    for lb, word in zip(decoy_labels, DECOY_WORDS):
        target[labels.index(lb), index[word]] = 0.25

    # Initial model: MIX * target plus a filler column absorbing the slack,
    # so applying a uniform aspect recovers the target matrix exactly
    # (global max-normalization divides by MIX at T01's anchor cell).
    initial = MIX * target
    initial[:, index[FILLER]] = 1.0 - initial.sum(axis=1)
    initial = initial / initial.sum(axis=1, keepdims=True)

    model = TopicModel(
        id="trajectory_root",
        kind="initial",
        topic_word=initial,
        topic_labels=tuple(labels),
        vocabulary=vocab,
    )
    save_model(model, DATA)
    print("wrote trajectory_root.json/.csv")

    aspect_terms = sorted(set(terms) - {FILLER})
    for n, label in ((1, "protocols (fixture)"), (2, "networks (fixture)")):
        aspect = AspectKeywords(
            entries=tuple((t, 1.0) for t in aspect_terms),
            label=label,
        )
        (DATA / f"trajectory_aspect_{n}.json").write_text(aspect.to_json() + "\n", "utf-8")
        print(f"wrote trajectory_aspect_{n}.json")

    plan = {
        "session": {"model": "trajectory_root.json"},
        "aspects": ["trajectory_aspect_1.json", "trajectory_aspect_2.json"],
        "validation": ["validation_2023.jsonl", "validation_2024.jsonl"],
        "reward_overrides": REWARD_OVERRIDES,
        "future_q_overrides": FUTURE_Q_OVERRIDES,
        "config": {},
    }
    (DATA / "trajectory_plan.json").write_text(
        json.dumps(plan, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    print("wrote trajectory_plan.json")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    write_jsonl(DATA / "mini_corpus.jsonl", make_mini_corpus())
    write_jsonl(DATA / "aspect_protocols.jsonl", make_aspect_protocols())
    write_jsonl(DATA / "aspect_networks.jsonl", make_aspect_networks())
    write_jsonl(DATA / "validation_2023.jsonl", make_validation(2023))
    write_jsonl(DATA / "validation_2024.jsonl", make_validation(2024))
    make_trajectory_fixture()


if __name__ == "__main__":
    main()
