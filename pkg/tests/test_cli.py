import csv
import json

import pytest

from landscape.cli import cli_dispatch
from landscape.fixtures import data_path

from conftest import write_jsonl


def run(*argv):
    return cli_dispatch(list(argv))


@pytest.fixture(scope="module")
def fixture_session(tmp_path_factory):
    root = tmp_path_factory.mktemp("clisess")
    code = run("autopilot", "--plan", "trajectory", "--out", str(root / "sess"))
    assert code == 0
    return root / "sess"


class TestExitCodes:
    def test_help_exits_zero(self, capsys):
        assert run("--help") == 0
        assert "usage" in capsys.readouterr().out

    def test_subcommand_help_exits_zero(self):
        for cmd in ("ingest", "fit", "aspect", "iterate", "autopilot",
                    "decide", "report", "sweep", "serve"):
            assert run(cmd, "--help") == 0

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert run("frobnicate") == 1

    def test_unknown_flag_is_usage_error(self):
        assert run("ingest", "--nope") == 1

    def test_data_error_exits_two(self, tmp_path, capsys):
        assert run("ingest", "--input", str(tmp_path / "missing.jsonl"),
                   "--output", str(tmp_path / "out.jsonl")) == 2
        assert "error:" in capsys.readouterr().err


class TestIngestFitIterate:
    def test_full_cli_loop(self, tmp_path, capsys):
        raw = write_jsonl(
            tmp_path / "raw.jsonl",
            [
                {"id": f"d{i}", "title": "quantum communication study",
                 "abstract": f"quantum key distribution protocol security photon "
                             f"rate {'entanglement' if i % 2 else 'detector'} "
                             f"{'network channel' if i % 3 else 'proof basis'}"}
                for i in range(12)
            ] + [{"id": "x1", "title": "database indexing", "abstract": "btree cache"}],
        )
        out = tmp_path / "corpus.jsonl"
        assert run("ingest", "--input", str(raw), "--output", str(out),
                   "--query", "quantum AND (communication OR network)") == 0
        assert len(out.read_text("utf-8").splitlines()) == 12

        sess = tmp_path / "sess"
        assert run("fit", "--corpus", str(out), "--out", str(sess),
                   "--k", "3", "--iterations", "40", "--seed", "3") == 0
        assert (sess / "manifest.json").exists()

        aspect_path = tmp_path / "aspect.json"
        assert run("aspect", "--input", str(data_path("aspect_protocols.jsonl")),
                   "--out", str(aspect_path), "--label", "protocols") == 0
        label = json.loads(aspect_path.read_text("utf-8"))["label"]
        assert label == "protocols"

        assert run("iterate", "--session", str(sess),
                   "--aspect", str(aspect_path),
                   "--validation", str(data_path("validation_2023.jsonl"))) == 0
        manifest = json.loads((sess / "manifest.json").read_text("utf-8"))
        assert manifest["iteration_count"] == 1
        assert manifest["status"] == "awaiting_decision"

        assert run("decide", "--session", str(sess), "--continue") == 0
        manifest = json.loads((sess / "manifest.json").read_text("utf-8"))
        assert manifest["status"] == "awaiting_aspect"

        assert run("report", "--session", str(sess), "--kind", "q_report",
                   "--out", str(tmp_path / "q.csv")) == 0
        assert (tmp_path / "q.csv").exists()


class TestFixtureTrajectoryThroughCli:
    def test_q_report_shows_published_trajectory(self, fixture_session, tmp_path):
        out = tmp_path / "q.csv"
        assert run("report", "--session", str(fixture_session), "--kind", "q_report",
                   "--out", str(out)) == 0
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        t19 = {r["iteration"]: float(r["q_after"]) for r in rows if r["label"] == "T19"}
        assert t19["1"] == pytest.approx(2.783283, abs=1e-3)
        assert t19["2"] == pytest.approx(2.63173, abs=1e-3)

    def test_all_report_kinds_work(self, fixture_session, tmp_path):
        for kind in ("model_heatmap", "comparison_bundle", "q_report",
                     "doc_matrix", "keyword_comparison", "sweep"):
            out = tmp_path / f"{kind}.csv"
            assert run("report", "--session", str(fixture_session), "--kind", kind,
                       "--out", str(out)) == 0, kind

    def test_sweep_subcommand_matches_report_kind_sweep(self, fixture_session, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run("sweep", "--session", str(fixture_session), "--alphas", "0.1,0.2",
                   "--lambdas", "0.5,1.5", "--out", str(a)) == 0
        assert run("report", "--session", str(fixture_session), "--kind", "sweep",
                   "--alphas", "0.1,0.2", "--lambdas", "0.5,1.5", "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()


class TestConfigFile:
    def test_config_sections_and_seed_override(self, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "preprocess": {"min_len": 3},
            "lda": {"k": 3, "iterations": 30, "seed": 1},
            "agent": {"alpha": 0.2, "top_n": 2},
            "reward_coeffs": {"lambda1": 0.9, "lambda2": 0.1, "lambda3": 0.0,
                              "lambda4": 0.0},
        }), "utf-8")
        monkeypatch.setenv("LANDSCAPE_CONFIG", str(cfg))
        sess = tmp_path / "sess"
        assert run("fit", "--corpus", str(data_path("mini_corpus.jsonl")),
                   "--out", str(sess), "--seed", "9", "--iterations", "30") == 0
        manifest = json.loads((sess / "manifest.json").read_text("utf-8"))
        assert manifest["config"]["agent"]["alpha"] == 0.2
        assert manifest["config"]["agent"]["top_n"] == 2
        # k taken from config file; seed overridden by the flag
        with open(sess / "qtable.json", encoding="utf-8") as fh:
            q = json.load(fh)["q"]
        assert len(q) == 3
