import json
import os

import pandas as pd
import pytest

from attack import load_attack_model, load_poison, load_queries
from data_io import ExperimentConfig, build_game, read_dataset, run_cli, save_csv
from distributions import FiniteDistribution, sample
from game import artifact_seed, build_attack
from target_models import ModelSpec, save_model, train

SMALL_CONFIG = {
    "system": {"threads": 1, "log_level": "WARNING"},
    "data": {"source": "synthetic", "synthetic": {"binary": 4, "seed": 1}},
    "model": {"epochs": 5},
    "game": {"n": 80, "trials": 2, "test_size": 20},
    "attack": {"r": 2, "q": 5, "k": 2, "band": 1.0},
}


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def small_config(workdir):
    path = workdir / "small.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return str(path)


class TestUsage:
    def test_unknown_subcommand(self, workdir):
        assert run_cli(["bogus"]) == 2

    def test_no_subcommand(self, workdir, capsys):
        assert run_cli([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_help(self, workdir):
        assert run_cli(["--help"]) == 0

    def test_bad_sweep_parameter(self, workdir):
        assert run_cli(["sweep", "--param", "learning_rate", "--values", "0.1"]) == 2

    def test_missing_config_file(self, workdir):
        assert run_cli(["--config", "absent.json", "game"]) == 1

    def test_invalid_config_value(self, workdir):
        path = workdir / "bad.json"
        path.write_text(json.dumps({"game": {"p": 1.5}}))
        assert run_cli(["--config", str(path), "game"]) == 1


class TestCommands:
    def test_verify_theory(self, workdir):
        assert run_cli(["--out", "report.csv", "verify-theory"]) == 0
        frame = pd.read_csv(workdir / "report.csv")
        assert len(frame) == 6 and frame["passed"].all()

    def test_modules(self, workdir, capsys):
        assert run_cli(["modules"]) == 0
        out = capsys.readouterr().out
        for name in ("Distributions", "Bayes Oracle", "Target Models", "Attack", "Game", "Data I/O"):
            assert name in out

    def test_oracle(self, workdir, capsys):
        assert run_cli(["oracle", "--trials", "10", "--threads", "1"]) == 0
        assert "10/10 wins" in capsys.readouterr().out

    def test_generate(self, small_config, workdir):
        args = ["--config", small_config, "--out", "data.csv", "generate", "--samples", "50",
                "--table", "table.csv"]
        assert run_cli(args) == 0
        data, names = read_dataset(str(workdir / "data.csv"))
        assert len(data) == 50 and names == [f"x{i}" for i in range(5)]
        table = FiniteDistribution.load_table(str(workdir / "table.csv"))
        assert table.points.shape[1] == 5 and table.masses.sum() == pytest.approx(1.0)

    def test_attack_artifacts(self, small_config, workdir):
        assert run_cli(["attack", "--config", small_config, "--out", "artifacts"]) == 0
        folder = workdir / "artifacts"
        queries = load_queries(str(folder / "queries.csv"))
        poison = load_poison(str(folder / "poison.csv"))
        assert len(poison) == 8
        assert queries.poison_count == 8 and len(queries) == 5 + 8
        model = load_attack_model(str(folder / "attack_model.json"), queries)
        assert model.dim == len(queries)

    def test_saved_artifacts_match_the_game_run(self, small_config, workdir):
        assert run_cli(["attack", "--config", small_config, "--out", "artifacts"]) == 0
        saved = load_queries(str(workdir / "artifacts" / "queries.csv"))
        game = build_game(ExperimentConfig.from_dict(SMALL_CONFIG))
        played = build_attack(game, artifact_seed(game.seed))
        assert saved.fingerprint == played.queries.fingerprint
        assert len(load_poison(str(workdir / "artifacts" / "poison.csv"))) == len(played.poison)

    def test_game(self, small_config, workdir):
        assert run_cli(["--config", small_config, "--out", "results.csv", "game"]) == 0
        frame = pd.read_csv(workdir / "results.csv")
        assert len(frame) == 1
        assert frame.loc[0, "parameter"] == "poison_rate" and frame.loc[0, "trials"] == 2

    def test_sweep(self, small_config, workdir):
        args = ["sweep", "--config", small_config, "--out", "sweep.csv", "--param", "poison_rate",
                "--values", "0,0.1"]
        assert run_cli(args) == 0
        frame = pd.read_csv(workdir / "sweep.csv")
        assert frame["value"].tolist() == [0.0, 0.1]
        assert set(frame["parameter"]) == {"poison_rate"}

    def test_metrics(self, small_config, workdir, capsys):
        source = FiniteDistribution([[0.0], [1.0]], [0.5, 0.5], [0.0, 1.0]).to_source()
        data = sample(source, 40, seed=0)
        save_model(train(ModelSpec(), data, seed=0), "model.json")
        save_csv(data, "data.csv")
        assert run_cli(["metrics", "--model", "model.json", "--data", "data.csv",
                        "--out", "metrics.json"]) == 0
        printed = json.loads(capsys.readouterr().out)
        assert printed["accuracy"] == 1.0
        assert os.path.exists("metrics.json")
