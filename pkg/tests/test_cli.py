import json
from pathlib import Path

import pytest

from easense.cli import main


@pytest.fixture(scope="module")
def cli_store(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cli")
    store = tmp / "store"
    config = {
        "algorithm": "de", "method": "morris", "r": 2, "p": 10,
        "problems": ["sphere"], "runs": 1, "budget": 1000, "seed": 3,
        "output_dir": str(store),
    }
    cfg_path = tmp / "config.json"
    cfg_path.write_text(json.dumps(config))
    return cfg_path, store


def test_run_command(cli_store, capsys):
    cfg_path, store = cli_store
    assert main(["run", str(cfg_path)]) == 0
    out = capsys.readouterr().out
    assert "complete" in out
    assert store.joinpath("evals.csv").exists()


def test_report_command(cli_store, capsys):
    cfg_path, store = cli_store
    main(["run", str(cfg_path)])
    assert main(["report", str(store)]) == 0
    out = capsys.readouterr().out
    assert "morris / best" in out
    assert "lambda" in out


def test_bins_command(cli_store, capsys):
    cfg_path, store = cli_store
    main(["run", str(cfg_path)])
    assert main(["bins", str(store), "--param", "lambda", "--bins", "10"]) == 0
    emitted = Path(capsys.readouterr().out.strip().split("\n")[-1])
    assert emitted.exists()


def test_stats_command(cli_store, capsys):
    cfg_path, store = cli_store
    main(["run", str(cfg_path)])
    # one problem cannot feed the pairwise statistics, but files still emit
    assert main(["stats", str(store)]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[-2].endswith("ttests.csv")
    assert lines[-1].endswith("clusters.csv")


def test_presets_command(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in ("cmaes: k=5", "de: k=7", "nsga3: k=6", "moead: k=7"):
        assert name in out
    assert "dtlz2" in out and "shifted_rotated_katsuura" in out


def test_cell_limit_flag(cli_store, capsys):
    cfg_path, store = cli_store
    main(["run", str(cfg_path)])  # ensure base store is complete
    assert main(["run", str(cfg_path), "--cell-limit", "1"]) == 0
    assert "complete" in capsys.readouterr().out
