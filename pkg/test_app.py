"""
Unit tests for the command-line driver, configuration and golden corpus.
"""

import io
import json
import logging
import os
import struct
from unittest.mock import mock_open, patch

import pytest

from app import (
    DEFAULT_CONFIG,
    EXIT_CONSISTENCY,
    EXIT_OK,
    EXIT_STORAGE,
    EXIT_VALIDATION,
    GOLDEN_DIR,
    golden_checks,
    load_config,
    main,
    parse_lambda,
    save_config,
)
from characters import configure_store
from dyck_paths import Admissibility
from errors import MalformedPartition, NegativeMultiplicity, StorageError
from partitions import EMPTY, Partition


@pytest.fixture(autouse=True)
def isolated_config(tmp_path):
    """Point the config file at a scratch directory and drop any cache override."""
    with patch("app.CONFIG_FILE", str(tmp_path / "config.json")), patch.dict(os.environ):
        os.environ.pop("DYCKRES_CACHE", None)
        yield


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_parse_lambda():
    assert parse_lambda("3,2") == Partition((3, 2))
    assert parse_lambda("") == EMPTY
    with pytest.raises(MalformedPartition):
        parse_lambda("2,3")


def test_regularity_output():
    code, text = run_cli("regularity", "--lambda", "3,2", "--n", "3")
    assert code == EXIT_OK
    assert text == "enum=7 closed=7 agree=true\n"


def test_regularity_json():
    code, text = run_cli("regularity", "--lambda", "2,2", "--m", "2", "--n", "2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(text) == {"enum": 4, "closed": 4, "agree": True}


def test_patterns_of_empty_partition():
    """A(empty; 2) holds only the empty pattern."""
    code, text = run_cli("patterns", "--lambda", "", "--m", "2", "--n", "2", "--set", "A", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert len(data) == 1
    assert data[0]["lambda_of"] == ""
    assert (data[0]["d"], data[0]["b"]) == (0, 0)


def test_patterns_ascii_listing():
    code, text = run_cli("patterns", "--lambda", "3,2", "--set", "A")
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "A(3,2; n=3): 5 patterns"
    assert "lambda_of" in lines[1]
    assert len(lines) == 7


def test_betti_matches_golden_file():
    code, text = run_cli("betti", "--lambda", "3,2", "--m", "3", "--n", "3", "--format", "ascii")
    assert code == EXIT_OK
    with open(os.path.join(GOLDEN_DIR, "betti_3_2_m3_n3.txt")) as f:
        assert text == f.read()


def test_betti_json_with_totals():
    code, text = run_cli("betti", "--lambda", "1", "--m", "2", "--n", "2", "--format", "json", "--totals")
    data = json.loads(text)
    assert code == EXIT_OK
    assert data["rows"] == {"1": [4, 6, 4, 1]}
    assert data["totals"] == [4, 6, 4, 1]
    assert data["conjectural"] is False
    assert data["polynomial"] == [{"mu": "1", "d": 0, "mult": 1}, {"mu": "2,2", "d": 3, "mult": 1}]


def test_betti_character_slots():
    code, text = run_cli("betti", "--lambda", "1", "--m", "2", "--n", "2", "--character")
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "row 1 column 0: (1; 1) x1"
    assert lines[-1] == "row 1 column 3: (2,2; 2,2) x1"


def test_kac_output():
    code, text = run_cli("kac", "--lambda", "3,2")
    assert code == EXIT_OK
    assert text.startswith("[K(3,2)] = [L(3,2)] + [L(3,2,1)] + [L(3,3)] + [L(4,2)]")
    assert "HS = 225t^5+2025t^6" in text


def test_simple_output():
    code, text = run_cli("simple", "--lambda", "3,3,3")
    assert code == EXIT_OK
    assert text == "HS(3,3,3) = t^9\n"
    code, text = run_cli("simple", "--lambda", "", "--m", "1", "--n", "1", "--character")
    assert text == "((); ()) x1\n"


def test_strands_output():
    code, text = run_cli("strands", "--lambda", "3,2")
    assert code == EXIT_OK
    assert text.splitlines() == [
        "b=0: [L(3,2)] + [L(4,4)]",
        "b=1: [L(3,3,3)] + [L(4,4,3)]",
        "b=2: [L(5,5,5)]",
    ]
    code, text = run_cli("strands", "--lambda", "3,2", "--b", "2", "--format", "json")
    assert json.loads(text) == {"2": [{"mu": "5,5,5", "mult": 1}]}


def test_render_single_pattern():
    code, text = run_cli("render", "--lambda", "3,2", "--index", "1")
    assert code == EXIT_OK
    assert text == "# 1: lambda(D)=3,2 d=0 b=0\n. .\n\n. . .\n"


def test_render_index_out_of_range():
    code, _ = run_cli("render", "--lambda", "3,2", "--index", "9")
    assert code == EXIT_VALIDATION


def test_rect_check():
    code, text = run_cli("rect-check", "--lambda", "2,2", "--m", "3", "--n", "3")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "agree=true"
    code, _ = run_cli("rect-check", "--lambda", "3,2")
    assert code == EXIT_VALIDATION


def test_euler_command():
    code, text = run_cli("euler", "--lambda", "1", "--m", "2", "--n", "2")
    assert code == EXIT_OK
    assert text == "euler=true generators=true\n"


def test_validation_exit_codes(capsys):
    """Malformed partitions and bad shapes exit 2 with a message on stderr."""
    assert run_cli("kac", "--lambda", "2,3")[0] == EXIT_VALIDATION
    assert "error:" in capsys.readouterr().err
    assert run_cli("kac", "--lambda", "1", "--m", "2", "--n", "3")[0] == EXIT_VALIDATION
    assert run_cli("kac", "--lambda", "1,1,1", "--m", "2", "--n", "2")[0] == EXIT_VALIDATION
    assert run_cli("patterns", "--lambda", "1", "--slack", "-1")[0] == EXIT_VALIDATION
    assert run_cli("betti", "--lambda", "1", "--jobs", "0")[0] == EXIT_VALIDATION


@patch("app.simple_hilbert")
def test_negative_multiplicity_exits_3(mock_simple):
    mock_simple.side_effect = NegativeMultiplicity("L(1) has multiplicity -1")
    code, _ = run_cli("simple", "--lambda", "1", "--m", "2", "--n", "2")
    assert code == EXIT_CONSISTENCY


@patch("app.regularity_closed")
def test_regularity_disagreement_exits_3(mock_closed):
    mock_closed.return_value = 99
    code, text = run_cli("regularity", "--lambda", "3,2", "--n", "3")
    assert code == EXIT_CONSISTENCY
    assert text == "enum=7 closed=99 agree=false\n"


@patch("app.os.path.exists")
def test_load_config_defaults(mock_exists):
    """No config file means the defaults."""
    mock_exists.return_value = False
    assert load_config() == DEFAULT_CONFIG


@patch("app.os.path.exists")
def test_load_config_merges_file(mock_exists):
    mock_exists.return_value = True
    with patch("builtins.open", mock_open(read_data='{"m": 5, "jobs": 2}')):
        config = load_config()
    assert config["m"] == 5
    assert config["jobs"] == 2
    assert config["n"] == DEFAULT_CONFIG["n"]


@patch("app.os.path.exists")
def test_load_config_ignores_bad_json(mock_exists, caplog):
    mock_exists.return_value = True
    with patch("builtins.open", mock_open(read_data="{not json")):
        with caplog.at_level(logging.WARNING, logger="app"):
            config = load_config()
    assert config == DEFAULT_CONFIG
    assert any("unreadable config" in r.message for r in caplog.records)


def test_save_config_failure():
    with patch("builtins.open", side_effect=OSError("read-only file system")):
        with pytest.raises(StorageError):
            save_config(dict(DEFAULT_CONFIG), "/nonexistent/config.json")


def test_config_command_saves_defaults(tmp_path):
    path = str(tmp_path / "custom.json")
    code, text = run_cli("config", "--m", "4", "--n", "2", "--save", "--config", path)
    assert code == EXIT_OK
    assert json.loads(text)["m"] == 4
    assert load_config(path)["n"] == 2
    # later invocations pick the saved shape up
    code, text = run_cli("regularity", "--lambda", "1", "--config", path)
    assert text == "enum=1 closed=1 agree=true\n"


def test_cache_directory_from_environment(tmp_path):
    with patch.dict(os.environ, {"DYCKRES_CACHE": str(tmp_path)}), patch("app.configure_store") as mock_store:
        code, _ = run_cli("regularity", "--lambda", "1", "--n", "2", "--m", "2")
    assert code == EXIT_OK
    mock_store.assert_called_once_with(str(tmp_path))


@patch("app.configure_store")
def test_unusable_cache_exits_1(mock_store):
    mock_store.side_effect = StorageError("cannot use cache directory")
    code, _ = run_cli("regularity", "--lambda", "1")
    assert code == EXIT_STORAGE


def test_golden_corpus_passes():
    results = golden_checks()
    assert [name for name, passed in results if not passed] == []
    assert len(results) == 7


def test_selftest_command():
    code, text = run_cli("selftest")
    assert code == EXIT_OK
    assert all(line.startswith("ok ") for line in text.splitlines())


@patch("app._read_golden")
def test_selftest_missing_golden_file(mock_read):
    mock_read.side_effect = StorageError("Failed to read golden file")
    code, _ = run_cli("selftest")
    assert code == EXIT_STORAGE


def test_regularity_ignores_m(capsys):
    """regularity only depends on n, so the default m does not have to cover it."""
    code, text = run_cli("regularity", "--lambda", "3,2", "--n", "4")
    assert code == EXIT_OK
    assert text == "enum=9 closed=9 agree=true\n"
    code, _ = run_cli("patterns", "--lambda", "1", "--m", "1", "--n", "2", "--set", "K")
    assert code == EXIT_OK
    assert run_cli("regularity", "--lambda", "1,1,1", "--n", "2")[0] == EXIT_VALIDATION
    assert run_cli("regularity", "--lambda", "", "--n", "0")[0] == EXIT_VALIDATION


@pytest.mark.parametrize("bad", [{"m": "three"}, {"jobs": None}, {"slack": True}])
def test_non_integer_config_value_exits_2(tmp_path, bad, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _ = run_cli("kac", "--lambda", "1", "--config", str(path))
    assert code == EXIT_VALIDATION
    assert "must be an integer" in capsys.readouterr().err


def test_corrupt_cache_is_recomputed(tmp_path):
    """Garbage in characters.bin is skipped, not fatal."""
    garbage = json.dumps({"kind": "hilbert", "mu": "2,3", "m": 2, "n": 2, "value": [1]}).encode("utf-8")
    with open(tmp_path / "characters.bin", "wb") as f:
        f.write(struct.pack(">I", len(garbage)) + garbage)
    try:
        with patch.dict(os.environ, {"DYCKRES_CACHE": str(tmp_path)}):
            code, text = run_cli("simple", "--lambda", "1", "--m", "2", "--n", "2")
    finally:
        configure_store(None)
    assert code == EXIT_OK
    assert text == "HS(1) = 4t+6t^2+4t^3\n"


@patch("pattern_enumeration.is_admissible")
def test_inadmissible_search_result_exits_3(mock_check):
    mock_check.return_value = Admissibility(False, "condition (2): overlapping neighbourhoods")
    code, _ = run_cli("patterns", "--lambda", "2", "--n", "2", "--slack", "7")
    assert code == EXIT_CONSISTENCY
