from pathlib import Path

import pytest

from src.cli.config import SUBCOMMANDS, RunConfig
from src.util.exceptions import UsageError


def test_defaults():
    """Test seed, tolerances and metadata defaults."""
    run = RunConfig("grid")
    assert run.seed == 20150101
    assert "GRAM_TOL" in run.tolerances
    meta = run.metadata()
    assert meta["tool"] == "teps"
    assert meta["subcommand"] == "grid"
    assert len(meta["config_hash"]) == 64
    assert "find-design" in SUBCOMMANDS


def test_hash_is_canonical(tmp_path):
    """Test that the hash ignores option order and tracks every setting."""
    a = RunConfig("wce", options={"s": [1.5], "t": 5})
    b = RunConfig("wce", options={"t": 5, "s": [1.5]})
    assert a.config_hash == b.config_hash
    assert a.config_hash != RunConfig("wce", options={"t": 6, "s": [1.5]}).config_hash
    assert a.config_hash != RunConfig("wce", seed=1, options=a.options).config_hash
    assert a.config_hash != RunConfig("wce", out=tmp_path / "x", options=a.options).config_hash


def test_validation(tmp_path):
    """Test subcommand, input, output directory and seed checks."""
    existing = tmp_path / "points.txt"
    existing.write_text("0 0 1\n")
    RunConfig("weights", inputs={"points": existing}, out=tmp_path / "w.txt").validate()
    for run in (
        RunConfig("nothing"),
        RunConfig("weights", inputs={"points": tmp_path / "missing.txt"}),
        RunConfig("grid", out=tmp_path / "no" / "such" / "dir.txt"),
        RunConfig("grid", seed=-1),
    ):
        with pytest.raises(UsageError):
            run.validate()
    RunConfig("grid", out=Path("relative.txt")).validate()
