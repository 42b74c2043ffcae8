"""
Run configuration for a single command-line invocation.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .. import __version__
from ..util.constants import config, err
from ..util.exceptions import UsageError

SUBCOMMANDS = ("certify", "wce", "approx", "find-design", "weights", "grid", "recheck")

########################################################
#              Run configuration
########################################################


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines the artifacts of one run."""

    subcommand: str
    inputs: dict[str, Path] = field(default_factory=dict)
    out: Path | None = None
    seed: int = field(default_factory=lambda: int(config.DEFAULT_SEED))
    options: dict[str, Any] = field(default_factory=dict)
    tolerances: dict[str, Any] = field(default_factory=config.tolerances)

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(err.USAGE_ERROR.format(error=f"unknown subcommand {self.subcommand}"))
        for name, path in self.inputs.items():
            if not path.is_file():
                raise UsageError(
                    err.USAGE_ERROR.format(error=f"--{name}: no such file {path}")
                )
        if self.out is not None and not self.out.parent.resolve().is_dir():
            raise UsageError(
                err.USAGE_ERROR.format(error=f"--out: directory {self.out.parent} does not exist")
            )
        if self.seed < 0:
            raise UsageError(err.USAGE_ERROR.format(error=f"seed must be ≥ 0, got {self.seed}"))

    def _canonical(self) -> str:
        payload = asdict(self)
        payload["inputs"] = {k: os.fspath(v) for k, v in sorted(self.inputs.items())}
        payload["out"] = None if self.out is None else os.fspath(self.out)
        return json.dumps(payload, sort_keys=True, default=str)

    @property
    def config_hash(self) -> str:
        """sha256 over the canonical JSON of the run configuration."""
        return hashlib.sha256(self._canonical().encode()).hexdigest()

    def metadata(self) -> dict[str, Any]:
        """Metadata embedded in every artifact of this run."""
        return {
            "tool": "teps",
            "version": __version__,
            "subcommand": self.subcommand,
            "seed": self.seed,
            "config_hash": self.config_hash,
        }


__all__ = ["SUBCOMMANDS", "RunConfig"]
