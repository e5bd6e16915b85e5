"""Machine-readable run reports emitted by the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cloud import EmbeddingCloud


@dataclass
class RunReport:
    """Everything needed to reproduce and consume one CLI invocation."""

    command: str
    inputs: list[dict] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    tool_version: str = __version__
    wall_time_ms: int = 0

    def add_input(self, path: str, cloud: EmbeddingCloud) -> None:
        self.inputs.append(
            {"path": str(path), "label": cloud.label, "count": cloud.count, "dim": cloud.dim}
        )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "results": self.results,
            "tool_version": self.tool_version,
            "wall_time_ms": self.wall_time_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        raw = json.loads(text)
        return cls(
            command=raw["command"],
            inputs=raw["inputs"],
            parameters=raw["parameters"],
            results=raw["results"],
            tool_version=raw["tool_version"],
            wall_time_ms=raw["wall_time_ms"],
        )
