"""Bit-stable CSV tables and the JSON run manifest."""
from __future__ import annotations

import json
import platform
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def complex_columns(name: str) -> list[str]:
    return [f"Re({name})", f"Im({name})"]


def write_csv(path: Path, header: list[str], rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (complex, np.complexfloating)):
                cells += [fmt(v.real), fmt(v.imag)]
            else:
                cells.append(fmt(v))
        if len(cells) != len(header):
            raise ValueError(f"row has {len(cells)} cells, header has {len(header)}")
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


@dataclass
class Verdict:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Manifest:
    command: str
    config_sha256: str
    config: dict
    thresholds: dict = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.verdicts.append(Verdict(name, bool(passed), detail))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        from . import __version__
        import numba

        return {
            "tool": "pointscatter",
            "version": __version__,
            "command": self.command,
            "config_sha256": self.config_sha256,
            "config": self.config,
            "environment": {
                "python": platform.python_version(),
                "numpy": np.__version__,
                "numba": numba.__version__,
                "platform": sys.platform,
            },
            "thresholds": dict(sorted(self.thresholds.items())),
            "verdicts": [asdict(v) for v in self.verdicts],
            "outputs": self.outputs,
            "status": "pass" if self.passed else "fail",
        }

    def write(self, path: Path) -> Path:
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n", encoding="utf-8")
        return path
