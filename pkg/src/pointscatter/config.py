"""Experiment configuration: YAML documents checked against per-command schemas.

Validation errors carry the file, line and field path of the offending entry.
"""
from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import yaml

COMMANDS = ("amplitude", "soperator", "kernel", "soliton", "delta-limit", "ite", "box-bound")

_number = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_vector = {"type": "array", "items": _number, "minItems": 1, "maxItems": 3}
_complex = {
    "oneOf": [
        _number,
        {"type": "string", "pattern": r"^[\s0-9eE.+\-j()]+$"},
        {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
    ]
}

_potential = {
    "type": "object",
    "required": ["dimension", "scatterers"],
    "additionalProperties": False,
    "properties": {
        "dimension": {"enum": [1, 2, 3]},
        "scatterers": {
            "type": "array",
            "maxItems": 64,
            "items": {
                "type": "object",
                "required": ["position", "alpha"],
                "additionalProperties": False,
                "properties": {"position": _vector, "alpha": _complex},
            },
        },
        "experimental": {"type": "boolean"},
    },
}

_energies = {
    "energy": _pos,
    "energies": {"type": "array", "items": _pos, "minItems": 1},
}

_tolerances = {"type": "object", "additionalProperties": _pos}


def _schema(required: list[str], props: dict[str, Any], energies: bool = False) -> dict:
    properties = {"command": {"enum": list(COMMANDS)}, "tolerances": _tolerances, "seed": {"type": "integer"}}
    properties.update(props)
    schema: dict[str, Any] = {"type": "object", "required": required, "additionalProperties": False,
                              "properties": properties}
    if energies:
        properties.update(_energies)
        schema["oneOf"] = [{"required": ["energy"]}, {"required": ["energies"]}]
    return schema


_quadrature = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"M": {"type": "integer", "minimum": 2}, "m_polar": {"type": "integer", "minimum": 2}},
}

SCHEMAS: dict[str, dict] = {
    "amplitude": _schema(["potential"], {
        "potential": _potential,
        "angles": {"type": "integer", "minimum": 2},
        "radii": {"type": "array", "items": _pos, "minItems": 2, "maxItems": 2},
    }, energies=True),
    "soperator": _schema(["potential", "quadrature"], {
        "potential": _potential, "quadrature": _quadrature,
    }, energies=True),
    "kernel": _schema(["potential", "quadrature"], {
        "potential": _potential, "quadrature": _quadrature, "dump_basis": {"type": "boolean"},
    }, energies=True),
    "soliton": _schema([], {
        "kappas": {"type": "array", "items": _pos, "minItems": 1},
        "normings": {"type": "array", "items": _pos, "minItems": 1},
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["k_min", "k_max", "count"],
            "properties": {"k_min": _pos, "k_max": _pos, "count": {"type": "integer", "minimum": 2},
                           "step": _pos},
        },
        "count_law": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"N_max": {"type": "integer", "minimum": 1}, "trials": {"type": "integer", "minimum": 1}},
        },
    }),
    "delta-limit": _schema(["alphas"], {
        "alphas": {"type": "array", "items": _number, "minItems": 1},
        "N": {"type": "array", "items": {"type": "integer", "minimum": 10}, "minItems": 2},
        "k": _pos,
    }),
    "ite": _schema(["M"], {
        "potential": _potential,
        "points": {"type": "array", "items": _vector, "minItems": 1},
        "energies": {"type": "array", "items": _complex, "minItems": 1},
        "M": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
        "samples": {"type": "integer", "minimum": 1},
    }),
    "box-bound": _schema(["energies", "n_points"], {
        "energies": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "n_points": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "trials": {"type": "integer", "minimum": 1},
    }),
}


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; message names file, line and field."""


@dataclass
class ExperimentConfig:
    command: str
    data: dict
    source: str = "<inline>"
    tolerances: dict = field(default_factory=dict)

    def get(self, key: str, default=None):
        return self.data.get(key, default)

    def energies(self) -> list[float]:
        if "energies" in self.data:
            return [float(e) for e in self.data["energies"]]
        return [float(self.data["energy"])]

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def canonical(self) -> str:
        return json.dumps({"command": self.command, **self.data}, sort_keys=True, separators=(",", ":"))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


def _node_line(root: yaml.Node | None, path) -> int | None:
    """1-based line of the deepest node along ``path`` in a composed YAML tree."""
    node, line = root, None
    if node is not None:
        line = node.start_mark.line + 1
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node, line = nxt, nxt.start_mark.line + 1
    return line


def _describe(err: jsonschema.ValidationError) -> str:
    if err.validator == "required":
        missing = err.message.split("'")[1] if "'" in err.message else err.message
        return f"missing required field '{missing}'"
    if err.validator == "additionalProperties":
        return f"unknown field: {err.message}"
    return err.message


def validate(command: str, data: Any, source: str = "<inline>", text: str | None = None) -> ExperimentConfig:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}:1: top level must be a mapping")
    if "command" in data and data["command"] != command:
        raise ConfigError(f"{source}: config is for command {data['command']!r}, not {command!r}")
    root = yaml.compose(text) if text else None
    errors = sorted(jsonschema.Draft202012Validator(SCHEMAS[command]).iter_errors(data),
                    key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        where = ".".join(str(p) for p in path) or "(top level)"
        line = _node_line(root, path)
        loc = f"{source}:{line}" if line else source
        raise ConfigError(f"{loc}: {where}: {_describe(err)}")
    data = copy.deepcopy(data)
    data.pop("command", None)
    tolerances = data.get("tolerances", {})
    return ExperimentConfig(command, data, source, dict(tolerances))


def load(command: str, path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = f":{mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"{path}{line}: invalid YAML: {getattr(exc, 'problem', exc)}") from None
    return validate(command, data, str(path), text)
