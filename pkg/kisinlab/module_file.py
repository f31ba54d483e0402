"""
Module definition files
JSON records describing a phi-module, checked with a JSON schema.

    {
      "p": 2, "f": 1, "e": 1, "r": 3, "rank": 2,
      "matrix": [["0", "u"], ["u^2", "0"]]
    }

f defaults to 1; field_modulus (coefficients low -> high) is required
exactly when f > 1; r may be the string "inf". Matrix entries use the
series literal grammar, column j holding phi(e_j).
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from .error_handler import DimensionMismatchError, ParseError
from .field import field_params
from .matrix import SeriesMatrix
from .phi_module import PhiModule
from .series import format_series, parse_series

logger = logging.getLogger(__name__)

MODULE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "f": {"type": "integer", "minimum": 1},
        "field_modulus": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 2,
        },
        "e": {"type": "integer", "minimum": 1},
        "r": {"oneOf": [{"type": "integer", "minimum": 0}, {"const": "inf"}]},
        "rank": {"type": "integer", "minimum": 0},
        "matrix": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
    },
    "required": ["p", "e", "r", "rank", "matrix"],
    "additionalProperties": False,
}

# canonical key order of emitted files
_KEY_ORDER = ("p", "f", "field_modulus", "e", "r", "rank", "matrix")


@dataclass(frozen=True)
class ModuleFile:
    """Textual form of a PhiModule"""

    p: int
    e: int
    r: Optional[int]
    rank: int
    matrix: Tuple[Tuple[str, ...], ...]
    f: int = 1
    field_modulus: Optional[Tuple[int, ...]] = None

    @classmethod
    def from_dict(cls, data: Any) -> "ModuleFile":
        validator = jsonschema.Draft7Validator(MODULE_SCHEMA)
        problems = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
        if problems:
            first = problems[0]
            where = ".".join(str(x) for x in first.path) or "<root>"
            raise ParseError(
                f"module file {where}: {first.message}",
                witness=[p.message for p in problems],
            )
        f = data.get("f", 1)
        modulus = data.get("field_modulus")
        if f > 1 and modulus is None:
            raise ParseError(f"field_modulus is required for f = {f}")
        if f == 1 and modulus is not None:
            raise ParseError("field_modulus is only allowed when f > 1")
        rank = data["rank"]
        grid = data["matrix"]
        if len(grid) != rank or any(len(row) != rank for row in grid):
            raise DimensionMismatchError(
                f"matrix must be {rank} x {rank}",
                witness=[len(row) for row in grid],
            )
        r = None if data["r"] == "inf" else data["r"]
        return cls(
            p=data["p"], e=data["e"], r=r, rank=rank,
            matrix=tuple(tuple(row) for row in grid),
            f=f, field_modulus=tuple(modulus) if modulus is not None else None,
        )

    @classmethod
    def from_module(cls, m: PhiModule) -> "ModuleFile":
        field = m.field
        return cls(
            p=field.p, e=m.e, r=m.r, rank=m.d,
            matrix=tuple(tuple(format_series(x) for x in row) for row in m.frob.entries),
            f=field.f, field_modulus=field.modulus if field.f > 1 else None,
        )

    def to_module(self) -> PhiModule:
        field = field_params(self.p, self.f, self.field_modulus)
        rows = [[parse_series(text, field) for text in row] for row in self.matrix]
        return PhiModule(field, self.e, self.r, SeriesMatrix.from_rows(field, rows, cols=self.rank))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "p": self.p,
            "f": self.f,
            "e": self.e,
            "r": "inf" if self.r is None else self.r,
            "rank": self.rank,
            "matrix": [list(row) for row in self.matrix],
        }
        if self.field_modulus is not None:
            data["field_modulus"] = list(self.field_modulus)
        return {key: data[key] for key in _KEY_ORDER if key in data}


def parse_module_text(text: str) -> PhiModule:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed module file: {e}") from e
    return ModuleFile.from_dict(data).to_module()


def emit_module(m: PhiModule) -> str:
    """Canonical serialization: fixed key order, one matrix row per line"""
    data = ModuleFile.from_module(m).to_dict()
    lines = ["{"]
    items = list(data.items())
    for i, (key, value) in enumerate(items):
        comma = "," if i + 1 < len(items) else ""
        if key == "matrix":
            rows = [json.dumps(row, ensure_ascii=False) for row in value]
            if rows:
                body = ",\n    ".join(rows)
                lines.append(f'  "matrix": [\n    {body}\n  ]{comma}')
            else:
                lines.append(f'  "matrix": []{comma}')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_module(path: Union[str, Path]) -> PhiModule:
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read module file {file}: {e}", solution="check the path") from e
    logger.debug("loaded module file %s", file)
    return parse_module_text(text)


def save_module(m: PhiModule, path: Union[str, Path]) -> Path:
    file = Path(path)
    file.parent.mkdir(parents=True, exist_ok=True)
    file.write_text(emit_module(m), encoding="utf-8")
    return file


def matrix_literals(mat: SeriesMatrix) -> List[List[str]]:
    """Entries of a matrix as series literals (inclusion matrices, Hom bases)"""
    return [[format_series(x) for x in row] for row in mat.entries]
