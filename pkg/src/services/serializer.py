"""
src/services/serializer.py — Report serialization

JSON document:
    { schema_version, command, config, eigenvalues: [...], trace_report: {...} | null,
      diagnostics: {...} }
Complex numbers are {"re": x, "im": y}; floats are written with 17
significant digits; non-finite floats become null. Key order is fixed, so identical
results serialize to identical bytes.

CSV:
    spectrum  re,im,family,branch,alg_multiplicity,geo_multiplicity,residual
    green     x,y,re,im
    others    key,value (flattened diagnostics)
"""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from src.core.models import EigenvalueRecord, OutputFormat
from src.services.orchestrator import RunResult

SCHEMA_VERSION = "1.0"

EIGENVALUE_COLUMNS = (
    "re",
    "im",
    "family",
    "branch",
    "alg_multiplicity",
    "geo_multiplicity",
    "residual",
)
GREEN_COLUMNS = ("x", "y", "re", "im")


def _plain(value: Any) -> Any:
    """Reduce a value to JSON types, keeping dict insertion order."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump(by_alias=False))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": _plain(float(value.real)), "im": _plain(float(value.imag))}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def _float_text(value: float) -> str:
    return f"{value:.17g}"


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return _float_text(value) if math.isfinite(value) else ""
    return str(value)


class _FixedDigitsEncoder(json.JSONEncoder):
    """JSON encoder that writes every float with 17 significant digits."""

    def iterencode(self, o: Any, _one_shot: bool = False):
        def floatstr(value: float) -> str:
            if not math.isfinite(value):
                raise ValueError(f"non-finite float {value!r} is not valid JSON")
            return _float_text(value)

        encoder = (
            json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        )
        return json.encoder._make_iterencode(
            {} if self.check_circular else None,
            self.default,
            encoder,
            self.indent,
            floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )(o, 0)


class ReportSerializer:
    """Turns a RunResult into JSON or CSV text."""

    def to_dict(self, result: RunResult) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": result.command,
            "config": _plain(result.config),
            "eigenvalues": [self._eigenvalue(r) for r in result.eigenvalues],
            "trace_report": _plain(result.trace_report) if result.trace_report else None,
            "diagnostics": _plain(result.diagnostics),
        }

    def to_json(self, result: RunResult) -> str:
        text = json.dumps(
            self.to_dict(result), cls=_FixedDigitsEncoder, indent=2, ensure_ascii=False
        )
        return text + "\n"

    def to_csv(self, result: RunResult) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if result.command == "green":
            writer.writerow(GREEN_COLUMNS)
            for x, y, v in result.green:
                writer.writerow([_cell(x), _cell(y), _cell(v.real), _cell(v.imag)])
        elif result.command == "spectrum":
            writer.writerow(EIGENVALUE_COLUMNS)
            for rec in result.eigenvalues:
                row = self._eigenvalue(rec)
                writer.writerow([_cell(row[c]) if row[c] is not None else "" for c in EIGENVALUE_COLUMNS])
        else:
            writer.writerow(("key", "value"))
            flat = self.to_dict(result)
            for key, value in self._flatten(
                {"trace_report": flat["trace_report"], "diagnostics": flat["diagnostics"]}
            ):
                writer.writerow([key, _cell(value) if value is not None else ""])
        return buf.getvalue()

    def render(self, result: RunResult, fmt: OutputFormat) -> str:
        return self.to_csv(result) if fmt == OutputFormat.CSV else self.to_json(result)

    def write(self, result: RunResult, fmt: OutputFormat, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(result, fmt), encoding="utf-8")
        return path

    # ── Helpers ────────────────────────────────────────────────────

    @staticmethod
    def _eigenvalue(rec: EigenvalueRecord) -> dict[str, Any]:
        return {
            "re": rec.re,
            "im": rec.im,
            "family": rec.family,
            "branch": rec.branch,
            "alg_multiplicity": rec.alg_multiplicity,
            "geo_multiplicity": rec.geo_multiplicity,
            "residual": rec.residual if math.isfinite(rec.residual) else None,
        }

    def _flatten(self, value: Any, prefix: str = ""):
        if isinstance(value, dict):
            for k, v in value.items():
                yield from self._flatten(v, f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(value, list):
            for i, v in enumerate(value):
                yield from self._flatten(v, f"{prefix}[{i}]")
        else:
            yield prefix, value
