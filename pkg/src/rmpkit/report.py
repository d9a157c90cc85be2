"""Machine-readable reports: the JSON envelope, its schema, and the time-series CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

SCHEMA_VERSION = "rmpkit-report/1"

CSV_COLUMNS = ["step", "t", "mode_id",
               "A1_re", "A1_im", "A2_re", "A2_im", "A3_re", "A3_im",
               "phase_speed", "e_norm", "b_norm"]

_NUMBER = {"type": ["number", "null"]}
_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "rmpkit report",
    "type": "object",
    "required": ["schema", "command", "version", "seed", "timestamp", "pass"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "version": {"type": "string"},
        "seed": {"type": "integer"},
        "timestamp": {"type": "string"},
        "pass": {"type": "boolean"},
        "suite": {"type": "string"},
        "samples": {"type": "integer", "minimum": 1},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check_id", "description", "samples", "max_residual",
                             "tolerance", "pass"],
                "properties": {
                    "check_id": {"type": "string"},
                    "description": {"type": "string"},
                    "samples": {"type": "integer", "minimum": 0},
                    "max_residual": _NUMBER,
                    "tolerance": {"type": "number", "exclusiveMinimum": 0},
                    "pass": {"type": "boolean"},
                    "notes": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
        "result": {"type": "object"},
        "error": {"type": "object",
                  "required": ["type", "message"],
                  "properties": {"type": {"type": "string"}, "message": {"type": "string"}}},
    },
    "additionalProperties": False,
    "$defs": {"complex": _COMPLEX},
}


def encode(obj):
    """JSON-ready copy of ``obj``: complex -> [re, im], arrays -> lists, non-finite -> None."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(float(obj.real)), encode(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj) + 0.0   # folds -0.0 into 0.0
        return x if math.isfinite(x) else None
    return obj


def decode_complex(pair) -> complex:
    return complex(pair[0], pair[1])


@dataclass
class CheckResult:
    check_id: str
    description: str
    samples: int
    max_residual: float
    tolerance: float
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max_residual) and self.max_residual < self.tolerance

    def to_dict(self) -> dict:
        d = {"check_id": self.check_id, "description": self.description,
             "samples": self.samples, "max_residual": encode(self.max_residual),
             "tolerance": self.tolerance, "pass": self.passed}
        if self.notes:
            d["notes"] = encode(self.notes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CheckResult":
        res = d["max_residual"]
        return cls(d["check_id"], d["description"], d["samples"],
                   float("inf") if res is None else float(res), d["tolerance"],
                   d.get("notes", {}))


@dataclass
class VerifyReport:
    suite: str
    seed: int
    samples: int
    version: str
    checks: list
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list:
        return [c.check_id for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return envelope("verify", self.seed, self.version, self.passed,
                        timestamp=self.timestamp, suite=self.suite, samples=self.samples,
                        checks=[c.to_dict() for c in self.checks])

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        return cls(d["suite"], d["seed"], d["samples"], d["version"],
                   [CheckResult.from_dict(c) for c in d["checks"]], d["timestamp"])


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def envelope(command: str, seed: int, version: str, passed: bool,
             timestamp: str = "", **body) -> dict:
    d = {"schema": SCHEMA_VERSION, "command": command, "version": version,
         "seed": int(seed), "timestamp": timestamp or now_iso(), "pass": bool(passed)}
    d.update(body)
    return d


def dumps(report: dict) -> str:
    return json.dumps(encode(report), indent=2, sort_keys=True) + "\n"


def validate(report: dict) -> None:
    """Raise jsonschema.ValidationError if ``report`` does not match the schema."""
    import jsonschema

    jsonschema.validate(encode(report), REPORT_SCHEMA)


def write_time_series(series, out) -> None:
    """One row per (step, tracked mode) in the CSV_COLUMNS order."""
    from .wave_sim import mode_wavevector, running_phase_speed

    cfg = series.config
    t = series.times
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    speeds = []
    for j, mode in enumerate(cfg.modes):
        amps = series.mode_amplitudes[j]
        if mode.kind == "transverse":
            m = np.linalg.norm(mode_wavevector(mode.index, cfg.N, cfg.dx))
            d = int(np.argmax(np.abs(amps[0])))
            speeds.append(running_phase_speed(t, amps[:, d], m))
        else:
            speeds.append(np.zeros(len(t)))
    for i in range(len(t)):
        for j in range(len(cfg.modes)):
            a = series.mode_amplitudes[j, i]
            sp = speeds[j][i]
            writer.writerow([i, repr(float(t[i])), j,
                             *(repr(float(x)) for z in a for x in (z.real, z.imag)),
                             "" if not np.isfinite(sp) else repr(float(sp)),
                             repr(float(series.e_norm[i])), repr(float(series.b_norm[i]))])


def time_series_csv(series) -> str:
    buf = io.StringIO()
    write_time_series(series, buf)
    return buf.getvalue()
