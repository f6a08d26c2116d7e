"""CSV and JSON interchange for decompositions, synthetic signals and run reports.

CSV files have one header row and one column per series; a ``time`` column
is ignored on ingest. Floats are written with ``repr`` so values round-trip
exactly.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .signal import DecompositionResult


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Return ``(names, data)`` with ``data`` shaped ``(n_columns, n_rows)``."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise InputError(f"{path}: need a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    if any(len(r) != len(header) for r in rows[1:]):
        raise InputError(f"{path}: rows have inconsistent column counts")
    try:
        values = np.array([[float(cell) for cell in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric value ({exc})") from exc
    keep = [i for i, h in enumerate(header) if h.lower() != "time"]
    if not keep:
        raise InputError(f"{path}: no data columns")
    return [header[i] for i in keep], values[:, keep].T.copy()


def write_csv(path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    if len({a.shape[0] for a in arrays}) > 1:
        raise ValueError("all CSV columns must have the same length")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([repr(float(v)) for v in row])


_MODE_COLUMN = re.compile(r"^u(\d+)_c(\d+)$")
_JUMP_COLUMN = re.compile(r"^(?:v_)?c(\d+)$")


def mode_columns(modes: np.ndarray, channel_offset: int = 0) -> dict[str, np.ndarray]:
    """``{"u<k>_c<c>": series}`` for modes shaped ``(K, C, N)``, 1-based labels."""
    out = {}
    for k, mode in enumerate(modes, start=1):
        for c, series in enumerate(mode, start=1 + channel_offset):
            out[f"u{k}_c{c}"] = series
    return out


def channel_columns(data: np.ndarray, prefix: str = "") -> dict[str, np.ndarray]:
    return {f"{prefix}c{c}": row for c, row in enumerate(np.atleast_2d(data), start=1)}


@dataclass
class Components:
    """Modes grouped per channel plus the per-channel jump, as read from disk."""

    modes: dict[int, list[np.ndarray]] = field(default_factory=dict)
    jump: dict[int, np.ndarray] = field(default_factory=dict)
    n_samples: int = 0

    @property
    def channels(self) -> list[int]:
        return sorted(set(self.modes) | set(self.jump))


def _components_from_columns(names, data, comps: Components, jump_only=False) -> None:
    for name, series in zip(names, data):
        if comps.n_samples and series.shape[0] != comps.n_samples:
            raise InputError("component files have different lengths")
        comps.n_samples = series.shape[0]
        m = None if jump_only else _MODE_COLUMN.match(name)
        if m:
            k, c = int(m.group(1)), int(m.group(2))
            comps.modes.setdefault(c, []).append((k, series))
            continue
        j = _JUMP_COLUMN.match(name)
        if j and (jump_only or name.startswith("v_")):
            comps.jump[int(j.group(1))] = series


def _sort_modes(comps: Components) -> Components:
    comps.modes = {c: [s for _, s in sorted(v, key=lambda t: t[0])] for c, v in comps.modes.items()}
    return comps


def read_components(path) -> Components:
    """Load components from a decomposition directory or a ground-truth CSV.

    A directory must hold ``modes.csv`` and/or ``jump.csv`` as written by the
    ``decompose`` command. A file is read in the ground-truth layout of the
    ``synth`` command (``u<k>_c<c>`` and ``v_c<c>`` columns).
    """
    path = Path(path)
    comps = Components()
    if path.is_dir():
        modes_file, jump_file = path / "modes.csv", path / "jump.csv"
        if not modes_file.exists() and not jump_file.exists():
            raise InputError(f"{path}: no modes.csv or jump.csv found")
        if modes_file.exists():
            names, data = _read_maybe_empty(modes_file)
            _components_from_columns(names, data, comps)
        if jump_file.exists():
            names, data = read_csv(jump_file)
            _components_from_columns(names, data, comps, jump_only=True)
    elif path.is_file():
        names, data = read_csv(path)
        _components_from_columns(names, data, comps)
    else:
        raise InputError(f"{path} does not exist")
    return _sort_modes(comps)


def _read_maybe_empty(path):
    # a decomposition with no modes writes a header-only file
    text = Path(path).read_text().strip()
    if "\n" not in text:
        return [], np.zeros((0, 0))
    return read_csv(path)


def write_decomposition(out_dir, results: list[DecompositionResult]) -> None:
    """Write modes.csv, jump.csv and residual.csv for one multichannel result
    or a list of single-channel results (one per channel, in order)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    modes, jumps, residuals = {}, [], []
    offset = 0
    for res in results:
        modes.update(mode_columns(res.modes, channel_offset=offset))
        jumps.append(res.jump)
        residuals.append(res.residual)
        offset += res.jump.shape[0]
    if modes:
        write_csv(out_dir / "modes.csv", modes)
    else:
        (out_dir / "modes.csv").write_text("\n")
    write_csv(out_dir / "jump.csv", channel_columns(np.vstack(jumps)))
    write_csv(out_dir / "residual.csv", channel_columns(np.vstack(residuals)))


def _finite_or_none(x):
    return x if x is None or math.isfinite(x) else None


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "config", "multivariate", "duration_s", "runs"],
    "properties": {
        "version": {"type": "string"},
        "config": {"type": "object"},
        "multivariate": {"type": "boolean"},
        "seed": {"type": ["integer", "null"]},
        "sample_rate": {"type": "number"},
        "duration_s": {"type": "number", "minimum": 0},
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["channels", "center_frequencies_hz", "energies", "converged",
                             "stages"],
                "properties": {
                    "channels": {"type": "array", "items": {"type": "integer"}},
                    "center_frequencies_hz": {"type": "array", "items": {"type": "number"}},
                    "energies": {"type": "array", "items": {"type": "number"}},
                    "converged": {"type": "boolean"},
                    "stages": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["mode_index", "alpha_stages", "omega_trace",
                                         "converged", "energy"],
                            "properties": {
                                "mode_index": {"type": "integer"},
                                "alpha_stages": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "additionalProperties": False,
                                        "required": ["alpha", "iterations",
                                                     "final_relative_change"],
                                        "properties": {
                                            "alpha": {"type": "number"},
                                            "iterations": {"type": "integer"},
                                            "final_relative_change": {"type": ["number", "null"]},
                                        },
                                    },
                                },
                                "omega_trace": {"type": "array", "items": {"type": "number"}},
                                "converged": {"type": "boolean"},
                                "energy": {"type": "number"},
                            },
                        },
                    },
                },
            },
        },
    },
}


@dataclass
class RunReport:
    version: str
    config: dict
    multivariate: bool
    duration_s: float
    runs: list[dict]
    sample_rate: float = 1000.0
    seed: int | None = None

    @classmethod
    def from_results(cls, results: list[DecompositionResult], config, multivariate: bool,
                     duration_s: float, version: str, seed=None) -> "RunReport":
        runs, offset = [], 0
        for res in results:
            n_ch = res.jump.shape[0]
            stages = []
            for d in res.diagnostics:
                entry = d.to_dict()
                for stage in entry["alpha_stages"]:
                    stage["final_relative_change"] = _finite_or_none(stage["final_relative_change"])
                stages.append(entry)
            runs.append({
                "channels": list(range(offset + 1, offset + n_ch + 1)),
                "center_frequencies_hz": [float(f) for f in res.center_frequencies],
                "energies": [float(e) for e in res.energies],
                "converged": bool(res.converged),
                "stages": stages,
            })
            offset += n_ch
        rate = results[0].sample_rate if results else 1000.0
        return cls(version=version, config=config.to_dict(), multivariate=multivariate,
                   duration_s=float(duration_s), runs=runs, sample_rate=float(rate), seed=seed)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")
