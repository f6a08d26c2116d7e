"""Correlation / MSE scoring and greedy matching of extracted to reference components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import LengthMismatchError, Signal


class ZeroVarianceError(ValueError):
    pass


def _values(a) -> np.ndarray:
    return np.asarray(a.samples if isinstance(a, Signal) else a, dtype=float).ravel()


def correlation_coefficient(a, b) -> float:
    """Pearson correlation of two equal-length sequences."""
    x, y = _values(a), _values(b)
    if x.shape != y.shape:
        raise LengthMismatchError(f"lengths differ: {x.size} vs {y.size}")
    x = x - x.mean()
    y = y - y.mean()
    sx, sy = np.sqrt(np.dot(x, x)), np.sqrt(np.dot(y, y))
    if sx == 0 or sy == 0:
        raise ZeroVarianceError("correlation is undefined for a constant sequence")
    return float(np.clip(np.dot(x, y) / (sx * sy), -1.0, 1.0))


def mse(a, b) -> float:
    x, y = _values(a), _values(b)
    if x.shape != y.shape:
        raise LengthMismatchError(f"lengths differ: {x.size} vs {y.size}")
    return float(np.mean((x - y) ** 2))


@dataclass
class EvalReport:
    """Per-reference scores; ``matching[i]`` is the extracted index paired with reference ``i``."""

    matching: list[int | None]
    cc: list[float | None]
    mse: list[float | None]

    @property
    def matched_cc(self) -> list[float]:
        return [c for c in self.cc if c is not None]

    @property
    def mean_cc(self) -> float:
        vals = self.matched_cc
        return float(np.mean(vals)) if vals else float("nan")


def match_components(extracted, references) -> EvalReport:
    """Greedy injective pairing by largest ``|CC|``.

    References are visited in order and each takes its best still-unused
    extracted component. Extracted components with zero variance are never
    chosen; a reference left without a candidate is reported unmatched.
    Reference components with zero variance raise ``ZeroVarianceError``.
    """
    extracted = [_values(e) for e in extracted]
    references = [_values(r) for r in references]
    if not extracted or not references:
        raise ValueError("need at least one extracted and one reference component")
    available = [i for i, e in enumerate(extracted) if np.ptp(e) > 0]
    report = EvalReport([], [], [])
    for ref in references:
        if np.ptp(ref) == 0:
            raise ZeroVarianceError("reference component is constant")
        if not available:
            report.matching.append(None)
            report.cc.append(None)
            report.mse.append(None)
            continue
        scores = [correlation_coefficient(extracted[i], ref) for i in available]
        best = int(np.argmax(np.abs(scores)))
        idx = available.pop(best)
        report.matching.append(idx)
        report.cc.append(scores[best])
        report.mse.append(mse(extracted[idx], ref))
    return report


def score_decomposition(result, truth) -> dict:
    """Score a decomposition against a :class:`~sjmd.synthetic.GroundTruth`.

    Modes are matched channel by channel against the non-constant reference
    oscillations of that channel; jumps are compared directly on channels
    whose true jump is not constant.

    Returns a dict with ``mode_cc``, ``mode_mse``, ``jump_cc``, ``jump_mse``
    (lists) and the two aggregates ``mean_cc_modes`` and ``mean_cc_all``.
    """
    mode_cc, mode_mse, jump_cc, jump_mse = [], [], [], []
    n_channels = truth.jump.shape[0]
    for c in range(n_channels):
        refs = [osc[c] for osc in truth.oscillations if np.ptp(osc[c]) > 0]
        if refs and result.n_modes:
            rep = match_components([m[c] for m in result.modes], refs)
            mode_cc += [x if x is not None else 0.0 for x in rep.cc]
            mode_mse += [x if x is not None else float(np.mean(r ** 2))
                         for x, r in zip(rep.mse, refs)]
        elif refs:
            mode_cc += [0.0] * len(refs)
            mode_mse += [float(np.mean(r ** 2)) for r in refs]
        if np.ptp(truth.jump[c]) > 0:
            try:
                jump_cc.append(correlation_coefficient(result.jump[c], truth.jump[c]))
            except ZeroVarianceError:
                jump_cc.append(0.0)
            jump_mse.append(mse(result.jump[c], truth.jump[c]))
    return {
        "mode_cc": mode_cc,
        "mode_mse": mode_mse,
        "jump_cc": jump_cc,
        "jump_mse": jump_mse,
        "mean_cc_modes": float(np.mean(mode_cc)) if mode_cc else float("nan"),
        "mean_cc_all": float(np.mean(mode_cc + jump_cc)) if mode_cc or jump_cc else float("nan"),
    }
