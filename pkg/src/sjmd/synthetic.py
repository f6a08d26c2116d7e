"""Synthetic test signals with known components."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signal import MultichannelSignal, Signal


@dataclass(frozen=True)
class JumpSpec:
    """Piecewise-constant waveform on ``t in [0, 1)``.

    ``breakpoints`` holds ``(time, level)`` pairs: from ``time`` onwards the
    signal takes ``level``. Before the first breakpoint it sits at
    ``start_level``.
    """

    breakpoints: tuple[tuple[float, float], ...] = ((0.3, 1.0), (0.7, 0.0))
    start_level: float = 0.0

    def __post_init__(self):
        bps = tuple((float(t), float(level)) for t, level in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        times = [t for t, _ in bps]
        if any(not 0.0 < t < 1.0 for t in times):
            raise ValueError("breakpoint times must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> "JumpSpec":
        """Parse ``"0.3:1,0.7:0"`` (optionally prefixed ``start=<level>;``)."""
        start = 0.0
        text = text.strip()
        if ";" in text:
            head, text = text.split(";", 1)
            key, _, value = head.partition("=")
            if key.strip() != "start":
                raise ValueError(f"unknown jump-spec prefix {head!r}")
            start = float(value)
        pairs = []
        for item in filter(None, (s.strip() for s in text.split(","))):
            t, _, level = item.partition(":")
            pairs.append((float(t), float(level)))
        return cls(tuple(pairs), start)


def make_jump(spec: JumpSpec | None = None, n_samples: int = 1000) -> Signal:
    """Sample a :class:`JumpSpec` at ``t = i / n_samples``."""
    spec = spec or JumpSpec()
    t = np.arange(n_samples) / n_samples
    out = np.full(n_samples, spec.start_level)
    for time, level in spec.breakpoints:
        out[t >= time] = level
    return Signal(out, float(n_samples))


@dataclass(frozen=True)
class GroundTruth:
    """Noiseless parts of a synthetic signal, each shaped ``(C, N)``."""

    oscillations: np.ndarray          # (n_osc, C, N)
    jump: np.ndarray                  # (C, N)
    frequencies: tuple[float, ...]    # Hz, one per oscillation
    noise: np.ndarray = field(repr=False, default=None)

    @property
    def noiseless(self) -> np.ndarray:
        return self.oscillations.sum(axis=0) + self.jump


def three_channel_benchmark(n_samples: int = 1000, sigma: float = 0.1,
                            jump: JumpSpec | None = None, seed: int = 0):
    """Three channels sharing a 2 Hz tone, with a 40 Hz tone and a jump on some.

    ``c1 = cos(2 pi 2 t) + 0.5 cos(2 pi 40 t) + v(t) + noise``,
    ``c2`` drops the jump and ``c3`` drops the 40 Hz tone. ``t`` spans
    ``[0, 1)`` so the sample rate equals ``n_samples``. ``sigma`` is the
    noise standard deviation; each channel gets independent noise.

    Returns
    -------
    (MultichannelSignal, GroundTruth)
    """
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    t = np.arange(n_samples) / n_samples
    slow = np.cos(2 * np.pi * 2 * t)
    fast = 0.5 * np.cos(2 * np.pi * 40 * t)
    v = make_jump(jump, n_samples).samples
    zero = np.zeros(n_samples)
    osc = np.array([[slow, slow, slow], [fast, fast, zero]])
    jumps = np.array([v, zero, v])
    noise = sigma * np.random.default_rng(seed).standard_normal((3, n_samples))
    truth = GroundTruth(osc, jumps, (2.0, 40.0), noise)
    return MultichannelSignal(truth.noiseless + noise, float(n_samples)), truth


def edr_surrogate(duration: float = 20.0, sample_rate: float = 100.0, sigma: float = 0.1,
                  jump: JumpSpec | None = None, seed: int = 0):
    """Single-channel stand-in for a jump-contaminated ECG with respiratory content.

    A 0.3 Hz respiratory wave appears both as baseline wander and as the
    amplitude envelope of a 10 Hz carrier; a two-step staircase and white
    noise are added. The respiratory wave is the low-frequency reference.

    Returns
    -------
    (MultichannelSignal, GroundTruth)
        Oscillations are ordered ``[respiration, modulated carrier]``.
    """
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    resp = np.cos(2 * np.pi * 0.3 * t)
    carrier = (1.0 + 0.5 * resp) * np.cos(2 * np.pi * 10.0 * t)
    spec = jump or JumpSpec(((0.3, 1.0), (0.65, -0.5)))
    v = make_jump(spec, n).samples
    noise = sigma * np.random.default_rng(seed).standard_normal(n)
    truth = GroundTruth(np.array([[resp], [carrier]]), v[None, :], (0.3, 10.0), noise[None, :])
    return MultichannelSignal(truth.noiseless + noise[None, :], sample_rate), truth
