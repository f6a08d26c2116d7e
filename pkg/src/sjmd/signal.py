"""Signal containers, solver configuration and boundary handling."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

MIN_LENGTH = 8


class ValidationError(ValueError):
    """Raised when a signal violates the container invariants."""


class NonFiniteError(ValidationError):
    pass


class TooShortError(ValidationError):
    pass


class ChannelMismatchError(ValidationError):
    pass


class LengthMismatchError(ValueError):
    pass


class ConfigError(ValueError):
    """Raised for solver parameters outside their admissible range."""


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real time series."""

    samples: np.ndarray
    sample_rate: float = 1000.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValidationError("Signal samples must be one-dimensional")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if not self.sample_rate > 0:
            raise ValidationError("sample_rate must be positive")

    def __len__(self):
        return self.samples.shape[0]


@dataclass(frozen=True)
class MultichannelSignal:
    """Channels stacked row-wise in a ``(C, N)`` array sharing one sample rate.

    Construction does not enforce the length/finiteness invariants so that
    raw input can be wrapped first and checked with :func:`validate`.
    """

    data: np.ndarray
    sample_rate: float = 1000.0

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim == 1:
            data = data[None, :]
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValidationError("expected a (channels, samples) array")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        if not self.sample_rate > 0:
            raise ValidationError("sample_rate must be positive")

    @classmethod
    def from_channels(cls, channels: Sequence[Signal | Sequence[float]],
                      sample_rate: float | None = None) -> "MultichannelSignal":
        """Stack channels; raises ``ChannelMismatchError`` on unequal lengths."""
        if len(channels) == 0:
            raise ValidationError("at least one channel is required")
        rates = {c.sample_rate for c in channels if isinstance(c, Signal)}
        if len(rates) > 1:
            raise ChannelMismatchError(f"channels have different sample rates {sorted(rates)}")
        if sample_rate is None:
            sample_rate = rates.pop() if rates else 1000.0
        arrays = [np.asarray(c.samples if isinstance(c, Signal) else c, dtype=float)
                  for c in channels]
        lengths = {a.shape[0] for a in arrays}
        if len(lengths) > 1:
            raise ChannelMismatchError(f"channels have unequal lengths {sorted(lengths)}")
        return cls(np.vstack(arrays), sample_rate)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> list[Signal]:
        return [Signal(row, self.sample_rate) for row in self.data]

    def __len__(self):
        return self.n_samples


def as_multichannel(signal, sample_rate: float | None = None) -> MultichannelSignal:
    """Coerce a Signal, MultichannelSignal or array into a MultichannelSignal."""
    if isinstance(signal, MultichannelSignal):
        return signal
    if isinstance(signal, Signal):
        return MultichannelSignal(signal.samples, signal.sample_rate)
    if isinstance(signal, (list, tuple)) and signal and isinstance(signal[0], Signal):
        return MultichannelSignal.from_channels(signal, sample_rate)
    return MultichannelSignal(signal, 1000.0 if sample_rate is None else sample_rate)


def validate(signal) -> MultichannelSignal:
    """Check the input invariants and return the signal unchanged.

    Raises
    ------
    ChannelMismatchError
        Channels of unequal length (only reachable for list input).
    TooShortError
        Fewer than 8 samples.
    NonFiniteError
        NaN or infinite samples.
    """
    if isinstance(signal, (list, tuple)):
        signal = MultichannelSignal.from_channels(signal)
    sig = as_multichannel(signal)
    if sig.n_samples < MIN_LENGTH:
        raise TooShortError(f"signal has {sig.n_samples} samples, need at least {MIN_LENGTH}")
    if not np.all(np.isfinite(sig.data)):
        raise NonFiniteError("signal contains NaN or infinite samples")
    return signal if isinstance(signal, (Signal, MultichannelSignal)) else sig


def _split(n: int) -> tuple[int, int]:
    return (n + 1) // 2, n // 2


def mirror_extend(samples) -> np.ndarray:
    """Half-length symmetric extension along the last axis.

    ``[1, 2, 3, 4] -> [2, 1, 1, 2, 3, 4, 4, 3]``. Odd lengths put the extra
    sample on the left, so the output is always twice the input length.
    """
    x = np.asarray(samples.samples if isinstance(samples, Signal) else samples, dtype=float)
    n = x.shape[-1]
    if n < 2:
        raise TooShortError("mirror extension needs at least 2 samples")
    left, right = _split(n)
    out = np.concatenate([x[..., :left][..., ::-1], x, x[..., n - right:][..., ::-1]], axis=-1)
    if isinstance(samples, Signal):
        return Signal(out, samples.sample_rate)
    return out


def crop(extended, original_length: int) -> np.ndarray:
    """Inverse of :func:`mirror_extend`: the central ``original_length`` samples."""
    x = np.asarray(extended.samples if isinstance(extended, Signal) else extended)
    if x.shape[-1] != 2 * original_length or original_length < 1:
        raise LengthMismatchError(
            f"extended length {x.shape[-1]} is not twice original length {original_length}")
    left, _ = _split(original_length)
    out = x[..., left:left + original_length]
    if isinstance(extended, Signal):
        return Signal(out, extended.sample_rate)
    return out


@dataclass(frozen=True)
class SolverConfig:
    """User parameters of the successive decomposition.

    ``alpha_max`` bounds the doubling bandwidth schedule started at
    ``alpha_init``; ``beta`` weights the jump penalty, ``b_bar`` is the
    smallest jump height (signal units) treated as a genuine step and ``tau``
    sets the ADMM penalty ``gamma = tau * b * beta``.

    ``stop_rule`` selects the mode-count test: ``"signed"`` stops once
    ``E_k - E_{k-1} <= eps_mode``; ``"abs"`` uses ``|E_k - E_{k-1}|``.
    Both also stop when ``E_k <= eps_mode`` or ``max_modes`` is reached.

    ``zero_mean_modes`` keeps the DC bin out of every mode so that signal
    offsets end up in the jump (or, with jumps disabled, the residual).
    """

    alpha_max: float = 80000.0
    alpha_init: float = 100.0
    beta: float = 0.05
    b_bar: float = 0.3
    tau: float = 50.0
    eps: float = 1e-7
    eps_mode: float = 1e-7
    max_inner_iters: int = 500
    max_modes: int = 30
    jump_enabled: bool = True
    warm_start_omega: bool = True
    warm_start_jump: bool = True
    zero_mean_modes: bool = True
    stop_rule: str = "signed"

    def __post_init__(self):
        for name in ("alpha_max", "alpha_init", "beta", "b_bar", "eps", "eps_mode"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        if not (math.isfinite(self.tau) and self.tau > 1):
            raise ConfigError(f"tau must exceed 1 for a strongly convex x-subproblem, got {self.tau!r}")
        if int(self.max_inner_iters) < 1 or int(self.max_modes) < 1:
            raise ConfigError("max_inner_iters and max_modes must be at least 1")
        if self.stop_rule not in ("signed", "abs"):
            raise ConfigError(f"stop_rule must be 'signed' or 'abs', got {self.stop_rule!r}")
        b = self.b
        if not (math.isfinite(b) and b > 0):
            raise ConfigError("b = 2 / b_bar**2 must be finite and positive")

    @property
    def b(self) -> float:
        return 2.0 / self.b_bar ** 2

    @property
    def gamma(self) -> float:
        return self.tau * self.b * self.beta

    @property
    def mu(self) -> float:
        return self.beta / self.gamma

    def alpha_schedule(self) -> list[float]:
        """Doubling sequence from ``alpha_init`` while it stays <= ``alpha_max``.

        Always contains at least the initial stage.
        """
        alphas = [float(self.alpha_init)]
        while 2 * alphas[-1] <= self.alpha_max:
            alphas.append(2 * alphas[-1])
        return alphas

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class StageDiagnostics:
    """Convergence record for one extracted mode."""

    mode_index: int
    alpha_stages: list[tuple[float, int, float]] = field(default_factory=list)
    omega_trace: list[float] = field(default_factory=list)
    traces: list[np.ndarray] = field(default_factory=list)
    converged: bool = True
    energy: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mode_index": self.mode_index,
            "alpha_stages": [
                {"alpha": a, "iterations": i, "final_relative_change": r}
                for a, i, r in self.alpha_stages
            ],
            "omega_trace": list(self.omega_trace),
            "converged": self.converged,
            "energy": self.energy,
        }


@dataclass
class DecompositionResult:
    """Modes, jump and residual of a decomposition, all shaped like the input.

    ``modes`` has shape ``(K, C, N)``; ``jump`` and ``residual`` are
    ``(C, N)``. The residual is ``s - jump - modes.sum(0)`` by construction.
    """

    modes: np.ndarray
    jump: np.ndarray
    residual: np.ndarray
    center_frequencies: list[float]
    sample_rate: float
    diagnostics: list[StageDiagnostics] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)

    @property
    def n_modes(self) -> int:
        return self.modes.shape[0]

    @property
    def converged(self) -> bool:
        return all(d.converged for d in self.diagnostics)

    def mode_signals(self) -> list[MultichannelSignal]:
        return [MultichannelSignal(m, self.sample_rate) for m in self.modes]

    def reconstruction(self) -> np.ndarray:
        return self.jump + self.modes.sum(axis=0) + self.residual
