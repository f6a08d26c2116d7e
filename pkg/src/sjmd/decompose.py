"""Successive jump and mode decomposition (single- and multi-channel).

Modes are extracted one at a time. Each mode is found by an ADMM loop that
alternates Fourier-domain updates of the mode, its centre frequency and the
residual with the time-domain jump sub-problem, repeated over a doubling
schedule of the bandwidth weight ``alpha``. The extracted mode is removed
from the working signal; the jump stays in place and is re-estimated while
the next mode is extracted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .jump import PenaltyParams, update_auxiliary, update_jump, update_multiplier
from .signal import (
    DecompositionResult,
    MultichannelSignal,
    SolverConfig,
    StageDiagnostics,
    as_multichannel,
    crop,
    mirror_extend,
    validate,
)
from .spectral import (
    HalfSpectrum,
    ZeroSpectrumError,
    forward_half_spectrum,
    inverse_real,
    update_center_frequency,
    update_mode,
    update_residual,
)


class MaxItersExceeded(RuntimeWarning):
    """An ADMM stage stopped at ``max_inner_iters`` without meeting ``eps``."""


@dataclass
class AdmmState:
    u_hat: HalfSpectrum
    omega: float
    r_hat: HalfSpectrum
    v: np.ndarray
    x: np.ndarray
    rho: np.ndarray
    alpha: float
    iteration: int = 0
    converged: bool = False
    trace: list[float] = field(default_factory=list)
    omega_trace: list[float] = field(default_factory=list)

    @property
    def u(self) -> np.ndarray:
        return inverse_real(self.u_hat)

    @property
    def jump_state(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.v, self.x, self.rho


def _relative_change(new: np.ndarray, old: np.ndarray) -> float:
    num = float(np.sum((new - old) ** 2))
    den = float(np.sum(old ** 2))
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / den


def run_admm_stage(work, omega_init: float, alpha: float, config: SolverConfig,
                   jump_state=None) -> AdmmState:
    """Inner ADMM loop at a fixed ``alpha`` on an (already extended) ``(C, M)`` signal.

    Update order per iteration: mode spectrum, shared centre frequency,
    residual spectrum, then (if enabled) jump, auxiliary and multipliers.
    Stops when ``||g_new - g_old||^2 / ||g_old||^2 <= eps`` with
    ``g = u + v`` summed over channels, or after ``max_inner_iters``.

    ``jump_state`` optionally seeds ``(v, x, rho)``; the spectral variables
    always start from zero.
    """
    work = np.atleast_2d(np.asarray(work.data if isinstance(work, MultichannelSignal) else work,
                                    dtype=float))
    if not 0.0 <= omega_init <= 0.5:
        raise ValueError("omega_init must lie in [0, 0.5] cycles/sample")
    c, m = work.shape
    params = PenaltyParams.from_jump_height(config.b_bar, config.beta, config.tau)
    gamma = params.gamma

    s_hat = forward_half_spectrum(work)
    zero_hat = HalfSpectrum(np.zeros_like(s_hat.coefficients), m)
    if jump_state is None or not config.jump_enabled:
        v, x, rho = np.zeros((c, m)), np.zeros((c, m - 1)), np.zeros((c, m - 1))
    else:
        v, x, rho = (np.array(a, dtype=float) for a in jump_state)
    v_hat = forward_half_spectrum(v)

    state = AdmmState(zero_hat, float(omega_init), zero_hat, v, x, rho, float(alpha))
    omega = float(omega_init)
    r_hat = zero_hat
    g_old = v.copy()
    for i in range(1, int(config.max_inner_iters) + 1):
        u_hat = update_mode(s_hat, r_hat, v_hat, omega, alpha)
        if config.zero_mean_modes:
            u_hat.coefficients[..., 0] = 0.0
        try:
            omega = update_center_frequency(u_hat)
        except ZeroSpectrumError:
            pass
        r_hat = update_residual(s_hat, u_hat, v_hat, omega, alpha)
        u = inverse_real(u_hat)
        if config.jump_enabled:
            r = inverse_real(r_hat)
            v = update_jump(work - r - u, x, rho, gamma)
            x = update_auxiliary(np.diff(v, axis=-1) + rho / gamma, params)
            rho = update_multiplier(rho, x, v, gamma)
            v_hat = forward_half_spectrum(v)
        g = u + v
        change = _relative_change(g, g_old)
        g_old = g
        state.trace.append(change)
        state.omega_trace.append(omega)
        if change <= config.eps:
            state.converged = True
            break

    state.u_hat, state.omega, state.r_hat = u_hat, omega, r_hat
    state.v, state.x, state.rho = v, x, rho
    state.iteration = i
    return state


def run_alpha_schedule(work, config: SolverConfig, jump_state=None, omega_init: float = 0.0,
                       mode_index: int = 1):
    """Extract one mode over the doubling ``alpha`` schedule.

    Between stages the spectral variables restart from zero; the centre
    frequency and the jump state ``(v, x, rho)`` carry over unless
    ``warm_start_omega`` / ``warm_start_jump`` are switched off.

    Returns ``(u, omega, v, state, diagnostics)`` with ``u`` and ``v`` on the
    extended grid.
    """
    diag = StageDiagnostics(mode_index=mode_index)
    omega = omega_init
    seed = jump_state if config.warm_start_jump else None
    state = None
    for alpha in config.alpha_schedule():
        state = run_admm_stage(work, omega, alpha, config, seed)
        diag.alpha_stages.append((alpha, state.iteration, state.trace[-1]))
        diag.omega_trace.extend(state.omega_trace)
        diag.traces.append(np.asarray(state.trace))
        diag.converged &= state.converged
        if config.warm_start_omega:
            omega = state.omega
        if config.warm_start_jump:
            seed = state.jump_state
    return state.u, state.omega, state.v, state, diag


def _successive(sig: MultichannelSignal, config: SolverConfig) -> DecompositionResult:
    data = sig.data
    c, n = data.shape
    fs = sig.sample_rate
    empty = DecompositionResult(
        modes=np.zeros((0, c, n)), jump=np.zeros((c, n)), residual=data.copy(),
        center_frequencies=[], sample_rate=fs)
    if not np.any(data):
        return empty

    remaining = data.copy()
    modes, omegas, energies, diags = [], [], [], []
    jump = np.zeros((c, n))
    jump_state = None
    for k in range(1, int(config.max_modes) + 1):
        work = mirror_extend(remaining)
        u, omega, v, state, diag = run_alpha_schedule(work, config, jump_state, mode_index=k)
        u_c = crop(u, n)
        energy = float(np.sum(u_c ** 2)) / n
        diag.energy = energy
        if energy <= config.eps_mode:
            if not modes:
                jump = crop(v, n)
            break
        modes.append(u_c)
        omegas.append(omega)
        energies.append(energy)
        diags.append(diag)
        jump = crop(v, n)
        jump_state = state.jump_state
        remaining = remaining - u_c
        if k > 1:
            delta = energy - energies[-2]
            if config.stop_rule == "abs":
                delta = abs(delta)
            if delta <= config.eps_mode:
                break

    if any(not d.converged for d in diags):
        warnings.warn("some ADMM stages hit max_inner_iters before converging",
                      MaxItersExceeded, stacklevel=3)
    stacked = np.array(modes) if modes else np.zeros((0, c, n))
    residual = data - jump - stacked.sum(axis=0)
    return DecompositionResult(
        modes=stacked, jump=jump, residual=residual,
        center_frequencies=[w * fs for w in omegas], sample_rate=fs,
        diagnostics=diags, energies=energies)


def decompose(signal, config: SolverConfig | None = None) -> DecompositionResult:
    """Single-channel successive jump and mode decomposition.

    Parameters
    ----------
    signal : Signal, MultichannelSignal with one channel, or 1-D array
    config : SolverConfig, optional

    Returns
    -------
    DecompositionResult
        ``modes`` of shape ``(K, 1, N)`` in extraction order, the jump, the
        residual and centre frequencies in Hz. An all-zero input returns no
        modes.
    """
    config = config or SolverConfig()
    sig = as_multichannel(validate(signal))
    if sig.n_channels != 1:
        raise ValueError("decompose expects a single channel; use decompose_multivariate "
                         "or decompose_channelwise")
    return _successive(sig, config)


def decompose_multivariate(signal, config: SolverConfig | None = None) -> DecompositionResult:
    """Multichannel variant with one centre frequency per mode shared by all channels.

    Each channel keeps its own mode, residual and jump; the centre-frequency
    update pools the spectral power of every channel.
    """
    config = config or SolverConfig()
    sig = as_multichannel(validate(signal))
    if sig.n_channels == 1:
        return decompose(sig, config)
    return _successive(sig, config)


def decompose_channelwise(signal, config: SolverConfig | None = None) -> list[DecompositionResult]:
    """Run the single-channel decomposition on every channel independently."""
    sig = as_multichannel(validate(signal))
    return [decompose(MultichannelSignal(row, sig.sample_rate), config) for row in sig.data]
