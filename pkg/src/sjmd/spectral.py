"""One-sided spectra and the Fourier-domain mode, centre-frequency and residual updates.

Frequencies are normalized to cycles/sample on the grid ``n / M`` for
``n = 0 .. M // 2``. The forward transform is the unnormalized DFT; the
inverse divides by ``M``. Every array may carry leading channel axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ZeroSpectrumError(ArithmeticError):
    """The spectrum has no energy, so its centroid is undefined."""


@dataclass(frozen=True)
class HalfSpectrum:
    coefficients: np.ndarray
    extended_length: int

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=complex)
        if coef.shape[-1] != self.extended_length // 2 + 1:
            raise ValueError(
                f"{coef.shape[-1]} bins do not match extended length {self.extended_length}")
        object.__setattr__(self, "coefficients", coef)

    @property
    def grid(self) -> np.ndarray:
        return frequency_grid(self.extended_length)

    def _like(self, coefficients) -> "HalfSpectrum":
        return HalfSpectrum(coefficients, self.extended_length)


def frequency_grid(m: int) -> np.ndarray:
    return np.arange(m // 2 + 1) / m


def forward_half_spectrum(samples) -> HalfSpectrum:
    x = np.asarray(samples, dtype=float)
    if x.shape[-1] < 2:
        raise ValueError("need at least 2 samples")
    return HalfSpectrum(np.fft.rfft(x, axis=-1), x.shape[-1])


def inverse_real(spectrum: HalfSpectrum) -> np.ndarray:
    """Real signal whose non-negative-frequency DFT bins are ``spectrum``.

    The negative half is the Hermitian mirror; the imaginary parts of the DC
    and (for even length) Nyquist bins are ignored.
    """
    return np.fft.irfft(spectrum.coefficients, n=spectrum.extended_length, axis=-1)


def update_mode(s_hat: HalfSpectrum, r_hat: HalfSpectrum, v_hat: HalfSpectrum,
                omega_k: float, alpha: float) -> HalfSpectrum:
    """Wiener-like narrowband estimate of the mode around ``omega_k``."""
    nu = s_hat.grid
    den = 1.0 + 2.0 * alpha * (nu - omega_k) ** 2
    return s_hat._like((s_hat.coefficients - r_hat.coefficients - v_hat.coefficients) / den)


def update_center_frequency(u_hat: HalfSpectrum) -> float:
    """Power-weighted centroid of the spectrum over all bins and channels.

    Raises ``ZeroSpectrumError`` for an all-zero spectrum; callers keep the
    previous value in that case.
    """
    power = np.abs(u_hat.coefficients) ** 2
    power = power.reshape(-1, power.shape[-1]).sum(axis=0)
    total = power.sum()
    if not total > 0:
        raise ZeroSpectrumError("cannot locate the centre of an all-zero spectrum")
    omega = float(np.dot(u_hat.grid, power) / total)
    return min(max(omega, 0.0), 0.5)


def update_residual(s_hat: HalfSpectrum, u_hat: HalfSpectrum, v_hat: HalfSpectrum,
                    omega_k: float, alpha: float) -> HalfSpectrum:
    """Residual spectrum, suppressed near ``omega_k`` and passed through far from it."""
    a = alpha ** 2 * (s_hat.grid - omega_k) ** 4
    return s_hat._like(a * (s_hat.coefficients - u_hat.coefficients - v_hat.coefficients) / (1.0 + a))
