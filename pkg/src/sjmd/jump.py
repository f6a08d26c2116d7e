"""Time-domain jump sub-problem.

The jump component ``v`` is split from its first difference through an
auxiliary variable ``x = Dv`` and solved by ADMM: an exact tridiagonal solve
for ``v``, a closed-form proximal step of the non-convex penalty for ``x``
and a dual step for the multipliers ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded


class NegativeInputError(ValueError):
    pass


def penalty_phi(x, b: float):
    """Piecewise-quadratic sparsity penalty, concave on ``[0, sqrt(2/b))``, 1 above.

    Accepts scalars or arrays of non-negative values.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise NegativeInputError("penalty is defined on [0, inf)")
    knee = math.sqrt(2.0 / b)
    out = np.where(arr < knee, -0.5 * b * arr ** 2 + math.sqrt(2.0 * b) * arr, 1.0)
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class PenaltyParams:
    """Penalty constants derived from the jump height ``b_bar`` and ``tau``.

    ``b = 2 / b_bar**2`` places the saturation knee at ``b_bar``;
    ``gamma = tau * b * beta`` and ``mu = beta / gamma = 1 / (tau * b)``, so
    ``mu * b = 1 / tau < 1`` keeps every scalar x-problem strongly convex.
    """

    b: float
    beta: float
    gamma: float
    mu: float

    def __post_init__(self):
        if not (self.b > 0 and self.beta > 0):
            raise ValueError("b and beta must be positive")
        if not self.gamma > self.b * self.beta:
            raise ValueError("gamma must exceed b * beta (strong convexity of the x-update)")

    @classmethod
    def from_jump_height(cls, b_bar: float, beta: float, tau: float) -> "PenaltyParams":
        if not tau > 1:
            raise ValueError("tau must be greater than 1")
        b = 2.0 / b_bar ** 2
        gamma = tau * b * beta
        return cls(b=b, beta=beta, gamma=gamma, mu=beta / gamma)

    @property
    def threshold(self) -> float:
        """Jump height at which the penalty saturates (equals ``b_bar``)."""
        return math.sqrt(2.0 / self.b)


class DifferenceOperator:
    """Forward difference ``(Dv)_j = v_{j+1} - v_j`` mapping length M to M - 1."""

    def __init__(self, length: int):
        if length < 2:
            raise ValueError("difference operator needs length >= 2")
        self.length = length

    def apply(self, v):
        return np.diff(v, axis=-1)

    def adjoint(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape[:-1] + (self.length,))
        out[..., :-1] -= y
        out[..., 1:] += y
        return out

    def matrix(self) -> np.ndarray:
        m = self.length
        d = np.zeros((m - 1, m))
        idx = np.arange(m - 1)
        d[idx, idx] = -1.0
        d[idx, idx + 1] = 1.0
        return d

    def gram_bands(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of ``D^T D``: stencil (-1, 2, -1), corners 1."""
        diag = np.full(self.length, 2.0)
        diag[0] = diag[-1] = 1.0
        return diag, -np.ones(self.length - 1)


@lru_cache(maxsize=16)
def _factor(m: int, gamma: float) -> np.ndarray:
    diag, off = DifferenceOperator(m).gram_bands()
    ab = np.zeros((2, m))
    ab[1] = gamma * diag + 2.0
    ab[0, 1:] = gamma * off
    return cholesky_banded(ab, lower=False)


def jump_system_solve(rhs, gamma: float) -> np.ndarray:
    """Solve ``(gamma D^T D + 2 I) v = rhs`` along the last axis.

    The matrix is symmetric positive definite and tridiagonal; its banded
    Cholesky factor is cached per ``(M, gamma)``.
    """
    rhs = np.asarray(rhs, dtype=float)
    m = rhs.shape[-1]
    if m == 1:
        return rhs / 2.0
    factor = _factor(m, float(gamma))
    flat = rhs.reshape(-1, m).T
    return cho_solve_banded((factor, False), flat).T.reshape(rhs.shape)


def update_jump(target, x, rho, gamma: float) -> np.ndarray:
    """v-update: minimize ``||target - v||^2 + gamma/2 ||x - Dv - rho/gamma||^2``.

    Normal equations ``(gamma D^T D + 2I) v = gamma D^T x - D^T rho + 2 target``.
    """
    target = np.asarray(target, dtype=float)
    op = DifferenceOperator(target.shape[-1])
    rhs = gamma * op.adjoint(x) - op.adjoint(rho) + 2.0 * target
    return jump_system_solve(rhs, gamma)


def update_auxiliary(h, params: PenaltyParams) -> np.ndarray:
    """Closed-form minimizer of ``mu*phi(|x|) + (x - h)^2 / 2`` per component.

    Firm thresholding: zero for ``|h| <= mu*sqrt(2b)``, identity for
    ``|h| >= b_bar``, linear in between.
    """
    h = np.asarray(h, dtype=float)
    mu, b = params.mu, params.b
    mag = np.abs(h)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        scale = 1.0 / (1.0 - mu * b) - (mu * math.sqrt(2.0 * b) / (1.0 - b * mu)) / mag
    scale = np.where(mag > 0, np.clip(scale, 0.0, 1.0), 0.0)
    return scale * h


def update_multiplier(rho, x, v, gamma: float) -> np.ndarray:
    return np.asarray(rho) - gamma * (np.asarray(x) - np.diff(v, axis=-1))
