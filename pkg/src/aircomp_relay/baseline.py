"""Single-hop AirComp power control.

With phases pre-compensated, the MSE of the scaled superposition is

    sum_k (a h_k b_k - 1)^2 + sigma2 a^2,    b_k^2 <= p_max.

For a fixed Rx-scaling ``a`` the best Tx-scalings are ``min(1/(a h_k),
sqrt(p_max))``: strong nodes invert their channel exactly and the weakest
``i*`` nodes transmit at full power. The solver scans every critical number
with a closed-form ``a`` for each, restricted to the range of ``a`` where that
critical number is consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BaselineSolution:
    a: float
    b: np.ndarray
    critical_index: int
    mse_signal: float
    mse_noise: float

    @property
    def mse(self) -> float:
        return self.mse_signal + self.mse_noise

    @property
    def node_power(self) -> np.ndarray:
        return self.b**2


def optimal_rx_scaling(h_active, p_max, sigma2, lower=0.0):
    """Minimizer of ``sum (a h sqrt(p_max) - 1)^2 + sigma2 a^2`` over ``a >= lower``.

    ``h_active`` are the channels of the nodes at full power. With no such
    node the unconstrained optimum is ``a = 0``, so the bound ``lower`` is
    returned; it must then be positive.
    """
    h = np.asarray(h_active, dtype=float)
    if p_max <= 0:
        raise ValueError("p_max must be positive")
    if sigma2 < 0:
        raise ValueError("sigma2 must be nonnegative")
    if h.size == 0:
        if lower > 0:
            return float(lower)
        raise ValueError("empty active set needs a positive feasibility bound")
    if not (h > 0).any():
        raise ValueError("h_active must contain a positive gain")
    sp = np.sqrt(p_max)
    a = h.sum() * sp / ((h**2).sum() * p_max + sigma2)
    return float(max(a, lower))


def baseline_mse(a, b, h, sigma2):
    """Return ``(mse_signal, mse_noise)`` for given scalings."""
    b = np.asarray(b, dtype=float)
    h = np.asarray(h, dtype=float)
    if b.shape != h.shape:
        raise ValueError(f"length mismatch: b has {b.size}, h has {h.size}")
    return float(((a * h * b - 1.0) ** 2).sum()), float(sigma2 * a**2)


def inversion_powers(a, h, p_max):
    """Channel-inversion Tx-scalings ``min(1/(a h), sqrt(p_max))``."""
    h = np.asarray(h, dtype=float)
    with np.errstate(divide="ignore"):
        return np.minimum(1.0 / (a * h), np.sqrt(p_max))


def solve_baseline(h, p_max, sigma2) -> BaselineSolution:
    h = np.asarray(h, dtype=float).ravel()
    if h.size == 0:
        raise ValueError("h must be nonempty")
    if not (h > 0).all():
        raise ValueError("all channel gains must be positive")
    if p_max <= 0 or sigma2 < 0:
        raise ValueError("p_max must be positive and sigma2 nonnegative")

    order = np.argsort(h, kind="stable")
    hs = h[order]
    k = hs.size
    sp = np.sqrt(p_max)

    # candidate i: nodes hs[:i] at full power, the rest invert.
    # consistent range: 1/(hs[i] sp) <= a <= 1/(hs[i-1] sp)
    s1 = np.concatenate([[0.0], np.cumsum(hs)])
    s2 = np.concatenate([[0.0], np.cumsum(hs**2)])
    lo = np.concatenate([1.0 / (hs * sp), [0.0]])
    hi = np.concatenate([[np.inf], 1.0 / (hs * sp)])
    denom = s2 * p_max + sigma2
    with np.errstate(divide="ignore", invalid="ignore"):
        a_star = np.where(denom > 0, s1 * sp / denom, 0.0)
    a_cand = np.clip(a_star, lo, hi)
    if sigma2 == 0:
        # every a >= 1/(h_min sp) is exact; keep the smallest
        a_cand[0] = lo[0]
    # the last candidate's range reaches down to 0, which is never optimal
    a_cand = np.maximum(a_cand, np.finfo(float).tiny)

    # signal error of candidate i: sum over j < i of (1 - a hs_j sp)^2, but
    # evaluate with the actual inversion rule so clipped candidates stay exact
    miss = np.maximum(0.0, 1.0 - np.outer(a_cand, hs) * sp)
    sig = (miss**2).sum(axis=1)
    total = sig + sigma2 * a_cand**2
    best_val = total.min()
    ties = np.flatnonzero(total == best_val)
    i_best = int(ties[np.argmin(a_cand[ties])])

    a = float(a_cand[i_best])
    b = np.empty(k)
    b[order] = inversion_powers(a, hs, p_max)
    mse_signal, mse_noise = baseline_mse(a, b, h, sigma2)
    n_full = int((a * hs * sp < 1.0 - 1e-12).sum())
    return BaselineSolution(a, b, n_full, mse_signal, mse_noise)
