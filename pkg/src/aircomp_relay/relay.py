"""Two-slot amplify-and-forward relay policies.

Nodes in the relay group transmit to the relay in slot 1; in slot 2 the
relay forwards its scaled superposition while the direct group (and, for
the coherent policies, the relay group again) transmits straight to the
sink. Slot-1 reception at the sink is not used (``a_d1 = 0``).

Only the product ``a'_r1 = a_d2 h_rd b_r2 a_r1`` enters the MSE. The split
is fixed by taking ``a_r1 = 1``, giving ``b_r2 = a'_r1 / (a_d2 h_rd)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .baseline import inversion_powers, solve_baseline
from .channel import LinkGains


class Policy(str, enum.Enum):
    BASELINE = "AirComp"
    SIM_RELAY = "SimRelay"
    COH_RELAY = "CohRelay"
    SIM_RELAY_PLUS = "SimRelayPlus"
    COH_RELAY_PLUS = "CohRelayPlus"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Grouping:
    relay_users: np.ndarray
    direct_users: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.relay_users, dtype=int)
        d = np.asarray(self.direct_users, dtype=int)
        if np.intersect1d(r, d).size:
            raise ValueError("relay and direct groups overlap")
        object.__setattr__(self, "relay_users", r)
        object.__setattr__(self, "direct_users", d)

    @property
    def n_nodes(self) -> int:
        return self.relay_users.size + self.direct_users.size

    def relay_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_nodes, dtype=bool)
        mask[self.relay_users] = True
        return mask


@dataclass(frozen=True)
class RelaySolution:
    a_r1_eff: float
    a_d2: float
    b1: np.ndarray
    b2: np.ndarray
    b_r2: float
    mse_signal: float
    mse_noise: float
    policy_tag: Policy
    a_d1: float = 0.0

    @property
    def mse(self) -> float:
        return self.mse_signal + self.mse_noise

    @property
    def node_power(self) -> np.ndarray:
        return self.b1**2 + self.b2**2

    @property
    def mean_node_power(self) -> float:
        return float(self.node_power.mean())


def n_relay_users(relay_fraction, k):
    # round half up
    return int(np.floor(relay_fraction * k + 0.5))


def group_nodes(gains: LinkGains, relay_fraction) -> Grouping:
    """Relay group = nodes with the smallest ``h_kd^2 - h_kr^2`` (ties by index)."""
    if not 0.0 <= relay_fraction <= 1.0:
        raise ValueError("relay_fraction must lie in [0, 1]")
    k = gains.n_nodes
    m = n_relay_users(relay_fraction, k)
    order = np.argsort(gains.h_kd**2 - gains.h_kr**2, kind="stable")
    return Grouping(np.sort(order[:m]), np.sort(order[m:]))


def _relay_gain(a_r1_eff, a_d2, h_rd):
    return a_r1_eff / (a_d2 * h_rd) if a_r1_eff > 0 else 0.0


def _direct_group(gains, grouping, p_max, sigma2):
    """Baseline solve on the direct group; ``None`` when it is empty."""
    if grouping.direct_users.size == 0:
        return None
    return solve_baseline(gains.h_kd[grouping.direct_users], p_max, sigma2)


def solve_sim_relay(gains: LinkGains, grouping: Grouping, p_max, sigma2) -> RelaySolution:
    k = gains.n_nodes
    r, d = grouping.relay_users, grouping.direct_users
    b1 = np.zeros(k)
    b2 = np.zeros(k)
    mse_sig = mse_noise = 0.0
    a_r1 = 0.0
    if r.size:
        sol_r = solve_baseline(gains.h_kr[r], p_max, sigma2)
        a_r1, b1[r] = sol_r.a, sol_r.b
        mse_sig += sol_r.mse_signal
        mse_noise += sol_r.mse_noise
    sol_d = _direct_group(gains, grouping, p_max, sigma2)
    if sol_d is not None:
        a_d2 = sol_d.a
        b2[d] = sol_d.b
        mse_sig += sol_d.mse_signal
        mse_noise += sol_d.mse_noise
    else:
        # no direct users: the sink scaling only carries relay noise; tie it to a'_r1
        a_d2 = a_r1
        mse_noise += sigma2 * a_d2**2
    return RelaySolution(a_r1, a_d2, b1, b2, _relay_gain(a_r1, a_d2, gains.h_rd),
                         mse_sig, mse_noise, Policy.SIM_RELAY)


def coherent_split(a_r1_eff, a_d2, h_kr, h_kd, p):
    """Power split over the relay and direct paths maximizing the combined coefficient.

    Returns ``(b1, b2, gamma)`` with ``b1**2 + b2**2 == p`` and
    ``gamma = a_r1_eff h_kr b1 + a_d2 h_kd b2``.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    u = a_r1_eff * h_kr
    v = a_d2 * h_kd
    norm2 = u * u + v * v
    if not norm2 > 0:
        raise ValueError("both paths have zero gain")
    rho = np.sqrt(p) / np.sqrt(norm2)
    return rho * u, rho * v, rho * norm2


def one_iter(gains: LinkGains, grouping: Grouping, a_r1_eff, a_d2, p_max, sigma2):
    """Per-node coherent power control for the relay group at fixed Rx-scalings.

    Returns ``(mse_rd, b1, b2, e)`` where the arrays are indexed like
    ``grouping.relay_users``.
    """
    r = grouping.relay_users
    u = a_r1_eff * gains.h_kr[r]
    v = a_d2 * gains.h_kd[r]
    norm2 = u * u + v * v
    with np.errstate(divide="ignore", invalid="ignore"):
        rho_max = np.sqrt(p_max) / np.sqrt(norm2)
        gamma_max = rho_max * norm2
        aligned = gamma_max >= 1.0
        rho = np.where(aligned, 1.0 / norm2, rho_max)
    # a node with no usable path contributes a full miss
    dead = norm2 == 0
    rho[dead] = 0.0
    gamma_max[dead] = 0.0
    b1 = rho * u
    b2 = rho * v
    e = np.where(aligned & ~dead, 0.0, 1.0 - gamma_max)
    mse_rd = float((e**2).sum() + sigma2 * a_r1_eff**2)
    return mse_rd, b1, b2, e


def solve_coh_relay(gains: LinkGains, grouping: Grouping, p_max, sigma2, delta=None,
                    history=None) -> RelaySolution:
    """Coherent relaying: start at the SimRelay scalings, then shrink ``a'_r1``.

    ``delta`` defaults to 1% of the initial ``a'_r1``. If ``history`` is a
    list, the accepted ``MSE_rd`` values are appended to it.
    """
    r, d = grouping.relay_users, grouping.direct_users
    sim = solve_sim_relay(gains, grouping, p_max, sigma2)
    if r.size == 0:
        return _retag(sim, Policy.COH_RELAY)
    if delta is None:
        delta = sim.a_r1_eff / 100.0
    if not delta > 0:
        raise ValueError("delta must be positive")

    a_d2 = sim.a_d2
    a_r1 = sim.a_r1_eff
    mse_rd, b1_r, b2_r, e = one_iter(gains, grouping, a_r1, a_d2, p_max, sigma2)
    if history is not None:
        history.append(mse_rd)
    while a_r1 > delta:
        trial = one_iter(gains, grouping, a_r1 - delta, a_d2, p_max, sigma2)
        if trial[0] < mse_rd:
            a_r1 -= delta
            mse_rd, b1_r, b2_r, e = trial
            if history is not None:
                history.append(mse_rd)
        else:
            break

    k = gains.n_nodes
    b1 = np.zeros(k)
    b2 = np.zeros(k)
    b1[r], b2[r] = b1_r, b2_r
    b2[d] = sim.b2[d]
    mse_d_signal = float(((a_d2 * gains.h_kd[d] * sim.b2[d] - 1.0) ** 2).sum())
    return RelaySolution(
        a_r1, a_d2, b1, b2, _relay_gain(a_r1, a_d2, gains.h_rd),
        mse_signal=float((e**2).sum()) + mse_d_signal,
        mse_noise=sigma2 * (a_r1**2 + a_d2**2),
        policy_tag=Policy.COH_RELAY,
    )


def _retag(sol: RelaySolution, tag: Policy) -> RelaySolution:
    return RelaySolution(sol.a_r1_eff, sol.a_d2, sol.b1, sol.b2, sol.b_r2,
                         sol.mse_signal, sol.mse_noise, tag)


def solve_refined(policy, gains: LinkGains, grouping: Grouping, p_max, sigma2,
                  gamma_floor=1.0, theta=0.5, baseline_a=None, n_grid=200,
                  grid_range=(0.05, 0.995)) -> RelaySolution:
    """Minimize ``theta*MSE + (1-theta)*TxP`` on the noise-floor circle.

    Candidates satisfy ``a'_r1**2 + a_d2**2 == gamma_floor * baseline_a**2``;
    ``a_d2`` is scanned over ``grid_range`` times the circle radius.
    ``baseline_a`` defaults to the Rx-scaling of the all-direct baseline.
    """
    policy = Policy(policy)
    if policy not in (Policy.SIM_RELAY_PLUS, Policy.COH_RELAY_PLUS):
        raise ValueError(f"not a refined policy: {policy}")
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if baseline_a is None:
        baseline_a = solve_baseline(gains.h_kd, p_max, sigma2).a
    radius2 = gamma_floor * baseline_a**2
    if not radius2 > 0:
        raise ValueError("gamma_floor * baseline_a**2 must be positive")

    r, d = grouping.relay_users, grouping.direct_users
    k = gains.n_nodes
    if r.size == 0:
        sim = solve_sim_relay(gains, grouping, p_max, sigma2)
        return _retag(sim, policy)

    radius = np.sqrt(radius2)
    a_d2 = np.linspace(grid_range[0], grid_range[1], n_grid) * radius
    a_r1 = np.sqrt(radius2 - a_d2**2)
    sp = np.sqrt(p_max)

    # direct group: channel inversion at a_d2, (n_grid, |N_d|)
    hd = gains.h_kd[d]
    b2_d = inversion_powers(a_d2[:, None], hd, p_max)
    err_d = 1.0 - a_d2[:, None] * hd * b2_d

    hr = gains.h_kr[r]
    if policy is Policy.COH_RELAY_PLUS:
        u = a_r1[:, None] * hr
        v = a_d2[:, None] * gains.h_kd[r]
        norm2 = u * u + v * v
        gamma_max = sp * np.sqrt(norm2)
        rho = np.where(gamma_max >= 1.0, 1.0 / norm2, sp / np.sqrt(norm2))
        b1_r, b2_r = rho * u, rho * v
        err_r = np.where(gamma_max >= 1.0, 0.0, 1.0 - gamma_max)
    else:
        b1_r = inversion_powers(a_r1[:, None], hr, p_max)
        b2_r = np.zeros_like(b1_r)
        err_r = 1.0 - a_r1[:, None] * hr * b1_r

    mse_sig = (err_r**2).sum(axis=1) + (err_d**2).sum(axis=1)
    mse = mse_sig + sigma2 * radius2
    txp = ((b1_r**2 + b2_r**2).sum(axis=1) + (b2_d**2).sum(axis=1)) / k
    objective = theta * mse + (1.0 - theta) * txp
    j = int(np.argmin(objective))

    b1 = np.zeros(k)
    b2 = np.zeros(k)
    b1[r], b2[r] = b1_r[j], b2_r[j]
    b2[d] = b2_d[j]
    return RelaySolution(
        float(a_r1[j]), float(a_d2[j]), b1, b2,
        _relay_gain(a_r1[j], a_d2[j], gains.h_rd),
        mse_signal=float(mse_sig[j]),
        mse_noise=float(sigma2 * radius2),
        policy_tag=policy,
    )


def relay_tx_power(solution: RelaySolution, gains: LinkGains, grouping: Grouping) -> float:
    """Signal power the relay spends forwarding (``a_r1 = 1`` convention)."""
    r = grouping.relay_users
    if r.size == 0:
        return 0.0
    return float(solution.b_r2**2 * ((gains.h_kr[r] * solution.b1[r]) ** 2).sum())


def relay_noise_power(solution: RelaySolution, sigma2) -> float:
    """Amplified relay noise power ``b_r2^2 sigma2``; diagnostic only."""
    return float(solution.b_r2**2 * sigma2)
