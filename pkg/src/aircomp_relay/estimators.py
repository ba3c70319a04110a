"""scikit-learn style wrappers around the power-control solvers.

``fit`` solves the power-control problem for one channel realization and
stores the scalings as fitted attributes. Hyper-parameters go through the
constructor so that ``get_params`` / ``set_params`` / ``clone`` work.

    >>> est = RelayPowerControl(policy="CohRelay").fit(X, h_rd=1.6)
    >>> est.relay_power_
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .baseline import baseline_mse, solve_baseline
from .channel import LinkGains
from .relay import (Policy, group_nodes, relay_tx_power, solve_coh_relay, solve_refined,
                    solve_sim_relay)


def _check_gains(X, n_columns):
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != n_columns:
        raise ValueError(f"expected {n_columns} column(s) of channel gains, got {X.shape[1]}")
    if (X < 0).any():
        raise ValueError("channel gains must be nonnegative")
    return X


class AirCompPowerControl(BaseEstimator):
    """Single-hop AirComp: Rx-scaling ``a_`` and Tx-scalings ``b_``.

    ``X`` holds one channel amplitude per node, shape ``(K,)`` or ``(K, 1)``.
    """

    def __init__(self, p_max=10.0, sigma2=1.0):
        self.p_max = p_max
        self.sigma2 = sigma2

    def fit(self, X, y=None):
        h = _check_gains(X, 1)[:, 0]
        sol = solve_baseline(h, self.p_max, self.sigma2)
        self.solution_ = sol
        self.a_ = sol.a
        self.b_ = sol.b
        self.critical_index_ = sol.critical_index
        self.mse_ = sol.mse
        self.n_nodes_ = h.size
        return self

    def node_power(self):
        check_is_fitted(self)
        return self.b_**2

    def score(self, X, y=None):
        """Negative MSE of the fitted scalings on channels ``X``."""
        check_is_fitted(self)
        h = _check_gains(X, 1)[:, 0]
        sig, noise = baseline_mse(self.a_, self.b_, h, self.sigma2)
        return -(sig + noise)


class RelayPowerControl(BaseEstimator):
    """Two-slot relay power control under one of the four relay policies.

    ``X`` has shape ``(K, 2)`` with columns ``[h_kd, h_kr]``; the relay-sink
    gain is passed to ``fit`` as ``h_rd``.
    """

    def __init__(self, policy="CohRelay", relay_fraction=0.3, p_max=10.0, sigma2=1.0,
                 gamma=1.0, theta=0.5, delta_fraction=0.01, grid_size=200):
        self.policy = policy
        self.relay_fraction = relay_fraction
        self.p_max = p_max
        self.sigma2 = sigma2
        self.gamma = gamma
        self.theta = theta
        self.delta_fraction = delta_fraction
        self.grid_size = grid_size

    def fit(self, X, y=None, h_rd=1.0):
        X = _check_gains(X, 2)
        policy = Policy(self.policy)
        gains = LinkGains(X[:, 0], X[:, 1], h_rd)
        grouping = group_nodes(gains, self.relay_fraction)
        if policy is Policy.SIM_RELAY:
            sol = solve_sim_relay(gains, grouping, self.p_max, self.sigma2)
        elif policy is Policy.COH_RELAY:
            start = solve_sim_relay(gains, grouping, self.p_max, self.sigma2).a_r1_eff
            delta = start * self.delta_fraction if start > 0 else None
            sol = solve_coh_relay(gains, grouping, self.p_max, self.sigma2, delta=delta)
        elif policy in (Policy.SIM_RELAY_PLUS, Policy.COH_RELAY_PLUS):
            sol = solve_refined(policy, gains, grouping, self.p_max, self.sigma2,
                                gamma_floor=self.gamma, theta=self.theta,
                                n_grid=self.grid_size)
        else:
            raise ValueError("use AirCompPowerControl for the single-hop baseline")

        self.gains_ = gains
        self.grouping_ = grouping
        self.solution_ = sol
        self.a_r1_eff_ = sol.a_r1_eff
        self.a_d2_ = sol.a_d2
        self.b1_ = sol.b1
        self.b2_ = sol.b2
        self.b_r2_ = sol.b_r2
        self.mse_ = sol.mse
        self.relay_power_ = relay_tx_power(sol, gains, grouping)
        return self

    def node_power(self):
        check_is_fitted(self)
        return self.solution_.node_power

    def score(self, X=None, y=None):
        """Negative MSE of the fitted solution."""
        check_is_fitted(self)
        return -self.mse_
