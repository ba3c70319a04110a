"""Brute-force reference checks for the solvers.

Each check draws random small instances, solves them with the library and
with an independent method (grid search, random sampling or a plain-Python
rewrite), and reports the worst deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import solve_baseline
from .channel import LinkGains, make_rng
from .relay import Grouping, coherent_split, one_iter, solve_sim_relay


@dataclass
class OracleReport:
    check: str
    instances: int
    max_deviation: float
    tolerance: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.check}: {self.instances} instances, "
                f"max deviation {self.max_deviation:.3e} (tolerance {self.tolerance:.1e}), "
                f"{len(self.failures)} failure(s)")


def inversion_mse(a, h, p_max, sigma2):
    """MSE when every node uses ``b = min(1/(a h), sqrt(p_max))``; ``a`` may be an array."""
    a = np.asarray(a, dtype=float)[..., None]
    reach = np.minimum(a * np.asarray(h) * math.sqrt(p_max), 1.0)
    return ((1.0 - reach) ** 2).sum(axis=-1) + sigma2 * a[..., 0] ** 2


def grid_search_baseline(h, p_max, sigma2, n_coarse=20_000, n_fine=20_000):
    """Two-stage 1-D grid over ``a`` in ``(0, 10 / (h_min sqrt(p_max))]``.

    The MSE along this path is convex in ``a``, so zooming onto the best
    coarse cell cannot miss the global minimum.
    """
    h = np.asarray(h, dtype=float)
    upper = 10.0 / (h.min() * math.sqrt(p_max))
    grid = np.geomspace(upper * 1e-6, upper, n_coarse)
    vals = inversion_mse(grid, h, p_max, sigma2)
    j = int(np.argmin(vals))
    lo, hi = grid[max(j - 2, 0)], grid[min(j + 2, n_coarse - 1)]
    fine = np.linspace(lo, hi, n_fine)
    fvals = inversion_mse(fine, h, p_max, sigma2)
    jf = int(np.argmin(fvals))
    return float(fine[jf]), float(fvals[jf])


def _sim_relay_mse_2d(a_r, a_d, gains, grouping, p_max, sigma2):
    """Joint SimRelay MSE on a mesh of (a'_r1, a_d2)."""
    sp = math.sqrt(p_max)
    ar = a_r[:, None, None]
    ad = a_d[None, :, None]
    hr = gains.h_kr[grouping.relay_users][None, None, :]
    hd = gains.h_kd[grouping.direct_users][None, None, :]
    err_r = 1.0 - np.minimum(ar * hr * sp, 1.0)
    err_d = 1.0 - np.minimum(ad * hd * sp, 1.0)
    return ((err_r**2).sum(-1) + (err_d**2).sum(-1)
            + sigma2 * (ar[..., 0] ** 2 + ad[..., 0] ** 2))


def grid_search_sim_relay(gains, grouping, p_max, sigma2, n=101, rounds=8):
    """Zooming 2-D grid over (a'_r1, a_d2); returns the best MSE found."""
    sp = math.sqrt(p_max)
    spans = []
    for h in (gains.h_kr[grouping.relay_users], gains.h_kd[grouping.direct_users]):
        top = 10.0 / (h.min() * sp)
        spans.append((top * 1e-4, top))
    (r_lo, r_hi), (d_lo, d_hi) = spans
    best = math.inf
    for rnd in range(rounds):
        make = np.geomspace if rnd == 0 else np.linspace
        a_r = make(r_lo, r_hi, n)
        a_d = make(d_lo, d_hi, n)
        vals = _sim_relay_mse_2d(a_r, a_d, gains, grouping, p_max, sigma2)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        best = min(best, float(vals[i, j]))
        r_lo, r_hi = a_r[max(i - 2, 0)], a_r[min(i + 2, n - 1)]
        d_lo, d_hi = a_d[max(j - 2, 0)], a_d[min(j + 2, n - 1)]
    return best


def one_iter_reference(h_kr, h_kd, a_r1_eff, a_d2, p_max, sigma2):
    """Line-by-line loop version of the coherent per-node power control."""
    b1, b2, errs = [], [], []
    for hr, hd in zip(h_kr, h_kd):
        s = (a_r1_eff * hr) ** 2 + (a_d2 * hd) ** 2
        rho_max = math.sqrt(p_max) / math.sqrt(s)
        gamma_max = rho_max * s
        if gamma_max >= 1:
            rho = 1 / s
            b1.append(rho * a_r1_eff * hr)
            b2.append(rho * a_d2 * hd)
            errs.append(0.0)
        else:
            b1.append(rho_max * a_r1_eff * hr)
            b2.append(rho_max * a_d2 * hd)
            errs.append(1 - gamma_max)
    mse = sum(e * e for e in errs) + sigma2 * a_r1_eff**2
    return mse, b1, b2, errs


def random_gains(rng, k, low=0.05, high=5.0):
    return LinkGains(rng.uniform(low, high, k), rng.uniform(low, high, k),
                     float(rng.uniform(0.5, 5.0)))


def check_baseline(instances, seed=0, tol=1e-6):
    rng = make_rng((seed, 1))
    rep = OracleReport("baseline", instances, 0.0, tol)
    for n in range(instances):
        k = int(rng.integers(1, 6))
        h = rng.uniform(0.05, 5.0, k)
        sigma2 = float(rng.choice([0.0, 0.5, 1.0]))
        sol = solve_baseline(h, 10.0, sigma2)
        _, ref = grid_search_baseline(h, 10.0, sigma2)
        gap = sol.mse - ref
        rep.max_deviation = max(rep.max_deviation, gap)
        if gap > tol:
            rep.failures.append((n, gap))
    return rep


def check_sim_relay(instances, seed=0, tol=1e-5):
    rng = make_rng((seed, 2))
    rep = OracleReport("simrelay", instances, 0.0, tol)
    for n in range(instances):
        k = 6
        gains = random_gains(rng, k)
        perm = rng.permutation(k)
        grouping = Grouping(np.sort(perm[:3]), np.sort(perm[3:]))
        sigma2 = float(rng.choice([0.5, 1.0]))
        sol = solve_sim_relay(gains, grouping, 10.0, sigma2)
        ref = grid_search_sim_relay(gains, grouping, 10.0, sigma2)
        dev = abs(sol.mse - ref)
        rep.max_deviation = max(rep.max_deviation, dev)
        if dev > tol or sol.mse > ref + 1e-9:
            rep.failures.append((n, sol.mse - ref))
    return rep


def check_split(instances, seed=0, tol=1e-12, n_splits=1000):
    """Combined coefficient of the returned split vs random splits of the same power."""
    rng = make_rng((seed, 3))
    rep = OracleReport("split", instances, -math.inf, tol)
    for n in range(instances):
        a_r, a_d = rng.uniform(0.01, 2.0, 2)
        h_r, h_d = rng.uniform(0.05, 5.0, 2)
        p = float(rng.uniform(0.1, 10.0))
        b1, b2, gamma = coherent_split(a_r, a_d, h_r, h_d, p)
        t_star = math.atan2(b2, b1)
        t = rng.uniform(0.0, math.pi / 2, n_splits)
        combo = a_r * h_r * math.sqrt(p) * np.cos(t) + a_d * h_d * math.sqrt(p) * np.sin(t)
        excess = float((combo - gamma).max())
        rep.max_deviation = max(rep.max_deviation, excess)
        off = np.abs(t - t_star) > 1e-4
        scale = max(1.0, gamma)
        if (excess > tol * scale or (combo[off] >= gamma).any()
                or abs(b1 * b1 + b2 * b2 - p) > tol * max(1.0, p)):
            rep.failures.append((n, excess))
    return rep


def check_one_iter(instances, seed=0, tol=1e-12):
    rng = make_rng((seed, 4))
    rep = OracleReport("oneiter", instances, 0.0, tol)
    for n in range(instances):
        k = int(rng.integers(1, 8))
        gains = random_gains(rng, k, 0.02, 3.0)
        grouping = Grouping(np.arange(k), np.array([], dtype=int))
        a_r, a_d = rng.uniform(0.01, 1.5, 2)
        sigma2 = float(rng.choice([0.0, 1.0]))
        mse, b1, b2, e = one_iter(gains, grouping, a_r, a_d, 10.0, sigma2)
        ref = one_iter_reference(gains.h_kr, gains.h_kd, a_r, a_d, 10.0, sigma2)
        dev = max(abs(mse - ref[0]), np.abs(b1 - ref[1]).max(),
                  np.abs(b2 - ref[2]).max(), np.abs(e - ref[3]).max())
        rep.max_deviation = max(rep.max_deviation, float(dev))
        if dev > tol:
            rep.failures.append((n, float(dev)))
    return rep


CHECKS = {
    "baseline": check_baseline,
    "simrelay": check_sim_relay,
    "split": check_split,
    "oneiter": check_one_iter,
}
