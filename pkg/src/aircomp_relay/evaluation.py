"""Monte Carlo harness over shared channel draws.

Trial ``i`` of a run with master seed ``s`` draws its topology from the
PCG64 stream seeded by ``(s, i, 0)`` and its fading from ``(s, i, 1)``, so
results do not depend on how trials are scheduled, and two configurations
with the same master seed see the same channels.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baseline import solve_baseline
from .channel import generate_topology, sample_link_gains
from .config import ExperimentConfig
from .relay import (Policy, group_nodes, relay_tx_power, solve_coh_relay,
                    solve_refined, solve_sim_relay)

log = logging.getLogger(__name__)

POLICIES = tuple(Policy)
METRICS = ("mse_total", "mse_signal", "mse_noise", "mean_node_power",
           "relay_power", "overall_power")


class TrialError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrialMetrics:
    trial_index: int
    records: dict  # policy name -> {metric: value}

    def value(self, policy, metric) -> float:
        return self.records[str(policy)][metric]


def trial_seeds(master_seed, trial_index):
    return (master_seed, trial_index, 0), (master_seed, trial_index, 1)


def _record(mse_signal, mse_noise, node_power, relay_power):
    mean_power = float(np.mean(node_power))
    return {
        "mse_total": mse_signal + mse_noise,
        "mse_signal": mse_signal,
        "mse_noise": mse_noise,
        "mean_node_power": mean_power,
        "relay_power": relay_power,
        "overall_power": node_power.size * mean_power + relay_power,
    }


def run_trial(topology_seed, fading_seed, config: ExperimentConfig, trial_index=0):
    s, pw, q = config.scenario, config.power, config.policy
    try:
        topo = generate_topology(topology_seed, s.n_nodes, (s.area_width, s.area_height),
                                 s.sink, s.relay)
        gains = sample_link_gains(topo, config.channel_params(), fading_seed)
        grouping = group_nodes(gains, q.relay_fraction)

        base = solve_baseline(gains.h_kd, pw.p_max, pw.sigma2)
        records = {str(Policy.BASELINE): _record(base.mse_signal, base.mse_noise,
                                                 base.node_power, 0.0)}
        sim = solve_sim_relay(gains, grouping, pw.p_max, pw.sigma2)
        delta = sim.a_r1_eff * q.delta_fraction if sim.a_r1_eff > 0 else None
        solutions = [
            sim,
            solve_coh_relay(gains, grouping, pw.p_max, pw.sigma2, delta=delta),
        ]
        for tag in (Policy.SIM_RELAY_PLUS, Policy.COH_RELAY_PLUS):
            solutions.append(solve_refined(
                tag, gains, grouping, pw.p_max, pw.sigma2, gamma_floor=q.gamma,
                theta=q.theta, baseline_a=base.a, n_grid=q.grid_size,
                grid_range=(q.grid_low, q.grid_high)))
        for sol in solutions:
            records[str(sol.policy_tag)] = _record(
                sol.mse_signal, sol.mse_noise, sol.node_power,
                relay_tx_power(sol, gains, grouping))
    except (ValueError, FloatingPointError) as exc:
        raise TrialError(f"trial {trial_index}: {exc}") from exc
    return TrialMetrics(trial_index, records)


def _run_indexed(args):
    config, indices = args
    seed = config.harness.master_seed
    return [run_trial(*trial_seeds(seed, i), config, trial_index=i) for i in indices]


def run_trials(config: ExperimentConfig, indices, workers=None):
    """Evaluate the given trial indices, optionally across processes."""
    indices = list(indices)
    workers = workers or config.harness.workers
    if workers <= 1 or len(indices) < 2:
        return _run_indexed((config, indices))
    chunks = [indices[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_indexed, [(config, c) for c in chunks if c]))
    out = [t for part in parts for t in part]
    out.sort(key=lambda t: t.trial_index)
    return out


def empirical_cdf(samples):
    """Sorted samples and plotting positions ``i / N``."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empirical_cdf needs at least one sample")
    values = np.sort(x, kind="stable")
    positions = np.arange(1, x.size + 1) / x.size
    return values, positions


def _reduction(base, other):
    return float(1.0 - other / base) if base != 0 else float("nan")


@dataclass
class AggregateReport:
    config: ExperimentConfig
    trial_indices: np.ndarray
    samples: dict  # policy name -> metric -> array in trial order
    sweep_axis: str | None = None
    sweep_value: float | None = None

    @property
    def trial_count(self) -> int:
        return self.trial_indices.size

    def cdf(self, policy, metric):
        return empirical_cdf(self.samples[str(policy)][metric])

    def median(self, policy, metric) -> float:
        return float(np.median(self.samples[str(policy)][metric]))

    def mean(self, policy, metric) -> float:
        return float(np.mean(self.samples[str(policy)][metric]))

    def reduction_vs_baseline(self, policy, metric, stat="median") -> float:
        f = self.median if stat == "median" else self.mean
        return _reduction(f(Policy.BASELINE, metric), f(policy, metric))

    def summary(self) -> dict:
        per_policy = {}
        for p in POLICIES:
            entry = {m: {"median": self.median(p, m), "mean": self.mean(p, m)}
                     for m in METRICS}
            if p is not Policy.BASELINE:
                entry["reduction_vs_baseline"] = {
                    m: {stat: self.reduction_vs_baseline(p, m, stat)
                        for stat in ("median", "mean")}
                    for m in ("mse_total", "mean_node_power", "overall_power")
                }
            per_policy[str(p)] = entry
        echo = self.config.to_dict()
        # execution details, not part of the experiment
        del echo["harness"]["workers"], echo["output"]["directory"]
        out = {"config": echo, "trial_count": self.trial_count}
        if self.sweep_axis is not None:
            out["sweep"] = {"axis": self.sweep_axis, "value": self.sweep_value}
        out["policies"] = per_policy
        return out


def aggregate(trials, config: ExperimentConfig, sweep_axis=None, sweep_value=None):
    trials = sorted(trials, key=lambda t: t.trial_index)
    if not trials:
        raise ValueError("no trials to aggregate")
    samples = {
        str(p): {m: np.array([t.value(p, m) for t in trials]) for m in METRICS}
        for p in POLICIES
    }
    idx = np.array([t.trial_index for t in trials])
    return AggregateReport(config, idx, samples, sweep_axis, sweep_value)


def run_monte_carlo(config: ExperimentConfig, workers=None) -> AggregateReport:
    n = config.harness.effective_trials
    if n < 1:
        raise ValueError("trial_count must be at least 1")
    log.info("running %d trials (seed %d)", n, config.harness.master_seed)
    return aggregate(run_trials(config, range(n), workers), config)


def _sweep(config, section, key, axis, values, workers):
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    out = {}
    for v in values:
        cfg = config.replace(section, **{key: float(v)})
        rep = run_monte_carlo(cfg, workers)
        rep.sweep_axis, rep.sweep_value = axis, float(v)
        out[float(v)] = rep
    return out


def sweep_gamma(config: ExperimentConfig, gamma_values, workers=None):
    """One report per noise-floor ratio, all on the same trial substreams."""
    if any(not g > 0 for g in gamma_values):
        raise ValueError("gamma values must be positive")
    return _sweep(config, "policy", "gamma", "gamma", gamma_values, workers)


def sweep_relay_fraction(config: ExperimentConfig, fractions, workers=None):
    if any(not 0 <= f <= 1 for f in fractions):
        raise ValueError("relay fractions must lie in [0, 1]")
    return _sweep(config, "policy", "relay_fraction", "relay_fraction", fractions, workers)
