"""Over-the-air computation with amplify-and-forward relaying."""

from .baseline import BaselineSolution, baseline_mse, optimal_rx_scaling, solve_baseline
from .channel import (ChannelParams, LinkGains, Topology, generate_topology,
                      path_loss_linear, sample_link_gains)
from .config import ConfigError, ExperimentConfig, dump_config, parse_config
from .estimators import AirCompPowerControl, RelayPowerControl
from .evaluation import (AggregateReport, TrialMetrics, empirical_cdf, run_monte_carlo,
                         run_trial, sweep_gamma, sweep_relay_fraction)
from .relay import (Grouping, Policy, RelaySolution, coherent_split, group_nodes, one_iter,
                    relay_tx_power, solve_coh_relay, solve_refined, solve_sim_relay)

__all__ = [
    "AggregateReport", "AirCompPowerControl", "BaselineSolution", "ChannelParams",
    "ConfigError", "ExperimentConfig", "Grouping", "LinkGains", "Policy",
    "RelayPowerControl", "RelaySolution", "Topology", "TrialMetrics", "baseline_mse",
    "coherent_split", "dump_config", "empirical_cdf", "generate_topology", "group_nodes",
    "one_iter", "optimal_rx_scaling", "parse_config", "path_loss_linear", "relay_tx_power",
    "run_monte_carlo", "run_trial", "sample_link_gains", "solve_baseline",
    "solve_coh_relay", "solve_refined", "solve_sim_relay", "sweep_gamma",
    "sweep_relay_fraction",
]
__version__ = "0.1.0"
