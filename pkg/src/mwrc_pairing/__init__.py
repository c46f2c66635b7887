"""Optimal user pairing for full-duplex functional-decode-forward multiway relaying."""
from .baselines import (
    PowerScaling,
    cutset_common_bound,
    cutset_sum_bound,
    power_scaling,
    tdm_rates,
    tdm_scaling,
)
from .channel import ChannelState, channel_from_snr, make_channel, sample_rayleigh_gains
from .montecarlo import SimConfig, SweepResult, emit_bars_csv, emit_csv, run_bars, run_sweep
from .optimizer import (
    GapBounds,
    Objective,
    OptimizationResult,
    WeakBoundViolation,
    brute_force_best,
    chain_pairing,
    common_rate_closed_form,
    optimal_common,
    optimal_sum,
    pairing_gap_bounds,
    silencing_search,
    star_pairing,
    sum_rate_closed_form,
)
from .pairing_graph import (
    ClientGraph,
    EnumerationCapError,
    InfeasiblePairingError,
    Pairing,
    enumerate_trees,
    feasible_by_rank,
    format_pairing,
    is_feasible,
    parse_pairing,
    prufer_decode,
    prufer_encode,
    random_tree,
    v_transform,
)
from .rates import RateReport, evaluate, fdf_pair_bound, user_rate

__version__ = "0.1.0"
