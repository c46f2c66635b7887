"""TDM reference scheme and cut-set outer bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import ChannelState
from .optimizer import chain_pairing, star_pairing
from .pairing_graph import Pairing, graph_of, require_tree
from .rates import RateReport

SCALING_MODES = ("none", "match_chain", "match_star", "match_tree")


@dataclass(frozen=True)
class PowerScaling:
    mode: str
    factors: tuple[float, ...]

    def __post_init__(self):
        if self.mode not in SCALING_MODES:
            raise ValueError(f"unknown scaling mode {self.mode!r}")
        if any(not f > 0 for f in self.factors):
            raise ValueError("scaling factors must be positive")


def tdm_scaling(ch: ChannelState, reference: Pairing) -> PowerScaling:
    """TDM power boost giving each user the average power it spends under ``reference``.

    Under the pairing user i transmits in deg(i) of N-1 slots; under TDM in
    one of N slots, hence the factor ``N * deg(i) / (N - 1)``.
    """
    if reference.n != ch.n:
        raise ValueError("reference pairing and channel disagree on the user count")
    require_tree(reference)
    n = ch.n
    deg = graph_of(reference).degrees.tolist()
    canon = reference.canonical()
    if canon == chain_pairing(n).canonical():
        mode = "match_chain"
    elif canon == star_pairing(n, 1).canonical():
        mode = "match_star"
    else:
        mode = "match_tree"
    return PowerScaling(mode, tuple(n * d / (n - 1) for d in deg))


def no_scaling(n: int) -> PowerScaling:
    return PowerScaling("none", (1.0,) * n)


def power_scaling(ch: ChannelState, mode: str) -> PowerScaling:
    if mode == "none":
        return no_scaling(ch.n)
    if mode == "match_chain":
        return tdm_scaling(ch, chain_pairing(ch.n))
    if mode == "match_star":
        return tdm_scaling(ch, star_pairing(ch.n, 1))
    raise ValueError(f"mode {mode!r} needs an explicit reference pairing")


def tdm_rates(ch: ChannelState, scaling: PowerScaling,
              apply_downlink: bool = True) -> RateReport:
    """Each user alone in one of N slots, relay rebroadcasting to everyone."""
    n = ch.n
    if len(scaling.factors) != n:
        raise ValueError("one scaling factor per user required")
    dl = math.log2(1.0 + ch.gamma_d)
    rates = []
    for f, g in zip(scaling.factors, ch.gamma.tolist()):
        r = math.log2(1.0 + f * g)
        if apply_downlink:
            r = min(r, dl)
        rates.append(r / (2 * n))
    return RateReport.from_rates(rates, apply_downlink, n)


def cutset_common_bound(ch: ChannelState, scaled_gamma: Sequence[float]) -> float:
    """Outer bound on the common rate from one uplink and one downlink cut."""
    n = ch.n
    if len(scaled_gamma) != n:
        raise ValueError("scaled_gamma needs one entry per user")
    up = math.log2(1.0 + sum(float(x) for x in scaled_gamma[: n - 1]))
    return min(up, math.log2(1.0 + ch.gamma_d)) / (2 * (n - 1))


def cutset_sum_bound(ch: ChannelState, scaled_gamma: Sequence[float]) -> float:
    """Outer bound on the sum rate: average of the N per-user cut bounds."""
    n = ch.n
    if len(scaled_gamma) != n:
        raise ValueError("scaled_gamma needs one entry per user")
    g = [float(x) for x in scaled_gamma]
    cuts = [min(0.5 * math.log2(1.0 + sum(g[:i] + g[i + 1:])),
                0.5 * math.log2(1.0 + float(ch.big_gamma[i])))
            for i in range(n)]
    return sum(cuts) / (n - 1)
