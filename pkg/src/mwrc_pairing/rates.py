"""Achievable rates of FDF pairwise transmission.

Rates are in bits per real channel use.  ``m`` is the number of uplink
phases; a full exchange among N users uses ``m = N - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelState
from .pairing_graph import Pairing, require_tree


@dataclass(frozen=True)
class RateReport:
    per_user: tuple[float, ...]
    common_rate: float
    sum_rate: float
    downlink_applied: bool
    m: int

    @classmethod
    def from_rates(cls, per_user, downlink_applied: bool, m: int) -> "RateReport":
        per_user = tuple(float(r) for r in per_user)
        return cls(per_user, min(per_user), sum(per_user), downlink_applied, m)


def fdf_pair_bound(gamma_i, gamma_j, m: int):
    """Rate bound of user i when it shares an uplink phase with user j.

    ``max{0, log2(g_i/(g_i+g_j) + g_i) / (2m)}``.  Accepts scalars or
    broadcastable arrays.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if np.ndim(gamma_i) == 0 and np.ndim(gamma_j) == 0:
        gi, gj = float(gamma_i), float(gamma_j)
        if not (gi > 0 and gj > 0):
            raise ValueError("SNRs must be positive")
        return max(0.0, math.log2(gi / (gi + gj) + gi) / (2 * m))
    gi = np.asarray(gamma_i, dtype=float)
    gj = np.asarray(gamma_j, dtype=float)
    if np.any(~(gi > 0)) or np.any(~(gj > 0)):
        raise ValueError("SNRs must be positive")
    return np.maximum(0.0, np.log2(gi / (gi + gj) + gi) / (2 * m))


def weak_pair_rate(gamma_i, gamma_j, m: int):
    """Unclamped form of :func:`fdf_pair_bound` (valid when SNRs are not too low)."""
    gi = np.asarray(gamma_i, dtype=float)
    gj = np.asarray(gamma_j, dtype=float)
    return np.log2(gi / (gi + gj) + gi) / (2 * m)


def downlink_bound(gamma_d: float, m: int) -> float:
    """Rate limit imposed by the relay broadcast: ``log2(1 + gamma_d) / (2m)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if gamma_d < 0:
        raise ValueError("downlink SNR must be nonnegative")
    return math.log2(1.0 + gamma_d) / (2 * m)


def strongest_neighbors(pairing: Pairing, gamma) -> list[float]:
    """SNR of each user's strongest partner (0.0 for unpaired users)."""
    best = [0.0] * pairing.n
    for a, b in pairing.pairs:
        ga, gb = gamma[a - 1], gamma[b - 1]
        if gb > best[a - 1]:
            best[a - 1] = gb
        if ga > best[b - 1]:
            best[b - 1] = ga
    return best


def _check_channel(pairing: Pairing, ch: ChannelState) -> None:
    if pairing.n != ch.n:
        raise ValueError(f"pairing has {pairing.n} users but channel has {ch.n}")


def user_rate(pairing: Pairing, ch: ChannelState, i: int,
              apply_downlink: bool = True) -> float:
    """Bound on user i's rate: min over its partners, optionally the downlink."""
    _check_channel(pairing, ch)
    require_tree(pairing)
    if not 1 <= i <= ch.n:
        raise ValueError(f"user {i} out of range 1..{ch.n}")
    m = ch.n - 1
    gamma = ch.gamma
    partner = strongest_neighbors(pairing, gamma)[i - 1]
    rate = fdf_pair_bound(gamma[i - 1], partner, m)
    if apply_downlink:
        rate = min(rate, downlink_bound(ch.gamma_d, m))
    return rate


def evaluate(pairing: Pairing, ch: ChannelState, apply_downlink: bool = True) -> RateReport:
    """Per-user, common and sum rate of a feasible pairing."""
    _check_channel(pairing, ch)
    require_tree(pairing)
    m = ch.n - 1
    gamma = ch.gamma.tolist()
    partner = strongest_neighbors(pairing, gamma)
    scale = 2 * m
    rates = [max(0.0, math.log2(g / (g + p) + g) / scale) for g, p in zip(gamma, partner)]
    if apply_downlink:
        cap = downlink_bound(ch.gamma_d, m)
        rates = [min(r, cap) for r in rates]
    return RateReport.from_rates(rates, apply_downlink, m)


def weak_bound_margin(ch: ChannelState) -> float:
    """``g_1/(g_1+g_N) + g_1``, the smallest log argument over all user pairs."""
    g1, gn = float(ch.gamma[0]), float(ch.gamma[-1])
    return g1 / (g1 + gn) + g1


def weak_bound_holds(ch: ChannelState) -> bool:
    """True when no pairwise bound needs clamping, for any pair of users."""
    return weak_bound_margin(ch) >= 1.0
