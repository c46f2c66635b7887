"""Channel states for an N-user multiway relay channel.

Users are relabelled so that uplink SNRs are non-decreasing; every other
module works with these canonical 1-based labels.  All SNRs are linear.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChannelState:
    """Per-user uplink/downlink SNRs in canonical (SNR-sorted) order.

    ``relabel[k]`` is the original (1-based) user index of canonical user
    ``k + 1``.
    """

    n: int
    gamma: np.ndarray
    big_gamma: np.ndarray
    gamma_d: float
    relabel: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 users, got {self.n}")
        if len(self.gamma) != self.n or len(self.big_gamma) != self.n:
            raise ValueError("SNR vectors must have length n")
        if np.any(self.gamma <= 0):
            raise ValueError("uplink SNRs must be positive")
        if np.any(np.diff(self.gamma) < 0):
            raise ValueError("uplink SNRs must be sorted non-decreasing")
        if sorted(self.relabel) != list(range(1, self.n + 1)):
            raise ValueError("relabel must be a permutation of 1..n")

    def original_gamma(self) -> np.ndarray:
        """Uplink SNRs in the caller's original user order."""
        out = np.empty(self.n)
        out[np.asarray(self.relabel) - 1] = self.gamma
        return out

    def scaled(self, factor: float) -> "ChannelState":
        """Same channel with every SNR multiplied by ``factor``."""
        return ChannelState(self.n, _frozen(self.gamma * factor),
                            _frozen(self.big_gamma * factor),
                            float(self.gamma_d * factor), self.relabel)

    def __repr__(self):
        g = ", ".join(f"{x:.6g}" for x in self.gamma)
        return f"ChannelState(n={self.n}, gamma=[{g}], gamma_d={self.gamma_d:.6g})"


def _sorted_state(gamma, big_gamma, gamma_d=None) -> ChannelState:
    gamma = np.asarray(gamma, dtype=float)
    big_gamma = np.asarray(big_gamma, dtype=float)
    order = np.argsort(gamma, kind="stable")
    big = big_gamma[order]
    if gamma_d is not None:
        big[0] = gamma_d
    return ChannelState(
        n=len(gamma),
        gamma=_frozen(gamma[order]),
        big_gamma=_frozen(big),
        gamma_d=float(big.min()),
        relabel=tuple(int(k) + 1 for k in order),
    )


def make_channel(gains: Sequence[float], p_user: float, p_relay: float,
                 noise_var: float) -> ChannelState:
    """Build a channel from channel amplitudes |h_i| and transmit powers.

    >>> make_channel([2, 1, 3], 1, 3, 1).gamma.tolist()
    [1.0, 4.0, 9.0]
    """
    h = np.asarray(gains, dtype=float)
    if h.ndim != 1 or h.size < 2:
        raise ValueError("need at least 2 users")
    if np.any(~(h > 0)):
        raise ValueError("channel gains must be positive (a zero gain disconnects its user)")
    if p_user <= 0 or p_relay <= 0 or noise_var <= 0:
        raise ValueError("powers and noise variance must be positive")
    power = h * h / noise_var
    return _sorted_state(p_user * power, p_relay * power)


def channel_from_snr(gamma: Sequence[float], gamma_d: float | None = None,
                     big_gamma: Sequence[float] | None = None) -> ChannelState:
    """Build a channel directly from uplink SNRs.

    Downlink SNRs come from ``big_gamma`` when given.  Otherwise they follow
    the uplink ordering (reciprocal links) scaled so the weakest equals
    ``gamma_d``; ``gamma_d=None`` means the downlink never binds.
    """
    g = np.asarray(gamma, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValueError("need at least 2 users")
    if np.any(~(g > 0)):
        raise ValueError("uplink SNRs must be positive")
    if big_gamma is not None:
        if gamma_d is not None:
            raise ValueError("give either gamma_d or big_gamma, not both")
        big = np.asarray(big_gamma, dtype=float)
        if big.shape != g.shape:
            raise ValueError("big_gamma must have one entry per user")
    elif gamma_d is None:
        big = np.full(g.shape, np.inf)
    else:
        if gamma_d < 0:
            raise ValueError("downlink SNR must be nonnegative")
        big = g * (gamma_d / g.min())
        return _sorted_state(g, big, float(gamma_d))
    return _sorted_state(g, big)


def sample_rayleigh_gains(n: int, rng: np.random.Generator) -> np.ndarray:
    """Rayleigh amplitudes |h| with E|h|^2 = 1 (|h|^2 ~ Exp(1))."""
    if n < 2:
        raise ValueError(f"need at least 2 users, got {n}")
    return np.sqrt(rng.exponential(1.0, size=n))


def draw_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for one draw, keyed by ``(seed, *keys)``.

    Streams depend only on the key, never on how draws are split between
    workers.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=keys))
