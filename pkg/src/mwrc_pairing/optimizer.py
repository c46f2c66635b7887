"""Optimal pairings for common rate and sum rate.

Closed forms: the chain 1-2-...-N maximises the common rate, and the star
centred on the weakest user maximises the sum rate as long as no pairwise
bound needs clamping.  Brute force over all labelled trees is provided as
the cross-check and as the fallback outside that regime.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .channel import ChannelState
from .pairing_graph import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    Pairing,
    prufer_blocks,
    prufer_decode,
)
from .rates import downlink_bound, evaluate, fdf_pair_bound, weak_bound_holds


class Objective(str, enum.Enum):
    COMMON = "common"
    SUM = "sum"


class WeakBoundViolation(ValueError):
    """The sum-rate closed form needs every pairwise log argument >= 1."""


@dataclass(frozen=True)
class OptimizationResult:
    pairing: Pairing
    objective_value: float
    objective: Objective
    active_set: tuple[int, ...]
    phases: int
    # False when the returned pairing is a heuristic outside the proven regime.
    guaranteed: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def silenced(self) -> tuple[int, ...]:
        return tuple(u for u in range(1, self.pairing.n + 1) if u not in self.active_set)


def chain_pairing(n: int) -> Pairing:
    if n < 2:
        raise ValueError(f"need at least 2 users, got {n}")
    return Pairing(n, tuple((i, i + 1) for i in range(1, n)))


def star_pairing(n: int, center: int = 1) -> Pairing:
    if n < 2:
        raise ValueError(f"need at least 2 users, got {n}")
    if not 1 <= center <= n:
        raise ValueError(f"center {center} out of range 1..{n}")
    return Pairing(n, tuple((u, center) for u in range(1, n + 1) if u != center))


def common_rate_closed_form(ch: ChannelState) -> float:
    """Maximum common rate over all feasible pairings (achieved by the chain)."""
    g = ch.gamma.tolist()
    terms = [math.log2(g[i] + g[i] / (g[i] + g[i + 1])) for i in range(ch.n - 1)]
    terms.append(math.log2(1.0 + ch.gamma_d))
    return max(0.0, min(terms)) / (2 * (ch.n - 1))


def _star_log_terms(g: np.ndarray) -> list[float]:
    """log2 terms of the star centred on ``g[0]``; ``g`` sorted ascending."""
    g1, gn = float(g[0]), float(g[-1])
    return [math.log2(g1 + g1 / (g1 + gn))] + [
        math.log2(x / (x + g1) + x) for x in g[1:].tolist()]


def sum_rate_closed_form(ch: ChannelState) -> float:
    """Maximum sum rate with the downlink ignored; requires the weak-bound regime."""
    if not weak_bound_holds(ch):
        g1, gn = float(ch.gamma[0]), float(ch.gamma[-1])
        raise WeakBoundViolation(
            f"users 1 and {ch.n} violate the weak bound: "
            f"{g1:.6g}/({g1:.6g}+{gn:.6g}) + {g1:.6g} < 1")
    g1, gn = float(ch.gamma[0]), float(ch.gamma[-1])
    prod = g1 + g1 / (g1 + gn)
    for x in ch.gamma[1:].tolist():
        prod *= x / (x + g1) + x
    return math.log2(prod) / (2 * (ch.n - 1))


# -- brute force -------------------------------------------------------------

def _block_values(gamma: np.ndarray, edges: np.ndarray, m: int, objective: Objective,
                  downlink_cap: float | None) -> np.ndarray:
    t, n = edges.shape[0], gamma.size
    rows = np.arange(t)
    partner = np.zeros((t, n))
    for c in range(edges.shape[1]):
        a, b = edges[:, c, 0], edges[:, c, 1]
        partner[rows, a] = np.maximum(partner[rows, a], gamma[b])
        partner[rows, b] = np.maximum(partner[rows, b], gamma[a])
    rates = fdf_pair_bound(gamma[None, :], partner, m)
    if downlink_cap is not None:
        rates = np.minimum(rates, downlink_cap)
    return rates.min(axis=1) if objective is Objective.COMMON else rates.sum(axis=1)


def tree_objective_values(ch: ChannelState, objective, apply_downlink: bool = False,
                          cap: int = DEFAULT_ENUMERATION_CAP
                          ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Objective value of every labelled tree, in lexicographic Pruefer blocks.

    Yields ``(seqs, values)`` pairs.
    """
    objective = Objective(objective)
    m = ch.n - 1
    cap_rate = downlink_bound(ch.gamma_d, m) if apply_downlink else None
    gamma = np.asarray(ch.gamma, dtype=float)
    for seqs, edges in prufer_blocks(ch.n, cap):
        yield seqs, _block_values(gamma, edges, m, objective, cap_rate)


def brute_force_best(ch: ChannelState, objective, apply_downlink: bool = False,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> OptimizationResult:
    """Best tree by exhaustive search; ties go to the smallest Pruefer sequence."""
    objective = Objective(objective)
    best_val, best_seq = -math.inf, None
    for seqs, values in tree_objective_values(ch, objective, apply_downlink, cap):
        k = int(np.argmax(values))
        if values[k] > best_val:
            best_val, best_seq = float(values[k]), seqs[k]
    pairing = prufer_decode(best_seq, ch.n)
    return OptimizationResult(pairing, best_val, objective,
                              tuple(range(1, ch.n + 1)), ch.n - 1)


def optimal_common(ch: ChannelState, apply_downlink: bool = True) -> OptimizationResult:
    pairing = chain_pairing(ch.n)
    value = evaluate(pairing, ch, apply_downlink).common_rate
    return OptimizationResult(pairing, value, Objective.COMMON,
                              tuple(range(1, ch.n + 1)), ch.n - 1)


def optimal_sum(ch: ChannelState, cap: int = DEFAULT_ENUMERATION_CAP) -> OptimizationResult:
    """Sum-rate optimum with the downlink ignored and every user active.

    Outside the weak-bound regime the star is not guaranteed optimal, so the
    search falls back to brute force (or to the star, flagged, above ``cap``).
    """
    everyone = tuple(range(1, ch.n + 1))
    if weak_bound_holds(ch):
        return OptimizationResult(star_pairing(ch.n, 1), sum_rate_closed_form(ch),
                                  Objective.SUM, everyone, ch.n - 1)
    note = "weak bound violated: star optimality not guaranteed"
    try:
        res = brute_force_best(ch, Objective.SUM, apply_downlink=False, cap=cap)
    except EnumerationCapError:
        star = star_pairing(ch.n, 1)
        return OptimizationResult(star, evaluate(star, ch, False).sum_rate, Objective.SUM,
                                  everyone, ch.n - 1, guaranteed=False,
                                  notes=(note, "too many users for brute force; star used"))
    return OptimizationResult(res.pairing, res.objective_value, Objective.SUM, everyone,
                              ch.n - 1, guaranteed=True,
                              notes=(note, "optimum found by brute force"))


# -- silencing weak users ----------------------------------------------------

def silencing_candidates(n: int, silent: int) -> list[int]:
    """Users that may be silenced when ``silent`` users stay quiet."""
    return sorted(set(range(1, silent + 2)) | {n})


def silencing_search(ch: ChannelState, cap: int = DEFAULT_ENUMERATION_CAP) -> OptimizationResult:
    """Best sum rate when some weak users may only listen.

    With ``i >= 1`` silent users the exchange needs ``N - i`` uplink phases
    (one of them a lone transmission so listeners can decode), so the active
    users share the pre-log ``1/(2(N-i))``.  Active sets whose pairs would
    need clamping are skipped.
    """
    n = ch.n
    best = optimal_sum(ch, cap)
    notes = list(best.notes)
    gamma = np.asarray(ch.gamma, dtype=float)
    for i in range(1, n - 1):
        m = n - i
        for silent in itertools.combinations(silencing_candidates(n, i), i):
            active = [u for u in range(1, n + 1) if u not in silent]
            g = gamma[np.asarray(active) - 1]
            if g[0] / (g[0] + g[-1]) + g[0] < 1.0:
                notes.append(f"skipped silent set {silent}: weak bound fails on active users")
                continue
            value = sum(_star_log_terms(g)) / (2 * m)
            if value > best.objective_value:
                center = active[0]
                pairing = Pairing(n, tuple((u, center) for u in active[1:]))
                best = OptimizationResult(pairing, value, Objective.SUM, tuple(active), m)
    return OptimizationResult(best.pairing, best.objective_value, Objective.SUM,
                              best.active_set, best.phases, best.guaranteed, tuple(notes))


# -- analytic gap bounds -----------------------------------------------------

class GapBounds(NamedTuple):
    upper_opt: float
    lower_random: float
    gap_bound: float


def pairing_gap_bounds(ch: ChannelState) -> GapBounds:
    """Upper bound on the optimal sum rate, lower bound on any tree's sum rate,
    and a bound on their difference (downlink ignored, weak-bound regime)."""
    n = ch.n
    g1, gn = float(ch.gamma[0]), float(ch.gamma[-1])
    log_prod = float(np.sum(np.log2(ch.gamma)))
    upper = (log_prod + n * math.log2(1 + 1 / (2 * g1))) / (2 * (n - 1))
    lower = (log_prod + n * math.log2(1 + 1 / (2 * gn))) / (2 * (n - 1))
    gap = 0.5 * n * math.log2(gn * (1 + 2 * g1) / (g1 * (1 + 2 * gn)))
    return GapBounds(upper, lower, gap)
