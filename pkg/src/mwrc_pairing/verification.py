"""Randomised self-checks of the optimal pairings against brute force.

Used by ``mwrc verify``; each check returns a :class:`CheckResult` whose
failures carry enough detail (the channel SNRs) to reproduce the case.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelState, channel_from_snr
from .optimizer import (
    Objective,
    brute_force_best,
    common_rate_closed_form,
    sum_rate_closed_form,
    tree_objective_values,
)
from .pairing_graph import (
    DEFAULT_ENUMERATION_CAP,
    Pairing,
    enumerate_trees,
    feasible_by_rank,
    is_feasible,
    prufer_decode,
    prufer_encode,
    prufer_sequences,
)

TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def random_snrs(n: int, rng: np.random.Generator, low_db: float = -10.0,
                high_db: float = 20.0) -> np.ndarray:
    """Pairwise-distinct SNRs, log-uniform between the two dB limits."""
    while True:
        g = 10.0 ** (rng.uniform(low_db, high_db, size=n) / 10.0)
        if len(np.unique(g)) == n:
            return g


def _fmt_channel(ch: ChannelState) -> str:
    return "gamma=" + ",".join(repr(float(x)) for x in ch.gamma)


def check_common_optimality(n: int, trials: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("chain maximises the common rate")
    for _ in range(trials):
        ch = channel_from_snr(random_snrs(n, rng))
        best = brute_force_best(ch, Objective.COMMON, apply_downlink=False).objective_value
        closed = common_rate_closed_form(ch)
        res.cases += 1
        if abs(best - closed) > TOL:
            res.failures.append(f"{_fmt_channel(ch)}: brute force {best!r} vs chain {closed!r}")
    return res


def check_sum_optimality(n: int, trials: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("weakest-user star maximises the sum rate")
    for _ in range(trials):
        ch = channel_from_snr(random_snrs(n, rng, low_db=0.0, high_db=30.0))
        best = brute_force_best(ch, Objective.SUM, apply_downlink=False).objective_value
        closed = sum_rate_closed_form(ch)
        res.cases += 1
        if abs(best - closed) > TOL:
            res.failures.append(f"{_fmt_channel(ch)}: brute force {best!r} vs star {closed!r}")
    return res


def random_pairing(n: int, m: int, rng: np.random.Generator) -> Pairing:
    """``m`` pairs drawn independently and uniformly from all user pairs."""
    all_pairs = list(itertools.combinations(range(1, n + 1), 2))
    picks = rng.integers(0, len(all_pairs), size=m)
    return Pairing(n, tuple(all_pairs[k] for k in picks))


def _feasibility_mismatch(p: Pairing) -> str | None:
    tree = is_feasible(p)
    for user in range(1, p.n + 1):
        if feasible_by_rank(p, user) != tree:
            return f"pairs {p.pairs}: graph says {tree}, rank test for user {user} disagrees"
    return None


def check_feasibility_oracle(n: int, trials: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("tree test agrees with GF(2) decodability")
    if n <= 4:
        all_pairs = list(itertools.combinations(range(1, n + 1), 2))
        candidates = (Pairing(n, combo) for combo in
                      itertools.combinations_with_replacement(all_pairs, n - 1))
    else:
        candidates = (random_pairing(n, n - 1, rng) for _ in range(trials))
    for p in candidates:
        res.cases += 1
        msg = _feasibility_mismatch(p)
        if msg:
            res.failures.append(msg)
    return res


def check_prufer_roundtrip(n: int, trials: int, rng: np.random.Generator,
                           exhaustive_limit: int = 7) -> CheckResult:
    res = CheckResult("Pruefer encode/decode round trip")
    if n <= exhaustive_limit:
        seqs = prufer_sequences(n)
    else:
        seqs = (tuple(int(x) for x in rng.integers(1, n + 1, size=n - 2)) for _ in range(trials))
    seen = set()
    for seq in seqs:
        tree = prufer_decode(seq, n)
        res.cases += 1
        if prufer_encode(tree) != tuple(seq):
            res.failures.append(f"sequence {seq} does not round-trip")
        if n <= exhaustive_limit:
            seen.add(tree.canonical())
    if n <= exhaustive_limit and len(seen) != n ** (n - 2):
        res.failures.append(f"expected {n ** (n - 2)} distinct trees, got {len(seen)}")
    return res


def optimal_sum_trees(ch: ChannelState, tol: float = TOL) -> np.ndarray:
    """Pruefer sequences of every tree within ``tol`` of the best sum rate."""
    blocks = list(tree_objective_values(ch, Objective.SUM, apply_downlink=False))
    best = max(float(v.max()) for _, v in blocks)
    return np.vstack([s[v >= best - tol] for s, v in blocks])


def check_leaf_structure(n: int, trials: int, rng: np.random.Generator) -> CheckResult:
    """Some sum-rate optimum has the strongest user (and the two strongest) as leaves.

    A vertex is a leaf exactly when it is absent from the Pruefer sequence.
    """
    res = CheckResult("strongest users are leaves in some sum-rate optimum")
    if n < 3:
        return res
    for _ in range(trials):
        ch = channel_from_snr(random_snrs(n, rng, low_db=0.0, high_db=30.0))
        seqs = optimal_sum_trees(ch)
        res.cases += 1
        top_leaf = ~np.any(seqs == n, axis=1)
        both_leaves = top_leaf & ~np.any(seqs == n - 1, axis=1)
        if not top_leaf.any():
            res.failures.append(f"{_fmt_channel(ch)}: user {n} is never a leaf")
        elif not both_leaves.any():
            res.failures.append(f"{_fmt_channel(ch)}: users {n - 1},{n} never both leaves")
    return res


def run_all(n: int, trials: int, seed: int,
            cap: int = DEFAULT_ENUMERATION_CAP) -> list[CheckResult]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    # Fail fast before any work if brute force is out of reach.
    next(iter(enumerate_trees(n, cap)))
    rng = np.random.default_rng(seed)
    return [
        check_common_optimality(n, trials, rng),
        check_sum_optimality(n, trials, rng),
        check_feasibility_oracle(n, trials, rng),
        check_prufer_roundtrip(n, trials, rng),
        check_leaf_structure(n, trials, rng),
    ]
