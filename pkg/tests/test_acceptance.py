"""Acceptance criteria, one test each.

Each test records a single PASS/FAIL line; the lines are printed in the
pytest terminal summary (and directly when this file is run as a script).
"""
import itertools
import math
import time

import numpy as np
import pytest

import oracles
from mwrc_pairing import cli
from mwrc_pairing.baselines import cutset_common_bound, cutset_sum_bound
from mwrc_pairing.channel import channel_from_snr, make_channel, sample_rayleigh_gains
from mwrc_pairing.montecarlo import SimConfig, run_sweep
from mwrc_pairing.optimizer import (
    Objective,
    brute_force_best,
    chain_pairing,
    pairing_gap_bounds,
    silencing_search,
    star_pairing,
    sum_rate_closed_form,
)
from mwrc_pairing.optimizer import tree_objective_values
from mwrc_pairing.pairing_graph import Pairing, feasible_by_rank, is_feasible
from mwrc_pairing.rates import evaluate
from mwrc_pairing.verification import random_pairing, random_snrs

TOL = 1e-12
REPORT = []


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    REPORT.append(line)
    print(line)
    assert ok, line


def all_tree_values(ch, objective, apply_downlink=False):
    return np.concatenate([v for _, v in tree_objective_values(ch, objective, apply_downlink)])


def test_1_chain_maximises_common_rate():
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    for n in (3, 4, 5, 6):
        rng = np.random.default_rng(1000 + n)
        for _ in range(100):
            ch = channel_from_snr(random_snrs(n, rng))  # downlink never binds
            best = brute_force_best(ch, Objective.COMMON, apply_downlink=False).objective_value
            chain = evaluate(chain_pairing(n), ch, False).common_rate
            worst = max(worst, abs(best - chain))
            cases += 1
    elapsed = time.perf_counter() - t0
    report(1, worst <= TOL and elapsed < 30,
           f"{cases} channels, max |brute force - chain| = {worst:.2e}, {elapsed:.1f} s")


def test_2_star_maximises_sum_rate():
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    for n in (3, 4, 5, 6):
        rng = np.random.default_rng(2000 + n)
        for _ in range(100):
            ch = channel_from_snr(random_snrs(n, rng, 0.0, 30.0))
            best = brute_force_best(ch, Objective.SUM, apply_downlink=False).objective_value
            worst = max(worst, abs(best - sum_rate_closed_form(ch)))
            cases += 1
    elapsed = time.perf_counter() - t0
    report(2, worst <= TOL and elapsed < 30,
           f"{cases} channels, max |brute force - closed form| = {worst:.2e}, {elapsed:.1f} s")


def test_3_pinned_closed_forms():
    gamma = [1.0, 2.0, 4.0, 8.0]
    ch = channel_from_snr(gamma)
    # Independent brute force first, then the closed forms, then the pinned values.
    oracle_sum = oracles.best_sum(gamma)
    oracle_common = oracles.best_common(gamma)
    star_sum = evaluate(star_pairing(4), ch, False).sum_rate
    closed_sum = sum_rate_closed_form(ch)
    chain_common = evaluate(chain_pairing(4), ch, False).common_rate
    agree = (abs(oracle_sum - star_sum) <= TOL and abs(oracle_sum - closed_sum) <= TOL
             and abs(oracle_common - chain_common) <= TOL)
    sum_ok = abs(closed_sum - 1.163697) <= 1e-5
    common_ok = abs(chain_common - 0.069173) <= 1e-5
    report(3, agree and sum_ok and common_ok,
           f"oracle agrees: {agree}; star sum {closed_sum:.7f} vs 1.163697 "
           f"(diff {abs(closed_sum - 1.163697):.1e}); chain common {chain_common:.7f} vs 0.069173 "
           f"(diff {abs(chain_common - 0.069173):.1e}); tolerance 1e-5")


def test_4_feasibility_equivalence():
    disagreements, cases = 0, 0

    def check(p):
        nonlocal disagreements, cases
        cases += 1
        tree = is_feasible(p)
        disagreements += any(feasible_by_rank(p, u) != tree for u in range(1, p.n + 1))

    for n in (2, 3, 4):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for combo in itertools.combinations_with_replacement(pairs, n - 1):
            check(Pairing(n, combo))
    for n in (5, 6):
        rng = np.random.default_rng(4000 + n)
        for _ in range(10_000):
            check(random_pairing(n, n - 1, rng))
    report(4, disagreements == 0, f"{cases} multisets, {disagreements} disagreements")


def test_5_gap_bounds():
    rng = np.random.default_rng(5000)
    violations = 0
    for _ in range(1000):
        ch = channel_from_snr(random_snrs(4, rng, 0.0, 30.0))
        b = pairing_gap_bounds(ch)
        sums = all_tree_values(ch, Objective.SUM)
        opt, worst_tree = sums.max(), sums.min()
        violations += (b.upper_opt < opt - TOL) + (b.lower_random > worst_tree + TOL)
        violations += b.gap_bound < (opt - worst_tree) - TOL
    finals, monotone = [], True
    for _ in range(20):
        base = random_snrs(4, rng, 0.0, 30.0)
        diffs = []
        for k in range(7):
            sums = all_tree_values(channel_from_snr(base * 10.0 ** k), Objective.SUM)
            diffs.append(sums.max() - sums.min())
        monotone &= all(b <= a + TOL for a, b in zip(diffs, diffs[1:]))
        finals.append(diffs[-1])
    asym_ok = monotone and max(finals) < 1e-3
    report(5, violations == 0 and asym_ok,
           f"1000 channels, {violations} bound violations; scaling by 10^k, k=0..6: "
           f"non-increasing={monotone}, largest final difference {max(finals):.2e} bits")


def test_6_cutset_dominance():
    rng = np.random.default_rng(6000)
    violations = 0
    for t in range(1000):
        n = 2 + t % 5
        noise = 10.0 ** (-rng.uniform(-10.0, 30.0) / 10.0)
        ch = make_channel(sample_rayleigh_gains(n, rng), 1.0, float(n), noise)
        common = all_tree_values(ch, Objective.COMMON, apply_downlink=True).max()
        total = all_tree_values(ch, Objective.SUM, apply_downlink=True).max()
        violations += common > cutset_common_bound(ch, ch.gamma) + TOL
        violations += total > cutset_sum_bound(ch, ch.gamma) + TOL
    report(6, violations == 0, f"1000 channels (N=2..6, every tree), {violations} violations")


def test_7_gap_sign_pattern():
    t0 = time.perf_counter()
    res = run_sweep(SimConfig(n=4, draws=10_000, seed=7,
                              snr_db_points=tuple(float(x) for x in range(0, 21, 2))))
    elapsed = time.perf_counter() - t0
    g = res.gaps
    at = {float(x): k for k, x in enumerate(res.snr_db)}
    checks = {
        "gc_tdm<0@0dB": g["gc_tdm"][at[0.0]] < 0, "gc_tdm>0@20dB": g["gc_tdm"][at[20.0]] > 0,
        "gs_tdm<0@0dB": g["gs_tdm"][at[0.0]] < 0, "gs_tdm>0@20dB": g["gs_tdm"][at[20.0]] > 0,
        "gc_random>0": bool(np.all(g["gc_random"] > 0)), "gs_random>0": bool(np.all(g["gs_random"] > 0)),
        "gc_random@20<@4": g["gc_random"][at[20.0]] < g["gc_random"][at[4.0]],
        "gs_random@20<@4": g["gs_random"][at[20.0]] < g["gs_random"][at[4.0]],
        "runtime<60s": elapsed < 60,
    }
    failed = [name for name, ok in checks.items() if not ok]
    report(7, not failed,
           f"N=4, 1e4 draws, 0:20:2 dB, {elapsed:.1f} s; gc_tdm {g['gc_tdm'][0]:.1f}..{g['gc_tdm'][-1]:.1f}, "
           f"gs_tdm {g['gs_tdm'][0]:.1f}..{g['gs_tdm'][-1]:.1f}; failed: {failed or 'none'}")


def test_8_silencing_matches_oracle():
    rng = np.random.default_rng(8000)
    worst, below, silenced = 0.0, 0, 0
    for t in range(200):
        n = 4 + t % 2
        gamma = sorted(random_snrs(n, rng, -30.0, 20.0).tolist())
        ch = channel_from_snr(gamma)
        res = silencing_search(ch)
        worst = max(worst, abs(res.objective_value - oracles.best_with_silencing(gamma)))
        below += res.objective_value < evaluate(star_pairing(n), ch, False).sum_rate - TOL
        silenced += len(res.active_set) < n
    report(8, worst <= TOL and below == 0,
           f"200 channels ({silenced} with silent users), max |search - oracle| = {worst:.2e}, "
           f"{below} below the all-active star")


def test_9_worker_count_determinism(tmp_path, capsys):
    outs = []
    for workers in (1, 2):
        path = tmp_path / f"w{workers}.csv"
        code = cli.main(["simulate", "--n", "4", "--snr-db", "0:20:2", "--draws", "2000",
                         "--seed", "99", "--workers", str(workers), "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    report(9, outs[0] == outs[1], f"workers 1 vs 2, {len(outs[0])} bytes, identical={outs[0] == outs[1]}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
