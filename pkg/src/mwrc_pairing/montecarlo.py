"""Seeded Monte Carlo comparison of pairings, TDM and cut-set bounds.

Every draw gets its own random stream keyed by ``(seed, point, draw)``, and
per-draw results are reduced in draw order, so results do not depend on the
number of worker processes.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import cutset_common_bound, cutset_sum_bound, tdm_rates, tdm_scaling
from .channel import draw_rng, make_channel, sample_rayleigh_gains
from .optimizer import chain_pairing, star_pairing
from .pairing_graph import prufer_decode, random_prufer
from .rates import evaluate

SCHEMES = ("opt", "random", "parastoo", "tdm", "cutset")
RATE_COLUMNS = tuple(f"{kind}_{s}" for s in SCHEMES for kind in ("rc", "rs"))
GAP_COLUMNS = ("gc_random", "gc_tdm", "gc_parastoo", "gs_random", "gs_tdm", "gs_parastoo")
CSV_COLUMNS = ("snr_db",) + RATE_COLUMNS + GAP_COLUMNS
BARS_COLUMNS = ("n", "snr_db") + RATE_COLUMNS


@dataclass(frozen=True)
class SimConfig:
    n: int
    draws: int
    seed: int
    snr_db_points: tuple[float, ...]
    p_user: float = 1.0
    p_relay: float | None = None  # defaults to n
    workers: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.draws < 1:
            raise ValueError("draws must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.p_user <= 0 or (self.p_relay is not None and self.p_relay <= 0):
            raise ValueError("powers must be positive")
        object.__setattr__(self, "snr_db_points", tuple(float(x) for x in self.snr_db_points))

    @property
    def relay_power(self) -> float:
        return float(self.n) if self.p_relay is None else self.p_relay


@dataclass
class SweepResult:
    snr_db: np.ndarray
    rates: dict[str, np.ndarray] = field(default_factory=dict)
    gaps: dict[str, np.ndarray] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name == "snr_db":
            return self.snr_db
        return self.rates[name] if name in self.rates else self.gaps[name]

    def rows(self):
        for k in range(len(self.snr_db)):
            yield [float(self.column(c)[k]) for c in CSV_COLUMNS]


@lru_cache(maxsize=None)
def _references(n: int):
    chain, star = chain_pairing(n), star_pairing(n, 1)
    # TDM scalings depend on the user count only.
    probe = make_channel(np.ones(n), 1.0, 1.0, 1.0)
    return chain, star, star_pairing(n, n), tdm_scaling(probe, chain), tdm_scaling(probe, star)


def draw_rates(n: int, noise_var: float, p_user: float, p_relay: float,
               rng: np.random.Generator) -> tuple[float, ...]:
    """One channel realisation; values in ``RATE_COLUMNS`` order."""
    ch = make_channel(sample_rayleigh_gains(n, rng), p_user, p_relay, noise_var)
    rand_tree = prufer_decode(random_prufer(n, rng), n)
    chain, star, max_star, chain_scaling, star_scaling = _references(n)
    rc_opt = evaluate(chain, ch, True).common_rate
    rs_opt = evaluate(star, ch, False).sum_rate
    rc_rand = evaluate(rand_tree, ch, True).common_rate
    rs_rand = evaluate(rand_tree, ch, False).sum_rate
    rc_par = evaluate(max_star, ch, True).common_rate
    rs_par = evaluate(max_star, ch, False).sum_rate
    rc_tdm = tdm_rates(ch, chain_scaling, apply_downlink=True).common_rate
    rs_tdm = tdm_rates(ch, star_scaling, apply_downlink=False).sum_rate
    rc_cut = cutset_common_bound(ch, ch.gamma)
    rs_cut = cutset_sum_bound(ch, ch.gamma)
    return (rc_opt, rs_opt, rc_rand, rs_rand, rc_par, rs_par, rc_tdm, rs_tdm, rc_cut, rs_cut)


def _run_chunk(args) -> np.ndarray:
    n, noise_var, p_user, p_relay, seed, key, draws = args
    out = np.empty((len(draws), len(RATE_COLUMNS)))
    for row, d in enumerate(draws):
        out[row] = draw_rates(n, noise_var, p_user, p_relay, draw_rng(seed, key, d))
    return out


def _per_draw(n, noise_var, p_user, p_relay, seed, key, draws, workers) -> np.ndarray:
    if workers == 1:
        return _run_chunk((n, noise_var, p_user, p_relay, seed, key, range(draws)))
    bounds = np.linspace(0, draws, workers + 1).astype(int)
    jobs = [(n, noise_var, p_user, p_relay, seed, key, range(lo, hi))
            for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return np.vstack(list(pool.map(_run_chunk, jobs)))


def gap_percent(opt: float, other: float) -> float:
    """``100 * (opt - other) / opt``; NaN when the optimum averages to zero."""
    if opt == 0:
        return math.nan
    return 100.0 * (opt - other) / opt


def _averages(per_draw: np.ndarray) -> dict[str, float]:
    means = per_draw.mean(axis=0)
    return {c: float(v) for c, v in zip(RATE_COLUMNS, means)}


def run_sweep(cfg: SimConfig) -> SweepResult:
    cols = {c: [] for c in RATE_COLUMNS + GAP_COLUMNS}
    for p, snr_db in enumerate(cfg.snr_db_points):
        noise_var = 10.0 ** (-snr_db / 10.0)
        per_draw = _per_draw(cfg.n, noise_var, cfg.p_user, cfg.relay_power, cfg.seed, p,
                             cfg.draws, cfg.workers)
        avg = _averages(per_draw)
        for c, v in avg.items():
            cols[c].append(v)
        for kind, obj in (("gc", "rc"), ("gs", "rs")):
            for scheme in ("random", "tdm", "parastoo"):
                cols[f"{kind}_{scheme}"].append(gap_percent(avg[f"{obj}_opt"], avg[f"{obj}_{scheme}"]))
    return SweepResult(
        snr_db=np.array(cfg.snr_db_points, dtype=float),
        rates={c: np.array(cols[c]) for c in RATE_COLUMNS},
        gaps={c: np.array(cols[c]) for c in GAP_COLUMNS},
    )


def run_bars(n_list: Sequence[int], snr_db: float, draws: int, seed: int,
             p_user: float = 1.0, workers: int = 1) -> list[dict[str, float]]:
    """Averaged rates for each user count at a single SNR (relay power = n)."""
    if draws < 1:
        raise ValueError("draws must be at least 1")
    noise_var = 10.0 ** (-snr_db / 10.0)
    table = []
    for n in n_list:
        if n < 2:
            raise ValueError("user counts must be at least 2")
        per_draw = _per_draw(int(n), noise_var, p_user, float(n), seed, int(n), draws, workers)
        row = {"n": int(n), "snr_db": float(snr_db)}
        row.update(_averages(per_draw))
        table.append(row)
    return table


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _write_rows(path, header, rows) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def emit_csv(result: SweepResult, path) -> None:
    _write_rows(path, CSV_COLUMNS, result.rows())


def emit_bars_csv(table: list[dict[str, float]], path) -> None:
    _write_rows(path, BARS_COLUMNS, ([row[c] for c in BARS_COLUMNS] for row in table))


def read_csv(path) -> list[dict[str, float]]:
    with Path(path).open(newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
