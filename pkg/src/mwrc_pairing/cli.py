"""Command-line interface: ``mwrc {rate,optimize,verify,simulate,bars}``.

Exit codes: 0 success, 1 domain error (infeasible pairing, violated
precondition, enumeration cap), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys

from . import montecarlo, verification
from .channel import channel_from_snr
from .optimizer import (
    Objective,
    brute_force_best,
    common_rate_closed_form,
    optimal_common,
    optimal_sum,
    silencing_search,
    sum_rate_closed_form,
)
from .pairing_graph import InfeasiblePairingError, format_pairing, parse_pairing
from .rates import evaluate, weak_bound_holds


class DomainError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _range(text: str, cast=float) -> list:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" not in text:
            return [cast(x) for x in text.split(",") if x.strip()]
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step or a list, got {text!r}")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    count = int(round((stop - start) / step)) + 1
    return [cast(start + k * step) for k in range(count)]


def _int_range(text: str) -> list[int]:
    return _range(text, cast=lambda x: int(round(float(x))))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _to_linear(x: float, db: bool) -> float:
    return 10.0 ** (x / 10.0) if db else x


def _channel(args):
    snr = [_to_linear(x, args.db) for x in args.snr]
    gamma_d = None if args.downlink_snr is None else _to_linear(args.downlink_snr, args.db)
    try:
        return channel_from_snr(snr, gamma_d=gamma_d)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _add_channel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--snr", type=_floats, required=True,
                   help="comma-separated uplink SNRs, one per user")
    dl = p.add_mutually_exclusive_group()
    dl.add_argument("--downlink-snr", type=float,
                    help="minimum downlink SNR (weakest user)")
    dl.add_argument("--no-downlink", action="store_true",
                    help="ignore the downlink limit (default)")
    p.add_argument("--db", action="store_true", help="SNR values are in dB")


def _relabel_note(ch) -> str | None:
    if ch.relabel == tuple(range(1, ch.n + 1)):
        return None
    mapping = ", ".join(f"{k}<-{orig}" for k, orig in enumerate(ch.relabel, start=1))
    return f"users relabelled by increasing SNR (canonical<-input): {mapping}"


def cmd_rate(args) -> int:
    ch = _channel(args)
    try:
        pairing = parse_pairing(args.pairing, ch.n)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    apply_dl = args.downlink_snr is not None
    try:
        report = evaluate(pairing, ch, apply_downlink=apply_dl)
    except InfeasiblePairingError:
        raise DomainError("pairing is not a tree: some user cannot decode every message")
    note = _relabel_note(ch)
    if note:
        print(note)
    for k, r in enumerate(report.per_user, start=1):
        print(f"user {k}: {r:.6f}")
    print(f"common rate: {report.common_rate:.6f}")
    print(f"sum rate: {report.sum_rate:.6f}")
    return 0


def _print_result(res, label: str) -> None:
    print(f"pairing: {format_pairing(res.pairing)}")
    print(f"{label} rate: {res.objective_value:.6f}")
    print("active users: " + ",".join(str(u) for u in res.active_set))
    print(f"phases: {res.phases}")


def cmd_optimize(args) -> int:
    ch = _channel(args)
    objective = Objective(args.objective)
    if objective is Objective.SUM and args.downlink_snr is not None:
        print("warning: the sum-rate optimum ignores the downlink limit", file=sys.stderr)
    note = _relabel_note(ch)
    if note:
        print(note)
    apply_dl = args.downlink_snr is not None
    try:
        if args.brute_force:
            res = brute_force_best(ch, objective, apply_downlink=apply_dl and objective is Objective.COMMON)
        elif objective is Objective.COMMON:
            res = optimal_common(ch, apply_downlink=apply_dl)
        elif args.allow_silencing:
            res = silencing_search(ch)
        else:
            res = optimal_sum(ch)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    for msg in res.notes:
        if not msg.startswith("skipped"):
            print(f"warning: {msg}", file=sys.stderr)
    _print_result(res, objective.value)
    if args.brute_force:
        if objective is Objective.COMMON:
            closed = common_rate_closed_form(ch) if apply_dl else optimal_common(ch, False).objective_value
            print(f"closed form: {closed:.6f}")
        elif weak_bound_holds(ch):
            print(f"closed form: {sum_rate_closed_form(ch):.6f}")
    return 0


def cmd_verify(args) -> int:
    try:
        results = verification.run_all(args.n, args.trials, args.seed)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.cases} cases)")
        for f in r.failures[:10]:
            print(f"  {f}")
        ok &= r.passed
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    try:
        cfg = montecarlo.SimConfig(n=args.n, draws=args.draws, seed=args.seed,
                                   snr_db_points=tuple(args.snr_db), p_relay=args.p_relay,
                                   workers=args.workers)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    montecarlo.emit_csv(montecarlo.run_sweep(cfg), args.out)
    print(f"wrote {len(cfg.snr_db_points)} rows to {args.out}")
    return 0


def cmd_bars(args) -> int:
    try:
        table = montecarlo.run_bars(args.n_list, args.snr_db, args.draws, args.seed,
                                    workers=args.workers)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    montecarlo.emit_bars_csv(table, args.out)
    print(f"wrote {len(table)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwrc", description="Pairing optimisation for FDF multiway relay channels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="rates of a given pairing")
    _add_channel_flags(p)
    p.add_argument("--pairing", required=True, help='pairs as "1-2,2-3,3-4" (canonical labels)')
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("optimize", help="optimal pairing for the common or sum rate")
    _add_channel_flags(p)
    p.add_argument("--objective", choices=[o.value for o in Objective], default="common")
    p.add_argument("--allow-silencing", action="store_true",
                   help="sum rate only: let weak users listen without transmitting")
    p.add_argument("--brute-force", action="store_true", help="exhaustive search over all trees")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="randomised brute-force self-checks")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo gap curves versus 1/sigma^2")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--snr-db", type=_range, default=_range("0:20:2"),
                   help="1/sigma^2 points in dB: start:stop:step or a list")
    p.add_argument("--draws", type=_positive_int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-relay", type=float, default=None, help="relay power (default: n)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="CSV destination")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bars", help="Monte Carlo rates versus the number of users")
    p.add_argument("--n-list", type=_int_range, default=_int_range("2:14:2"))
    p.add_argument("--snr-db", type=float, default=5.0)
    p.add_argument("--draws", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="CSV destination")
    p.set_defaults(func=cmd_bars)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "allow_silencing", False):
        if args.objective != Objective.SUM.value:
            parser.error("--allow-silencing only applies to --objective sum")
        if args.brute_force:
            parser.error("--allow-silencing and --brute-force cannot be combined")
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
