"""Command-line interface: ``houin mine | update | gen | bench``.

Exit codes: 0 success, 2 syntax errors, 3 semantic errors, 4 state mismatch.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

from .datagen import generate_dataset, load_bms, parse_range, random_batches
from .errors import (
    ConfigError,
    DuplicateEntryError,
    HouinError,
    MissingTransactionError,
    ParseError,
    StateMismatchError,
)
from .maintainer import refresh_houin
from .measures import MiningConfig, parse_ratio
from .miner import mine_houin
from .oracle import remine_baseline
from .snapshot import dump_state, load_state
from .temporal_db import (
    assign_periods,
    check_profits,
    format_database,
    format_modifications,
    format_profit_table,
    parse_database,
    parse_modification_stream,
    parse_modifications,
    parse_profit_table,
)

BENCH_HEADER = "batch,refresh_ms,remine_ms,refresh_scans,remine_scans,case1,case2,case3,case4"


class UsageError(HouinError):
    pass


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _config(args) -> MiningConfig:
    try:
        ratio = parse_ratio(args.min_util)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = MiningConfig(ratio, args.max_size, args.osp)
    print(f"min_util = {ratio.numerator}/{ratio.denominator}", file=sys.stderr)
    return config


def _load_inputs(args):
    if args.format == "bms":
        if args.periods is None:
            raise UsageError("--format bms needs --periods")
        transactions, profits, period_length = load_bms(
            _read(args.db), args.periods, seed=args.seed,
            profit_range=parse_range(args.profit_range), neg_fraction=args.neg_fraction,
        )
    else:
        if args.profits is None or args.period_length is None:
            raise UsageError("--profits and --period-length are required")
        transactions = parse_database(_read(args.db))
        profits = parse_profit_table(_read(args.profits))
        period_length = args.period_length
    db = assign_periods(transactions, period_length)
    check_profits(db, profits)
    return db, profits


def cmd_mine(args):
    config = _config(args)
    db, profits = _load_inputs(args)
    result, state = mine_houin(db, profits, config)
    _write(args.out, result.to_tsv())
    if args.state:
        _write(args.state, dump_state(state))
    s = result.stats
    print(f"scans={s.db_scan_count} candidates={s.candidate_count} nodes={s.tree_node_count}", file=sys.stderr)
    return 0


def cmd_update(args):
    text = _read(args.state)
    state = load_state(text)
    if args.db:
        db = assign_periods(parse_database(_read(args.db)), state.db.period_length)
        state = load_state(text, db)
    batch = parse_modifications(_read(args.mods))
    state, result = refresh_houin(state, batch)
    _write(args.out, result.to_tsv())
    if args.emit_state:
        _write(args.emit_state, dump_state(state))
    s = result.stats
    cases = ",".join(map(str, s.cases))
    print(f"scans={s.db_scan_count} cases={cases} candidates={s.candidate_count}", file=sys.stderr)
    return 0


def cmd_gen(args):
    profit_range = parse_range(args.profit_range)
    if not 0 <= args.neg_fraction <= 1:
        raise UsageError("--neg-fraction must lie in [0, 1]")
    try:
        transactions, profits, period_length = generate_dataset(
            args.transactions, args.items, args.periods, args.max_qty,
            profit_range, args.neg_fraction, args.seed, args.max_len,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = (f"# generated: transactions={args.transactions} items={args.items} "
              f"periods={args.periods} seed={args.seed} period_length={period_length}\n")
    _write(f"{args.out}.db", header + format_database(transactions))
    _write(f"{args.out}.prof", format_profit_table(profits))
    if args.mod_batches:
        db = assign_periods(transactions, period_length)
        batches = random_batches(db, args.mod_batches, args.mod_size, seed=args.seed + 1,
                                 max_len=args.max_len, max_qty=args.max_qty)
        _write(f"{args.out}.mods", "---\n".join(format_modifications(b) for b in batches))
    print(f"period_length={period_length}", file=sys.stderr)
    return 0


def run_bench(db, profits, config, batches, repeat=1):
    """Refresh vs. re-mine on a stream of batches; returns CSV rows (without header)."""
    _, state = mine_houin(db, profits, config)
    rows, refresh_times, remine_times = [], [], []
    for k, batch in enumerate(batches, start=1):
        before = state.db
        refresh_ms, remine_ms = [], []
        for r in range(repeat):
            # trees are deep linked structures; clone through the snapshot format
            trial = load_state(dump_state(state)) if r < repeat - 1 else state
            start = time.perf_counter()
            _, result = refresh_houin(trial, batch)
            refresh_ms.append((time.perf_counter() - start) * 1000)
            baseline = remine_baseline(before, batch, profits, config)
            remine_ms.append(baseline.seconds * 1000)
        refresh_times.append(statistics.median(refresh_ms))
        remine_times.append(statistics.median(remine_ms))
        c1, c2, c3, c4 = result.stats.cases
        rows.append([k, f"{refresh_times[-1]:.3f}", f"{remine_times[-1]:.3f}",
                     result.stats.db_scan_count, baseline.scans, c1, c2, c3, c4])
    if rows:
        rows.append(["median", f"{statistics.median(refresh_times):.3f}",
                     f"{statistics.median(remine_times):.3f}",
                     statistics.median_low(r[3] for r in rows), statistics.median_low(r[4] for r in rows),
                     "", "", "", ""])
    return rows


def cmd_bench(args):
    config = _config(args)
    db, profits = _load_inputs(args)
    batches = parse_modification_stream(_read(args.mods_stream))
    rows = run_bench(db, profits, config, batches, args.repeat)
    _write(args.out, "".join(",".join(map(str, r)) + "\n" for r in [BENCH_HEADER.split(",")] + rows))
    return 0


def _add_input_flags(p):
    p.add_argument("--db", required=True)
    p.add_argument("--profits")
    p.add_argument("--period-length", type=int)
    p.add_argument("--min-util", required=True, help="fraction (3/10), decimal (0.3) or percent (30%%)")
    p.add_argument("--max-size", type=int)
    p.add_argument("--osp", choices=["union", "intersection"], default="union")
    p.add_argument("--format", choices=["text", "bms"], default="text")
    p.add_argument("--periods", type=int, help="period count for --format bms")
    p.add_argument("--seed", type=int, default=0, help="seed for --format bms")
    p.add_argument("--profit-range", default="1..10", help="for --format bms")
    p.add_argument("--neg-fraction", type=float, default=0.2, help="for --format bms")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="houin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine high on-shelf utility itemsets")
    _add_input_flags(p)
    p.add_argument("--out")
    p.add_argument("--state", help="write an engine snapshot here")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("update", help="apply a modification batch to a snapshot")
    p.add_argument("--state", required=True)
    p.add_argument("--mods", required=True)
    p.add_argument("--db", help="check this database against the snapshot fingerprint")
    p.add_argument("--out")
    p.add_argument("--emit-state")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("gen", help="generate a seeded synthetic dataset")
    p.add_argument("--transactions", type=int, required=True)
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--max-qty", type=int, default=10)
    p.add_argument("--profit-range", default="1..10")
    p.add_argument("--neg-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--mod-batches", type=int, default=0)
    p.add_argument("--mod-size", type=int, default=10)
    p.add_argument("--out", required=True, help="output prefix: PREFIX.db, PREFIX.prof[, PREFIX.mods]")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="compare incremental refresh with re-mining")
    _add_input_flags(p)
    p.add_argument("--mods-stream", required=True, help="batches separated by '---' lines")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateMismatchError as exc:
        code, message = 4, exc
    except (ConfigError, MissingTransactionError) as exc:
        code, message = 3, exc
    except (ParseError, DuplicateEntryError, UsageError, ValueError) as exc:
        code, message = 2, exc
    except HouinError as exc:
        code, message = 3, exc
    print(f"houin {args.command}: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
