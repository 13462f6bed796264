"""Versioned text snapshots of an ``EngineState``.

Layout: a ``houin-state 1`` line followed by ``[section]`` blocks::

    [config]     key value lines (min_util, period_length, ...)
    [profits]    profit file
    [database]   database file
    [tree N]     tree snapshot of period N
    [result]     cached result TSV

The fingerprint in ``[config]`` hashes the database and profit sections;
loading fails with ``StateMismatchError`` when they disagree.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction

from .errors import ParseError, StateMismatchError
from .measures import MiningConfig
from .miner import EngineState, MiningResult, mine_period_candidates
from .temporal_db import (
    ProfitTable,
    TemporalDatabase,
    assign_periods,
    format_database,
    format_profit_table,
    parse_database,
    parse_profit_table,
)
from .tree import PeriodTree, period_item_stats

MAGIC = "houin-state 1"


def fingerprint(db: TemporalDatabase, profits: ProfitTable) -> str:
    digest = hashlib.sha256()
    digest.update(f"period_length {db.period_length}\n".encode())
    digest.update(format_database(db).encode())
    digest.update(b"--\n")
    digest.update(format_profit_table(profits).encode())
    return "sha256:" + digest.hexdigest()


def dump_state(state: EngineState) -> str:
    config = state.config
    parts = [
        MAGIC,
        "[config]",
        f"min_util {config.min_util.numerator}/{config.min_util.denominator}",
        f"period_length {state.db.period_length}",
        f"max_itemset_size {config.max_itemset_size or 'none'}",
        f"osp_semantics {config.osp_semantics}",
        f"fingerprint {fingerprint(state.db, state.profits)}",
        "[profits]",
        format_profit_table(state.profits).rstrip("\n"),
        "[database]",
        format_database(state.db).rstrip("\n"),
    ]
    for tree in state.trees:
        parts += [f"[tree {tree.period}]", tree.snapshot().rstrip("\n")]
    parts += ["[result]", state.result.to_tsv().rstrip("\n")]
    return "\n".join(p for p in parts if p) + "\n"


def _sections(text: str) -> list[tuple[str, str]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ParseError(f"not a state snapshot (expected {MAGIC!r})", 1)
    sections = []
    name, body = None, []
    for line in lines[1:]:
        if line.startswith("[") and line.rstrip().endswith("]"):
            if name is not None:
                sections.append((name, "\n".join(body) + "\n"))
            name, body = line.strip()[1:-1], []
        elif name is None:
            raise ParseError("content before the first section")
        else:
            body.append(line)
    if name is not None:
        sections.append((name, "\n".join(body) + "\n"))
    return sections


def load_state(text: str, db: TemporalDatabase | None = None) -> EngineState:
    """Rebuild an engine state from a snapshot.

    Bookkeeping tables and cached candidates are recomputed from the
    embedded database and trees.  When ``db`` is given it must match the
    snapshot fingerprint.
    """
    sections = _sections(text)
    named = dict(sections)
    for required in ("config", "profits", "database", "result"):
        if required not in named:
            raise ParseError(f"snapshot lacks a [{required}] section")
    settings = {}
    for line in named["config"].splitlines():
        if line.strip():
            key, _, value = line.partition(" ")
            settings[key] = value.strip()
    try:
        max_size = None if settings["max_itemset_size"] == "none" else int(settings["max_itemset_size"])
        config = MiningConfig(Fraction(settings["min_util"]), max_size, settings["osp_semantics"])
        period_length = int(settings["period_length"])
        expected = settings["fingerprint"]
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad [config] section: {exc}") from None

    profits = parse_profit_table(named["profits"])
    embedded = assign_periods(parse_database(named["database"]), period_length)
    if fingerprint(embedded, profits) != expected:
        raise StateMismatchError("embedded database does not match the snapshot fingerprint")
    if db is not None and fingerprint(db, profits) != expected:
        raise StateMismatchError("database does not match the snapshot fingerprint")

    trees = [PeriodTree.from_snapshot(body, profits) for name, body in sections if name.startswith("tree ")]
    if [t.period for t in trees] != list(range(1, embedded.n_periods + 1)):
        raise StateMismatchError("tree sections do not cover the database periods")
    item_twu, item_count = [], []
    for period in embedded.periods:
        _, twu, count = period_item_stats(period, profits)
        item_twu.append(twu)
        item_count.append(count)
    candidates = [mine_period_candidates(t, config.max_itemset_size) for t in trees]
    result = MiningResult.from_tsv(named["result"])
    return EngineState(embedded, profits, config, trees, item_twu, item_count, candidates, result)
