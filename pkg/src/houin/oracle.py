"""Exhaustive reference results and the re-mine-from-scratch baseline.

``brute_force_houin`` uses nothing but the functions in ``measures``: no
trees, no pruning.  It is slow on purpose and refuses large inputs.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .errors import RefusalError
from .measures import (
    MiningConfig,
    is_houin,
    on_shelf_periods,
    on_shelf_utility,
)
from .miner import HouinEntry, MiningResult, MiningStats, mine_houin
from .temporal_db import ProfitTable, TemporalDatabase, apply_modifications, itemset_key, sorted_items

MAX_ENUMERATED = 2 ** 20


def enumerate_itemsets(db: TemporalDatabase, max_size: int | None = None, limit: int = MAX_ENUMERATED):
    """Yield each itemset co-occurring in some transaction, in lexicographic order."""
    if max_size is not None and max_size < 1:
        raise ValueError("max_size must be >= 1")
    seen = set()
    for tr in db.transactions():
        items = sorted_items(tr.items)
        top = len(items) if max_size is None else min(max_size, len(items))
        for k in range(1, top + 1):
            for combo in combinations(items, k):
                seen.add(combo)
            if len(seen) > limit:
                raise RefusalError(f"more than {limit} itemsets to enumerate")
    yield from sorted(seen, key=itemset_key)


def brute_force_houin(db: TemporalDatabase, profits: ProfitTable, config: MiningConfig) -> MiningResult:
    entries = []
    n = 0
    for itemset in enumerate_itemsets(db, config.max_itemset_size):
        n += 1
        verdict = is_houin(itemset, db, profits, config)
        if verdict:
            osp = tuple(sorted(on_shelf_periods(itemset, db, config.osp_semantics)))
            ou = on_shelf_utility(itemset, db, profits, config.osp_semantics)
            entries.append(HouinEntry(itemset, osp, ou, verdict.ratio))
    return MiningResult(entries, MiningStats(db_scan_count=1, candidate_count=n))


@dataclass
class BaselineRun:
    result: MiningResult
    scans: int
    seconds: float


def remine_baseline(db: TemporalDatabase, batch, profits: ProfitTable, config: MiningConfig) -> BaselineRun:
    """Apply the batch and mine the modified database from scratch."""
    start = time.perf_counter()
    modified = apply_modifications(db, batch)
    result, _ = mine_houin(modified, profits, config)
    elapsed = time.perf_counter() - start
    return BaselineRun(result, result.stats.db_scan_count, elapsed)
