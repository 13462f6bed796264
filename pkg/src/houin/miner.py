"""Two-phase mining of high on-shelf utility itemsets.

Phase 1 grows candidates out of each period's utility tree: an itemset is a
candidate when its TWU inside some period reaches that period's threshold.
Phase 2 makes one pass over the retained database to compute the exact
on-shelf utility and ratio of every candidate.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .measures import INTERSECTION, MiningConfig
from .temporal_db import (
    Number,
    ProfitTable,
    TemporalDatabase,
    format_number,
    itemset_key,
    parse_number,
    sorted_items,
)
from .tree import PeriodTree, build_period_tree, header_order, period_item_stats

TSV_HEADER = "items\tosp\tou\tosur"


@dataclass(frozen=True)
class HouinEntry:
    itemset: tuple[str, ...]
    osp: tuple[int, ...]
    ou: Number
    osur: Fraction

    def to_tsv(self) -> str:
        return "\t".join((
            ",".join(self.itemset),
            ",".join(map(str, self.osp)),
            format_number(self.ou),
            f"{self.osur.numerator}/{self.osur.denominator}",
        ))


@dataclass
class MiningStats:
    db_scan_count: int = 0
    candidate_count: int = 0
    tree_node_count: int = 0
    rescans: int = 0
    cases: tuple[int, int, int, int] = (0, 0, 0, 0)


@dataclass
class MiningResult:
    houin: list[HouinEntry]
    stats: MiningStats = field(default_factory=MiningStats)

    def itemsets(self) -> list[tuple[str, ...]]:
        return [e.itemset for e in self.houin]

    def to_tsv(self) -> str:
        return "".join(line + "\n" for line in [TSV_HEADER] + [e.to_tsv() for e in self.houin])

    @classmethod
    def from_tsv(cls, text: str) -> "MiningResult":
        lines = text.splitlines()
        if not lines or lines[0] != TSV_HEADER:
            raise ValueError("missing result header line")
        entries = []
        for line in lines[1:]:
            if not line:
                continue
            items, osp, ou, osur = line.split("\t")
            entries.append(HouinEntry(
                tuple(items.split(",")),
                tuple(int(p) for p in osp.split(",")) if osp else (),
                parse_number(ou),
                Fraction(osur),
            ))
        return cls(entries)


def high_twu_items(db: TemporalDatabase, p: int, profits: ProfitTable, config: MiningConfig) -> list[str]:
    total, twu, _ = period_item_stats(db.period(p), profits)
    threshold = config.min_util * total
    return header_order([i for i, t in twu.items() if t >= threshold], twu, profits)


def mine_period_candidates(tree: PeriodTree, max_size: int | None = None) -> dict[tuple[str, ...], Number]:
    """Every itemset of header items whose projected TWU reaches the tree threshold.

    Returns ``{sorted itemset: projected twu}``.  Enumeration projects the
    tree onto each header item from the bottom of the header upwards, then
    recurses on the weighted prefix paths.
    """
    threshold = tree.threshold
    found: dict[tuple[str, ...], Number] = {}
    for item in reversed(tree.header_items()):
        base = tree.conditional_pattern_base(item)
        if not base:
            continue
        twu = sum(w for _, _, w in base)
        if twu < threshold:
            continue
        found[(item,)] = twu
        if max_size == 1:
            continue
        paths: dict[tuple[str, ...], Number] = defaultdict(int)
        for prefix, _, w in base:
            if prefix:
                paths[tuple(prefix)] += w
        _grow(paths, (item,), threshold, found, max_size)
    return {sorted_items(k): v for k, v in found.items()}


def _grow(paths, suffix, threshold, found, max_size):
    local: dict[str, Number] = defaultdict(int)
    for prefix, w in paths.items():
        for i in prefix:
            local[i] += w
    frequent = {i for i, w in local.items() if w >= threshold}
    for item in frequent:
        itemset = (item,) + suffix
        found[itemset] = local[item]
        if max_size is not None and len(itemset) >= max_size:
            continue
        projected: dict[tuple[str, ...], Number] = defaultdict(int)
        for prefix, w in paths.items():
            if item in prefix:
                head = tuple(j for j in prefix[:prefix.index(item)] if j in frequent)
                if head:
                    projected[head] += w
        if projected:
            _grow(projected, itemset, threshold, found, max_size)


def evaluate_candidates(
    candidates: Iterable[tuple[str, ...]],
    db: TemporalDatabase,
    profits: ProfitTable,
    config: MiningConfig,
) -> MiningResult:
    """Exact on-shelf evaluation of candidates in a single database pass."""
    candidates = {sorted_items(c) for c in candidates}
    if not candidates:
        return MiningResult([], MiningStats(candidate_count=0))

    buckets: dict[str, list[tuple[str, ...]]] = defaultdict(list)
    for c in candidates:
        buckets[c[0]].append(c)
    utility: dict[tuple[str, ...], Number] = dict.fromkeys(candidates, 0)
    periods_of: dict[str, set[int]] = defaultdict(set)
    pttu = []

    for p, period in enumerate(db.periods, start=1):
        total = 0
        for tr in period:
            items = tr.items
            for i, q in items.items():
                periods_of[i].add(p)
                pr = profits[i]
                if pr > 0:
                    total += pr * q
                for cand in buckets.get(i, ()):
                    if all(j in items for j in cand):
                        utility[cand] += sum(profits[j] * items[j] for j in cand)
        pttu.append(total)

    entries = []
    for cand in candidates:
        member_periods = [periods_of[i] for i in cand]
        if config.osp_semantics == INTERSECTION:
            osp = set.intersection(*member_periods)
        else:
            osp = set.union(*member_periods)
        denominator = sum(pttu[p - 1] for p in osp)
        if not osp or denominator == 0:
            continue
        ratio = Fraction(utility[cand]) / denominator
        if ratio >= config.min_util:
            entries.append(HouinEntry(cand, tuple(sorted(osp)), utility[cand], ratio))
    entries.sort(key=lambda e: itemset_key(e.itemset))
    return MiningResult(entries, MiningStats(db_scan_count=1, candidate_count=len(candidates)))


@dataclass
class EngineState:
    """Everything the maintainer needs to refresh results without re-mining.

    ``item_twu`` and ``item_count`` hold, per period, the TWU and the number
    of occurrences of every item (high or not).  They are bookkeeping
    tables, updated from modified transactions alone.
    """

    db: TemporalDatabase
    profits: ProfitTable
    config: MiningConfig
    trees: list[PeriodTree]
    item_twu: list[dict]
    item_count: list[dict]
    candidates: list[dict]
    result: MiningResult
    scan_counter: int = 0

    def tree(self, p: int) -> PeriodTree:
        return self.trees[p - 1]


def collect_result(state: EngineState, scans: int) -> MiningResult:
    union = set()
    for cands in state.candidates:
        union.update(cands)
    result = evaluate_candidates(union, state.db, state.profits, state.config)
    result.stats.db_scan_count = scans
    result.stats.tree_node_count = sum(t.node_count() for t in state.trees)
    return result


def mine_houin(db: TemporalDatabase, profits: ProfitTable, config: MiningConfig) -> tuple[MiningResult, EngineState]:
    """Build every period tree, mine candidates and evaluate them exactly.

    Counts one database pass per period build plus the Phase-2 pass.
    """
    trees, item_twu, item_count, candidates = [], [], [], []
    for p, period in enumerate(db.periods, start=1):
        stats = period_item_stats(period, profits)
        tree = build_period_tree(db, p, profits, config, stats=stats)
        trees.append(tree)
        item_twu.append(stats[1])
        item_count.append(stats[2])
        candidates.append(mine_period_candidates(tree, config.max_itemset_size))
    scans = db.n_periods + 1
    state = EngineState(db, profits, config, trees, item_twu, item_count, candidates, None, scans)
    state.result = collect_result(state, scans)
    return state.result, state
