"""Incremental maintenance of mined results under transaction modification.

Each (item, period) touched by a batch falls into one of four cases by
comparing its period TWU with the period threshold before and after the
batch:

    case 1  high before, high after   adjust header TWU
    case 2  high before, low after    splice the item out of the tree
    case 3  low before, high after    append to header, rescan the period
    case 4  low before, low after     nothing

Only case 3 reads unmodified transactions of a period.  Thresholds move
with the period's total utility, so an item the batch never touches can
still change status; such items are classified as well.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import MissingTransactionError
from .measures import transaction_utility
from .miner import EngineState, MiningResult, collect_result, mine_period_candidates
from .temporal_db import ModificationBatch, apply_modifications, item_key

CASE1, CASE2, CASE3, CASE4 = 1, 2, 3, 4


def case_label(high_before: bool, high_after: bool) -> int:
    if high_before:
        return CASE1 if high_after else CASE2
    return CASE3 if high_after else CASE4


@dataclass
class DeltaSets:
    increase: dict = field(default_factory=dict)
    decrease: dict = field(default_factory=dict)
    remove: set = field(default_factory=set)
    rescan: set = field(default_factory=set)


@dataclass
class PeriodUpdate:
    """New bookkeeping for one touched period, computed without touching the tree."""

    period: int
    old_transactions: list
    new_transactions: list
    pttu: object
    threshold: object
    item_twu: dict
    item_count: dict


@dataclass
class Classification:
    labels: dict
    deltas: DeltaSets
    periods: dict

    def histogram(self) -> tuple[int, int, int, int]:
        counts = Counter(self.labels.values())
        return tuple(counts[c] for c in (CASE1, CASE2, CASE3, CASE4))

    @property
    def thresholds(self) -> dict:
        return {p: u.threshold for p, u in self.periods.items()}


def _as_batch(batch) -> ModificationBatch:
    if isinstance(batch, ModificationBatch):
        return batch
    return ModificationBatch.from_pairs(batch.items())


def classify_modified_items(state: EngineState, batch) -> Classification:
    batch = _as_batch(batch)
    db, profits = state.db, state.profits
    by_period: dict[int, PeriodUpdate] = {}
    for tid, items in batch:
        try:
            p, j = db.locate(tid)
        except MissingTransactionError:
            raise MissingTransactionError(f"tid {tid} is not in the database") from None
        old = db.periods[p - 1][j]
        update = by_period.get(p)
        if update is None:
            update = by_period[p] = PeriodUpdate(
                p, [], [], state.tree(p).pttu, None,
                dict(state.item_twu[p - 1]), dict(state.item_count[p - 1]),
            )
        new = type(old)(old.tid, old.time, dict(items))
        update.old_transactions.append(old)
        update.new_transactions.append(new)

    labels = {}
    deltas = DeltaSets()
    for p in sorted(by_period):
        update = by_period[p]
        tree = state.tree(p)
        twu, count = update.item_twu, update.item_count
        delta: dict[str, object] = {}
        for old, new in zip(update.old_transactions, update.new_transactions):
            tu_old = transaction_utility(old, profits)
            tu_new = transaction_utility(new, profits)
            update.pttu += tu_new - tu_old
            for i in old.items:
                delta[i] = delta.get(i, 0) - tu_old
                count[i] -= 1
            for i in new.items:
                delta[i] = delta.get(i, 0) + tu_new
                count[i] = count.get(i, 0) + 1
        for i, d in delta.items():
            twu[i] = twu.get(i, 0) + d
            if count.get(i, 0) == 0:
                count.pop(i, None)
                twu.pop(i, None)
        update.threshold = state.config.min_util * update.pttu

        def high_after(i):
            return i in count and twu[i] >= update.threshold

        watched = set(delta) | set(tree.header) | set(count)
        for i in sorted(watched, key=item_key):
            before = i in tree.header
            after = high_after(i)
            if i not in delta and before == after:
                continue
            label = case_label(before, after)
            labels[(i, p)] = label
            d = delta.get(i, 0)
            if label == CASE1:
                if d > 0:
                    deltas.increase[(i, p)] = d
                elif d < 0:
                    deltas.decrease[(i, p)] = d
            elif label == CASE2:
                deltas.remove.add((i, p))
                if d < 0:
                    deltas.decrease[(i, p)] = d
            elif label == CASE3:
                deltas.rescan.add((i, p))
    return Classification(labels, deltas, by_period)


def update_trees(state: EngineState, batch, classification: Classification | None = None) -> int:
    """Bring trees, headers and bookkeeping in line with the modified database.

    Returns the number of full-period rescans performed (case 3 only).
    """
    batch = _as_batch(batch)
    if classification is None:
        classification = classify_modified_items(state, batch)
    new_db = apply_modifications(state.db, batch)
    deltas = classification.deltas
    rescans = 0
    for p, update in sorted(classification.periods.items()):
        tree = state.tree(p)
        for old in update.old_transactions:
            tree.detach(old)
        tree.pttu = update.pttu
        tree.threshold = update.threshold
        for i in sorted((i for i, q in deltas.remove if q == p), key=item_key):
            tree.remove_header_item(i)
        for i, entry in tree.header.items():
            entry.twu = update.item_twu[i]

        appended = sorted((i for i, q in deltas.rescan if q == p), key=item_key)
        if appended:
            rescans += 1
            state.scan_counter += 1
            modified = {tr.tid for tr in update.new_transactions}
            rerouted = [
                tr for tr in new_db.period(p)
                if tr.tid not in modified and any(i in tr.items for i in appended)
            ]
            for tr in rerouted:
                tree.detach(tr)
            tree.append_header_items([(i, update.item_twu[i]) for i in appended])
            for tr in rerouted:
                tree.insert_transaction(tr)

        for new in update.new_transactions:
            tree.insert_transaction(new)
        state.item_twu[p - 1] = update.item_twu
        state.item_count[p - 1] = update.item_count
    state.db = new_db
    return rescans


def refresh_houin(state: EngineState, batch) -> tuple[EngineState, MiningResult]:
    """Apply a modification batch and return the refreshed result.

    Touched periods are re-mined from their maintained trees; the other
    periods reuse cached candidates.  Phase 2 always runs once, since any
    change of a period total moves the ratio denominators.
    """
    batch = _as_batch(batch)
    classification = classify_modified_items(state, batch)
    rescans = update_trees(state, batch, classification)
    for p in classification.periods:
        state.candidates[p - 1] = mine_period_candidates(state.tree(p), state.config.max_itemset_size)
    state.scan_counter += 1
    result = collect_result(state, rescans + 1)
    result.stats.rescans = rescans
    result.stats.cases = classification.histogram()
    state.result = result
    return state, result
