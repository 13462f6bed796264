"""Utility measures over temporal databases.

Every function here evaluates its definition literally by scanning the
transactions it needs.  The tree-based miner and the maintainer must agree
with these values; the oracle is built on nothing else.

Transaction utility counts only items with positive profit.  That keeps
transaction-weighted utilization an upper bound on the signed utility of
any itemset, which the pruning in the miner depends on.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    AbsentItemError,
    ConfigError,
    PeriodRangeError,
    StructuralError,
    UndefinedRatioError,
)
from .temporal_db import Number, ProfitTable, TemporalDatabase, TemporalTransaction

UNION = "union"
INTERSECTION = "intersection"


@dataclass(frozen=True)
class MiningConfig:
    """Minimum on-shelf utility ratio and enumeration limits.

    ``min_util`` is kept as an exact fraction in (0, 1].
    """

    min_util: Fraction
    max_itemset_size: int | None = None
    osp_semantics: str = UNION

    def __post_init__(self):
        object.__setattr__(self, "min_util", Fraction(self.min_util))
        if not 0 < self.min_util <= 1:
            raise ConfigError(f"minimum utility ratio must lie in (0, 1], got {self.min_util}")
        self._check_rest()

    def _check_rest(self):
        if self.max_itemset_size is not None and self.max_itemset_size < 1:
            raise ConfigError("max_itemset_size must be >= 1")
        if self.osp_semantics not in (UNION, INTERSECTION):
            raise ConfigError(f"unknown on-shelf semantics {self.osp_semantics!r}")

    @classmethod
    def unchecked(cls, min_util, max_itemset_size=None, osp_semantics=UNION) -> "MiningConfig":
        """Build a config without the (0, 1] guard; only for degenerate tests."""
        config = object.__new__(cls)
        object.__setattr__(config, "min_util", Fraction(min_util))
        object.__setattr__(config, "max_itemset_size", max_itemset_size)
        object.__setattr__(config, "osp_semantics", osp_semantics)
        config._check_rest()
        return config


_RATIO = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:/[0-9]+)?)\s*(%?)\s*$")


def parse_ratio(text: str) -> Fraction:
    """Parse ``3/10``, ``0.3`` or ``30%`` into an exact fraction (range not checked)."""
    match = _RATIO.match(text)
    if not match:
        raise ValueError(f"cannot parse ratio {text!r}")
    try:
        value = Fraction(match.group(1))
    except ZeroDivisionError:
        raise ValueError(f"cannot parse ratio {text!r}") from None
    if match.group(2):
        value /= 100
    return value


def item_utility(item: str, tr: TemporalTransaction, profits: ProfitTable) -> Number:
    try:
        q = tr.items[item]
    except KeyError:
        raise AbsentItemError(f"item {item} not in transaction {tr.tid}") from None
    return profits[item] * q


def itemset_utility(itemset: Iterable[str], tr: TemporalTransaction, profits: ProfitTable) -> Number | None:
    """Signed utility of ``itemset`` in ``tr``, or None when not contained."""
    items = tr.items
    total = 0
    for i in itemset:
        q = items.get(i)
        if q is None:
            return None
        total += profits[i] * q
    return total


def transaction_utility(tr: TemporalTransaction, profits: ProfitTable) -> Number:
    total = 0
    for i, q in tr.items.items():
        pr = profits[i]
        if pr > 0:
            total += pr * q
    return total


def periodical_utility(itemset, p: int, db: TemporalDatabase, profits: ProfitTable) -> Number:
    total = 0
    for tr in db.period(p):
        u = itemset_utility(itemset, tr, profits)
        if u is not None:
            total += u
    return total


def pttu(p: int, db: TemporalDatabase, profits: ProfitTable) -> Number:
    return sum((transaction_utility(tr, profits) for tr in db.period(p)), 0)


def period_twu(itemset, p: int, db: TemporalDatabase, profits: ProfitTable) -> Number:
    itemset = tuple(itemset)
    return sum(
        (transaction_utility(tr, profits) for tr in db.period(p) if tr.issuperset(itemset)),
        0,
    )


def item_periods(item: str, db: TemporalDatabase) -> set[int]:
    return {
        p
        for p, period in enumerate(db.periods, start=1)
        if any(item in tr.items for tr in period)
    }


def on_shelf_periods(itemset, db: TemporalDatabase, semantics: str = UNION) -> set[int]:
    """Periods in which the itemset is on shelf.

    Under ``union`` (the default) a period counts when any member item
    occurs in it; ``intersection`` requires every member item.
    """
    sets = [item_periods(i, db) for i in itemset]
    if not sets:
        return set()
    if semantics == INTERSECTION:
        return set.intersection(*sets)
    return set.union(*sets)


def on_shelf_utility(itemset, db: TemporalDatabase, profits: ProfitTable, semantics: str = UNION) -> Number:
    return sum(
        (periodical_utility(itemset, p, db, profits) for p in sorted(on_shelf_periods(itemset, db, semantics))),
        0,
    )


def on_shelf_utility_ratio(itemset, db: TemporalDatabase, profits: ProfitTable, semantics: str = UNION) -> Fraction:
    periods = on_shelf_periods(itemset, db, semantics)
    if not periods:
        raise UndefinedRatioError(f"{tuple(itemset)} has no on-shelf period")
    denominator = sum((pttu(p, db, profits) for p in periods), 0)
    if denominator == 0:
        raise UndefinedRatioError(f"{tuple(itemset)}: on-shelf periods carry no transaction utility")
    numerator = sum((periodical_utility(itemset, p, db, profits) for p in periods), 0)
    return Fraction(numerator) / denominator


@dataclass(frozen=True)
class Verdict:
    """Outcome of the high on-shelf utility test; truthy when high."""

    high: bool
    undefined: bool = False
    ratio: Fraction | None = None

    def __bool__(self):
        return self.high


def is_houin(itemset, db: TemporalDatabase, profits: ProfitTable, config: MiningConfig) -> Verdict:
    try:
        ratio = on_shelf_utility_ratio(itemset, db, profits, config.osp_semantics)
    except UndefinedRatioError:
        return Verdict(False, undefined=True)
    return Verdict(ratio >= config.min_util, ratio=ratio)


def twu_difference(item: str, p: int, old_db: TemporalDatabase, new_db: TemporalDatabase, profits: ProfitTable) -> Number:
    if old_db.n_periods != new_db.n_periods:
        raise StructuralError("databases have different period counts")
    for old_period, new_period in zip(old_db.periods, new_db.periods):
        if [tr.tid for tr in old_period] != [tr.tid for tr in new_period]:
            raise StructuralError("databases disagree on period membership")
    if not 1 <= p <= old_db.n_periods:
        raise PeriodRangeError(f"period {p} outside 1..{old_db.n_periods}")
    return period_twu((item,), p, new_db, profits) - period_twu((item,), p, old_db, profits)
