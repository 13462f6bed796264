"""Temporal transaction databases: data model, text formats and modification batches.

Items are identified by their textual label.  Labels made only of digits
order numerically, everything else orders after them lexicographically, so
``item_key`` gives the single total order used across the package.

File formats (UTF-8, ``#`` starts a comment, blank lines are ignored)::

    database       tid time item:qty [item:qty ...]
    profits        item profit
    modifications  tid item:qty [item:qty ...]
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import (
    DuplicateEntryError,
    MissingTransactionError,
    ParseError,
    PeriodRangeError,
)

Number = int | Fraction
ProfitTable = dict


def item_key(item: str):
    if item.isdigit():
        return (0, int(item), item)
    return (1, 0, item)


def sorted_items(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(items, key=item_key))


def itemset_key(itemset: Iterable[str]):
    return tuple(item_key(i) for i in itemset)


def format_number(value: Number) -> str:
    """Exact text form: integers as-is, other rationals as ``num/den``."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def parse_number(token: str) -> Number:
    """Parse a signed integer, decimal or ``num/den`` into an exact value."""
    value = Fraction(token)
    if value.denominator == 1:
        return int(value)
    return value


@dataclass(frozen=True)
class TemporalTransaction:
    tid: int
    time: int
    items: Mapping[str, int]

    def __post_init__(self):
        for item, qty in self.items.items():
            if qty <= 0:
                raise ValueError(f"tid {self.tid}: quantity of {item} must be positive")

    def __contains__(self, item):
        return item in self.items

    def issuperset(self, itemset) -> bool:
        items = self.items
        return all(i in items for i in itemset)


@dataclass(frozen=True)
class TemporalDatabase:
    """Transactions partitioned into consecutive, disjoint time periods.

    ``periods[k]`` holds the transactions of period ``k + 1``; the public API
    always speaks in 1-based period indices.
    """

    periods: tuple[tuple[TemporalTransaction, ...], ...]
    period_length: int
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    def period(self, p: int) -> tuple[TemporalTransaction, ...]:
        if not 1 <= p <= len(self.periods):
            raise PeriodRangeError(f"period {p} outside 1..{len(self.periods)}")
        return self.periods[p - 1]

    def transactions(self) -> Iterator[TemporalTransaction]:
        for period in self.periods:
            yield from period

    def __len__(self):
        return sum(len(period) for period in self.periods)

    def _locate(self):
        if self._index is None:
            index = {}
            for p, period in enumerate(self.periods, start=1):
                for j, tr in enumerate(period):
                    index[tr.tid] = (p, j)
            object.__setattr__(self, "_index", index)
        return self._index

    def locate(self, tid: int) -> tuple[int, int]:
        """Return ``(period, position)`` of a transaction."""
        try:
            return self._locate()[tid]
        except KeyError:
            raise MissingTransactionError(tid) from None

    def get(self, tid: int) -> TemporalTransaction:
        p, j = self.locate(tid)
        return self.periods[p - 1][j]

    def items(self) -> set[str]:
        return {i for tr in self.transactions() for i in tr.items}


@dataclass(frozen=True)
class ModificationBatch:
    """Replacement item maps for existing transactions, keyed by tid."""

    entries: Mapping[int, Mapping[str, int]]

    def __post_init__(self):
        for tid, items in self.entries.items():
            if not items:
                raise ValueError(f"tid {tid}: replacement item map is empty")
            if any(q <= 0 for q in items.values()):
                raise ValueError(f"tid {tid}: quantities must be positive")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Mapping[str, int]]]) -> "ModificationBatch":
        entries = {}
        for tid, items in pairs:
            if tid in entries:
                raise DuplicateEntryError(f"tid {tid} appears twice in the batch")
            entries[tid] = dict(items)
        return cls(entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_profit_table(text: str) -> ProfitTable:
    profits = {}
    for lineno, fields in _lines(text):
        if len(fields) != 2:
            raise ParseError(f"expected '<item> <profit>', got {' '.join(fields)!r}", lineno)
        item, token = fields
        try:
            value = parse_number(token)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad profit {token!r}", lineno) from None
        if item in profits:
            raise DuplicateEntryError(f"line {lineno}: duplicate profit entry for {item}")
        profits[item] = value
    return profits


def _parse_items(fields, lineno) -> dict[str, int]:
    items = {}
    for token in fields:
        item, sep, qty = token.rpartition(":")
        if not sep or not item:
            raise ParseError(f"bad item token {token!r}", lineno)
        try:
            q = int(qty)
        except ValueError:
            raise ParseError(f"bad quantity in {token!r}", lineno) from None
        if q <= 0:
            raise ParseError(f"non-positive quantity in {token!r}", lineno)
        if item in items:
            raise ParseError(f"item {item} repeated", lineno)
        items[item] = q
    return items


def _parse_int(token, what, lineno, minimum):
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", lineno) from None
    if value < minimum:
        raise ParseError(f"{what} must be >= {minimum}", lineno)
    return value


def parse_database(text: str) -> list[TemporalTransaction]:
    transactions = []
    seen = set()
    for lineno, fields in _lines(text):
        if len(fields) < 3:
            raise ParseError("expected '<tid> <time> <item>:<qty> ...'", lineno)
        tid = _parse_int(fields[0], "tid", lineno, 1)
        time = _parse_int(fields[1], "time", lineno, 0)
        if tid in seen:
            raise ParseError(f"tid {tid} repeated", lineno)
        seen.add(tid)
        transactions.append(TemporalTransaction(tid, time, _parse_items(fields[2:], lineno)))
    return transactions


def parse_modifications(text: str) -> ModificationBatch:
    pairs = []
    for lineno, fields in _lines(text):
        if len(fields) < 2:
            raise ParseError("expected '<tid> <item>:<qty> ...'", lineno)
        tid = _parse_int(fields[0], "tid", lineno, 1)
        pairs.append((tid, _parse_items(fields[1:], lineno)))
    try:
        return ModificationBatch.from_pairs(pairs)
    except DuplicateEntryError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_modification_stream(text: str) -> list[ModificationBatch]:
    """Batches separated by lines consisting of ``---``."""
    chunks, current = [], []
    for raw in text.splitlines():
        if raw.strip() == "---":
            chunks.append("\n".join(current))
            current = []
        else:
            current.append(raw)
    chunks.append("\n".join(current))
    if len(chunks) > 1 and not any(True for _ in _lines(chunks[-1])):
        chunks.pop()
    return [parse_modifications(chunk) for chunk in chunks]


def _format_items(items: Mapping[str, int]) -> str:
    return " ".join(f"{i}:{items[i]}" for i in sorted_items(items))


def format_database(db: TemporalDatabase | Iterable[TemporalTransaction]) -> str:
    transactions = db.transactions() if isinstance(db, TemporalDatabase) else db
    return "".join(f"{tr.tid} {tr.time} {_format_items(tr.items)}\n" for tr in transactions)


def format_profit_table(profits: ProfitTable) -> str:
    return "".join(f"{i} {format_number(profits[i])}\n" for i in sorted_items(profits))


def format_modifications(batch: ModificationBatch) -> str:
    return "".join(f"{tid} {_format_items(items)}\n" for tid, items in batch)


def assign_periods(transactions: Iterable[TemporalTransaction], period_length: int) -> TemporalDatabase:
    """Partition transactions by ``ceil(time / period_length)``.

    Empty periods lying between occupied ones are kept as empty tuples so
    period indices stay aligned with time.
    """
    if period_length < 1:
        raise ValueError("period_length must be >= 1")
    buckets: dict[int, list[TemporalTransaction]] = {}
    for tr in transactions:
        if tr.time < 1:
            raise ValueError(f"tid {tr.tid}: timestamps must be >= 1 for period assignment")
        buckets.setdefault(math.ceil(tr.time / period_length), []).append(tr)
    n = max(buckets, default=0)
    periods = tuple(tuple(buckets.get(p, ())) for p in range(1, n + 1))
    return TemporalDatabase(periods, period_length)


def apply_modifications(db: TemporalDatabase, batch: ModificationBatch | Mapping) -> TemporalDatabase:
    """Return a new database in which each batched transaction's items are replaced."""
    if not isinstance(batch, ModificationBatch):
        batch = ModificationBatch.from_pairs(batch.items())
    if not batch.entries:
        return db
    periods = [list(period) for period in db.periods]
    for tid, items in batch:
        p, j = db.locate(tid)
        old = periods[p - 1][j]
        periods[p - 1][j] = TemporalTransaction(old.tid, old.time, dict(items))
    return TemporalDatabase(tuple(tuple(period) for period in periods), db.period_length)


def check_profits(db: TemporalDatabase, profits: ProfitTable) -> None:
    missing = db.items() - profits.keys()
    if missing:
        raise ParseError(f"items without a profit entry: {', '.join(sorted_items(missing))}")
