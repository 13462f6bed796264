"""Seeded synthetic datasets and modification batches.

Randomness comes from SplitMix64 (Steele, Lea & Flood, 2014), a fixed 64-bit
generator with a published reference implementation, so any port that
follows the recipes below reproduces the same files:

* ``uniform(lo, hi)``: ``lo + next() % (hi - lo + 1)``
* ``random()``: ``(next() >> 11) * 2**-53``
* weighted choice: first index whose cumulative weight exceeds
  ``random() * total``

Item popularity is Zipf-like (weight ``1/rank``) over a seeded permutation
of the items, which mimics the skew of point-of-sale baskets.
"""
from __future__ import annotations

import bisect
import math
from itertools import accumulate

from .temporal_db import ModificationBatch, TemporalDatabase, TemporalTransaction

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: int, hi: int) -> int:
        return lo + self.next() % (hi - lo + 1)

    def random(self) -> float:
        return (self.next() >> 11) * 2.0 ** -53

    def shuffle(self, seq: list) -> None:
        for k in range(len(seq) - 1, 0, -1):
            j = self.uniform(0, k)
            seq[k], seq[j] = seq[j], seq[k]


def parse_range(text: str) -> tuple[int, int]:
    """``LO..HI`` with signed integer bounds."""
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"expected LO..HI, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def generate_profits(items, profit_range, neg_fraction, rng: SplitMix64) -> dict:
    """Exactly ``floor(neg_fraction * len(items))`` items get negative profits.

    Positive profits are drawn from ``[max(lo, 1), hi]``, negative ones from
    ``[lo, min(hi, -1)]``; when one side of the range is empty its
    magnitudes mirror the other side.
    """
    lo, hi = profit_range
    if lo == hi == 0:
        raise ValueError("profit range must contain a non-zero value")
    pos = (max(lo, 1), hi) if hi >= 1 else None
    neg = (lo, min(hi, -1)) if lo <= -1 else None
    if pos is None:
        pos = (-neg[1], -neg[0])
    if neg is None:
        neg = (-pos[1], -pos[0])
    order = list(items)
    rng.shuffle(order)
    n_neg = math.floor(neg_fraction * len(order))
    negative = set(order[:n_neg])
    return {i: rng.uniform(*neg) if i in negative else rng.uniform(*pos) for i in items}


class BasketModel:
    """Zipf-popular item draws with uniform basket length and quantity."""

    def __init__(self, items, rng: SplitMix64, max_len: int, max_qty: int):
        ranked = list(items)
        rng.shuffle(ranked)
        self.ranked = ranked
        self.cumulative = list(accumulate(1.0 / r for r in range(1, len(ranked) + 1)))
        self.rng = rng
        self.max_len = min(max_len, len(ranked))
        self.max_qty = max_qty

    def basket(self) -> dict:
        rng = self.rng
        length = rng.uniform(1, self.max_len)
        total = self.cumulative[-1]
        basket = {}
        while len(basket) < length:
            k = bisect.bisect_right(self.cumulative, rng.random() * total)
            item = self.ranked[min(k, len(self.ranked) - 1)]
            if item not in basket:
                basket[item] = rng.uniform(1, self.max_qty)
        return basket


def generate_dataset(
    n_transactions: int,
    n_items: int,
    n_periods: int,
    max_qty: int = 10,
    profit_range: tuple[int, int] = (1, 10),
    neg_fraction: float = 0.2,
    seed: int = 0,
    max_len: int = 12,
):
    """Return ``(transactions, profits, period_length)``.

    Transaction ``j`` (1-based) has tid and time ``j``; the period length
    ``ceil(N / P)`` spreads transactions evenly over the periods.
    """
    if min(n_transactions, n_items, n_periods, max_qty, max_len) < 1:
        raise ValueError("counts must be >= 1")
    if not 0 <= neg_fraction <= 1:
        raise ValueError("neg_fraction must lie in [0, 1]")
    rng = SplitMix64(seed)
    items = [str(k) for k in range(1, n_items + 1)]
    profits = generate_profits(items, profit_range, neg_fraction, rng)
    model = BasketModel(items, rng, max_len, max_qty)
    transactions = [TemporalTransaction(j, j, model.basket()) for j in range(1, n_transactions + 1)]
    return transactions, profits, math.ceil(n_transactions / n_periods)


def random_batches(
    db: TemporalDatabase,
    n_batches: int,
    batch_size: int,
    seed: int = 0,
    max_len: int = 12,
    max_qty: int = 10,
) -> list[ModificationBatch]:
    """Batches replacing ``batch_size`` distinct random transactions with fresh baskets."""
    rng = SplitMix64(seed)
    tids = [tr.tid for tr in db.transactions()]
    items = sorted(db.items(), key=lambda i: (len(i), i))
    model = BasketModel(items, rng, max_len, max_qty)
    batches = []
    for _ in range(n_batches):
        pool = list(tids)
        chosen = []
        for _ in range(min(batch_size, len(pool))):
            k = rng.uniform(0, len(pool) - 1)
            chosen.append(pool[k])
            pool[k] = pool[-1]
            pool.pop()
        batches.append(ModificationBatch({tid: model.basket() for tid in chosen}))
    return batches


def load_bms(
    text: str,
    n_periods: int,
    seed: int = 0,
    max_qty: int = 10,
    profit_range: tuple[int, int] = (1, 10),
    neg_fraction: float = 0.2,
):
    """Read an item-list-per-line file (BMS-POS style).

    Line ``j`` becomes tid and time ``j``; quantities and profits come from
    the seeded model.  Returns ``(transactions, profits, period_length)``.
    """
    rng = SplitMix64(seed)
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    items = sorted({i for row in rows for i in row}, key=lambda i: (not i.isdigit(), len(i), i))
    profits = generate_profits(items, profit_range, neg_fraction, rng)
    transactions = []
    for j, row in enumerate(rows, start=1):
        basket = {}
        for item in row:
            if item not in basket:
                basket[item] = rng.uniform(1, max_qty)
        transactions.append(TemporalTransaction(j, j, basket))
    return transactions, profits, max(1, math.ceil(len(rows) / n_periods))
