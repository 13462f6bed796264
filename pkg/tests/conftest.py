import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from houin.temporal_db import (
    TemporalTransaction,
    assign_periods,
    parse_database,
    parse_profit_table,
)

DATA = Path(__file__).parent / "data"


def load_pdb():
    db = assign_periods(parse_database((DATA / "pdb.txt").read_text()), 3)
    profits = parse_profit_table((DATA / "pdb.prof").read_text())
    return db, profits


@pytest.fixture
def pdb():
    return load_pdb()[0]


@pytest.fixture
def profits():
    return load_pdb()[1]


def random_database(rng: random.Random, max_items=8, max_transactions=15, periods=3):
    """Small database: quantities 1..10, profits -5..5 with at least one negative item."""
    n_items = rng.randint(2, max_items)
    items = [chr(ord("A") + k) for k in range(n_items)]
    profits = {i: rng.randint(-5, 5) for i in items}
    profits[rng.choice(items)] = -rng.randint(1, 5)
    n = rng.randint(periods, max_transactions)
    transactions = [
        TemporalTransaction(t, t, {i: rng.randint(1, 10) for i in rng.sample(items, rng.randint(1, n_items))})
        for t in range(1, n + 1)
    ]
    return assign_periods(transactions, -(-n // periods)), profits


def random_batch(rng: random.Random, db, profits, max_modified=5):
    items = sorted(profits)
    tids = [tr.tid for tr in db.transactions()]
    chosen = rng.sample(tids, rng.randint(1, min(max_modified, len(tids))))
    return {
        tid: {i: rng.randint(1, 10) for i in rng.sample(items, rng.randint(1, len(items)))}
        for tid in chosen
    }


@st.composite
def databases(draw, max_items=6, max_transactions=12):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_database(random.Random(seed), max_items, max_transactions)


_ACCEPTANCE_LINES = []


def record_criterion(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
