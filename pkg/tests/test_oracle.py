from fractions import Fraction

import pytest

from houin.errors import RefusalError
from houin.measures import MiningConfig
from houin.oracle import brute_force_houin, enumerate_itemsets, remine_baseline
from houin.maintainer import refresh_houin
from houin.miner import mine_houin
from houin.temporal_db import TemporalDatabase, TemporalTransaction, assign_periods

LAM30 = MiningConfig(Fraction(3, 10))


def test_enumerate_itemsets(pdb):
    assert list(enumerate_itemsets(pdb, 1)) == [("A",), ("B",), ("C",), ("D",)]
    pairs = [s for s in enumerate_itemsets(pdb, 2) if len(s) == 2]
    assert pairs == [("A", "B"), ("A", "C"), ("A", "D"), ("B", "C"), ("B", "D"), ("C", "D")]
    assert list(enumerate_itemsets(TemporalDatabase((), 1))) == []


def test_enumerate_refuses_large_input():
    tr = TemporalTransaction(1, 1, {str(k): 1 for k in range(1, 25)})
    with pytest.raises(RefusalError):
        list(enumerate_itemsets(assign_periods([tr], 1)))


def test_brute_force_spot_values(pdb, profits):
    ratios = {e.itemset: e.osur for e in brute_force_houin(pdb, profits, MiningConfig(Fraction(1, 100))).houin}
    assert ratios[("D",)] == Fraction(80, 283)
    assert ratios[("A", "D")] == Fraction(212, 283)
    assert ratios[("A", "B")] == Fraction(104, 283)
    assert ("B",) not in ratios


def test_brute_force_threshold_dominance(pdb, profits):
    top = max(e.osur for e in brute_force_houin(pdb, profits, MiningConfig(Fraction(1, 100))).houin)
    assert brute_force_houin(pdb, profits, MiningConfig(min(top + Fraction(1, 10 ** 6), 1))).houin == []


def test_all_positive_profits_zero_threshold(pdb, profits):
    positive = dict(profits, B=2)
    result = brute_force_houin(pdb, positive, MiningConfig.unchecked(0))
    assert result.itemsets() == list(enumerate_itemsets(pdb))


def test_remine_baseline(pdb, profits):
    result, state = mine_houin(pdb, profits, LAM30)
    assert remine_baseline(pdb, {}, profits, LAM30).result.houin == result.houin
    run = remine_baseline(pdb, {5: {"C": 2}}, profits, LAM30)
    assert run.scans == 4
    _, refreshed = refresh_houin(state, {5: {"C": 2}})
    assert refreshed.houin == run.result.houin
    assert refreshed.stats.db_scan_count <= run.scans
