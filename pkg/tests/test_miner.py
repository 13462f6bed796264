import random
from fractions import Fraction

import pytest

from houin.measures import MiningConfig, period_twu
from houin.miner import (
    MiningResult,
    evaluate_candidates,
    high_twu_items,
    mine_houin,
    mine_period_candidates,
)
from houin.oracle import brute_force_houin, enumerate_itemsets
from houin.temporal_db import TemporalDatabase
from houin.tree import build_period_tree

from conftest import DATA, random_database

LAM30 = MiningConfig(Fraction(3, 10))


def test_high_twu_items(pdb, profits):
    assert high_twu_items(pdb, 1, profits, LAM30) == ["A", "C", "D", "B"]
    assert high_twu_items(pdb, 1, profits, MiningConfig(Fraction(9, 10))) == ["A", "C"]
    assert high_twu_items(pdb, 1, profits, MiningConfig.unchecked(2)) == []


def test_period_two_candidates(pdb, profits):
    tree = build_period_tree(pdb, 2, profits, MiningConfig(Fraction(6, 10)))
    cands = mine_period_candidates(tree)
    assert set(cands) == {("A",), ("B",), ("D",), ("A", "B"), ("A", "D"), ("B", "D"), ("A", "B", "D")}
    assert cands[("A", "B", "D")] == 58 and cands[("A", "B")] == 81


def test_root_only_tree_has_no_candidates(pdb, profits):
    tree = build_period_tree(pdb, 1, profits, LAM30)
    for tr in pdb.period(1):
        tree.detach(tr)
    for item in tree.header_items():
        tree.remove_header_item(item)
    assert mine_period_candidates(tree) == {}


def test_zero_threshold_enumerates_everything():
    rng = random.Random(2)
    for _ in range(20):
        db, profits = random_database(rng)
        config = MiningConfig.unchecked(0)
        for p in range(1, db.n_periods + 1):
            tree = build_period_tree(db, p, profits, config)
            period_db = TemporalDatabase((db.period(p),), db.period_length)
            assert set(mine_period_candidates(tree)) == set(enumerate_itemsets(period_db))


def test_projected_twu_is_exact():
    rng = random.Random(8)
    for _ in range(60):
        db, profits = random_database(rng)
        config = MiningConfig(Fraction(rng.randint(1, 10), 20))
        for p in range(1, db.n_periods + 1):
            tree = build_period_tree(db, p, profits, config)
            for itemset, twu in mine_period_candidates(tree).items():
                assert twu == period_twu(itemset, p, db, profits)
                assert twu >= tree.threshold


def test_max_itemset_size_caps_candidates(pdb, profits):
    tree = build_period_tree(pdb, 1, profits, LAM30)
    assert max(map(len, mine_period_candidates(tree, 2))) == 2
    assert all(len(c) == 1 for c in mine_period_candidates(tree, 1))


def test_evaluate_candidates(pdb, profits):
    result = evaluate_candidates([("A", "D"), ("B",)], pdb, profits, LAM30)
    assert [(e.itemset, e.osur) for e in result.houin] == [(("A", "D"), Fraction(212, 283))]
    assert result.stats.db_scan_count == 1
    empty = evaluate_candidates([], pdb, profits, LAM30)
    assert empty.houin == [] and empty.stats.db_scan_count == 0


def test_mine_houin_example_golden(pdb, profits):
    result, state = mine_houin(pdb, profits, LAM30)
    assert result.to_tsv() == (DATA / "pdb_30.tsv").read_text()
    assert result.houin == brute_force_houin(pdb, profits, LAM30).houin
    assert result.stats.db_scan_count == 4
    assert len(state.trees) == 3


def test_mine_houin_lambda_one_is_empty(pdb, profits):
    result, _ = mine_houin(pdb, profits, MiningConfig(1))
    assert result.houin == [] and brute_force_houin(pdb, profits, MiningConfig(1)).houin == []


def test_mine_houin_empty_database(profits):
    result, state = mine_houin(TemporalDatabase((), 3), profits, LAM30)
    assert result.houin == [] and state.trees == []


@pytest.mark.parametrize("seed", range(40))
def test_mine_matches_oracle_random(seed):
    rng = random.Random(1000 + seed)
    db, profits = random_database(rng)
    for lam in (Fraction(1, 10), Fraction(1, 3), Fraction(3, 5)):
        config = MiningConfig(lam, osp_semantics=rng.choice(["union", "intersection"]))
        assert mine_houin(db, profits, config)[0].houin == brute_force_houin(db, profits, config).houin


def test_result_tsv_round_trip(pdb, profits):
    result, _ = mine_houin(pdb, profits, MiningConfig(Fraction(1, 10)))
    again = MiningResult.from_tsv(result.to_tsv())
    assert again.houin == result.houin


def test_determinism(pdb, profits):
    texts = {mine_houin(pdb, profits, LAM30)[0].to_tsv() for _ in range(3)}
    assert len(texts) == 1
