"""Walk the nine-transaction example database through every measure and the miner.

Run from the repository root:  python3 demos/01_example_walkthrough.py
"""
from fractions import Fraction
from pathlib import Path

from houin import MiningConfig, assign_periods, mine_houin, parse_database, parse_profit_table
from houin.measures import on_shelf_utility_ratio, periodical_utility, pttu, transaction_utility
from houin.oracle import brute_force_houin

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

db = assign_periods(parse_database((DATA / "pdb.txt").read_text()), 3)
profits = parse_profit_table((DATA / "pdb.prof").read_text())
print("profits:", profits)

# B has a negative profit, so it never adds to transaction utility.
for tr in db.transactions():
    print(f"tid {tr.tid}  items {tr.items}  tu = {transaction_utility(tr, profits)}")

for p in range(1, db.n_periods + 1):
    print(f"period {p}: pttu = {pttu(p, db, profits)}, pu(A,B) = {periodical_utility(('A', 'B'), p, db, profits)}")

print("osur(A,D) =", on_shelf_utility_ratio(("A", "D"), db, profits))

config = MiningConfig(Fraction(3, 10))
result, state = mine_houin(db, profits, config)
print()
print(result.to_tsv(), end="")
print(f"scans={result.stats.db_scan_count} candidates={result.stats.candidate_count} "
      f"nodes={result.stats.tree_node_count}")
assert result.to_tsv() == brute_force_houin(db, profits, config).to_tsv()
print("matches the exhaustive oracle")

print()
print(state.tree(1).snapshot(), end="")
