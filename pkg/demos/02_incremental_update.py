"""Modify transactions and refresh the result without re-mining.

Shows the case classification, the tree edits, and the equality with
mining the modified database from scratch.
"""
from fractions import Fraction
from pathlib import Path

from houin import MiningConfig, assign_periods, mine_houin, parse_database, parse_profit_table
from houin.maintainer import case_label, classify_modified_items, refresh_houin
from houin.temporal_db import apply_modifications

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
db = assign_periods(parse_database((DATA / "pdb.txt").read_text()), 3)
profits = parse_profit_table((DATA / "pdb.prof").read_text())
config = MiningConfig(Fraction(3, 10))

for batch in ({5: {"C": 2}}, {8: {"D": 2, "A": 3}}, {3: {"D": 1}, 6: {"B": 1}}):
    _, state = mine_houin(db, profits, config)
    cls = classify_modified_items(state, batch)
    print("batch", batch)
    for (item, p), label in sorted(cls.labels.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        print(f"  period {p} item {item}: case {label}")
    print("  thresholds:", {p: str(t) for p, t in cls.thresholds.items()})
    state, refreshed = refresh_houin(state, batch)
    fresh, _ = mine_houin(apply_modifications(db, batch), profits, config)
    print(f"  refresh scans={refreshed.stats.db_scan_count} rescans={refreshed.stats.rescans} "
          f"remine scans={fresh.stats.db_scan_count}")
    print("  identical to re-mining:", refreshed.to_tsv() == fresh.to_tsv())
    print()
