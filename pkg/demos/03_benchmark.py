"""Refresh against re-mining on a generated 5,000 x 788 x 3 dataset.

Usage:  python3 demos/03_benchmark.py [min_util_percent]
"""
import sys
import time
from fractions import Fraction

from houin import MiningConfig, assign_periods, mine_houin
from houin.cli import BENCH_HEADER, run_bench
from houin.datagen import generate_dataset, random_batches

pct = int(sys.argv[1]) if len(sys.argv) > 1 else 5
transactions, profits, length = generate_dataset(5000, 788, 3, seed=1)
db = assign_periods(transactions, length)

for lam in (2, 5, 10, 20):
    start = time.perf_counter()
    result, _ = mine_houin(db, profits, MiningConfig(Fraction(lam, 100)))
    print(f"min_util {lam:>2}%: {time.perf_counter() - start:6.2f}s  "
          f"candidates={result.stats.candidate_count}  itemsets={len(result.houin)}")

print()
batches = random_batches(db, 10, 10, seed=2)
print(BENCH_HEADER)
for row in run_bench(db, profits, MiningConfig(Fraction(pct, 100)), batches, repeat=3):
    print(",".join(map(str, row)))
