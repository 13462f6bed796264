"""Mining high on-shelf utility itemsets with negative item profits.

Temporal databases are split into time periods, each period gets a utility
pattern tree, and modification batches are absorbed incrementally by
classifying changed items into four cases instead of re-mining.
"""
from .errors import HouinError
from .maintainer import classify_modified_items, refresh_houin, update_trees
from .measures import MiningConfig, parse_ratio
from .miner import EngineState, HouinEntry, MiningResult, evaluate_candidates, mine_houin, mine_period_candidates
from .oracle import brute_force_houin, enumerate_itemsets, remine_baseline
from .temporal_db import (
    ModificationBatch,
    TemporalDatabase,
    TemporalTransaction,
    apply_modifications,
    assign_periods,
    parse_database,
    parse_modifications,
    parse_profit_table,
)
from .tree import PeriodTree, build_period_tree

__version__ = "0.1.0"
