"""Per-period utility-pattern tree with a header table and node-links.

Each node stores three masses over the transactions routed through it:
``count`` (how many), ``twu`` (sum of their transaction utilities) and
``util`` (sum of the signed utility of the node's own item).  Paths list a
transaction's header items in header order; negative-profit items sort to
the header tail and therefore sit at the bottom of paths.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    ContractError,
    DuplicateEntryError,
    InconsistencyError,
    MissingItemError,
    ParseError,
)
from .measures import MiningConfig, transaction_utility
from .temporal_db import (
    ProfitTable,
    TemporalDatabase,
    TemporalTransaction,
    format_number,
    item_key,
    parse_number,
)

ROOT_LABEL = "*"


class Node:
    __slots__ = ("item", "count", "twu", "util", "parent", "children", "prev_link", "next_link")

    def __init__(self, item=None, parent=None):
        self.item = item
        self.count = 0
        self.twu = 0
        self.util = 0
        self.parent = parent
        self.children: dict[str, Node] = {}
        self.prev_link: Node | None = None
        self.next_link: Node | None = None

    def __repr__(self):
        return f"Node({self.item!r}, count={self.count}, twu={self.twu}, util={self.util})"


class HeaderEntry:
    __slots__ = ("item", "twu", "link", "tail")

    def __init__(self, item, twu):
        self.item = item
        self.twu = twu
        self.link: Node | None = None
        self.tail: Node | None = None

    def __repr__(self):
        return f"HeaderEntry({self.item!r}, twu={self.twu})"


def header_order(items: Iterable[str], twu: dict, profits: ProfitTable) -> list[str]:
    """Non-negative-profit items first, each group by TWU descending then item id."""
    return sorted(items, key=lambda i: (profits[i] < 0, -twu[i], item_key(i)))


def period_item_stats(transactions: Iterable[TemporalTransaction], profits: ProfitTable):
    """One pass over a period: ``(pttu, item twu, item occurrence count)``."""
    total = 0
    twu: dict[str, object] = {}
    count: dict[str, int] = {}
    for tr in transactions:
        tu = transaction_utility(tr, profits)
        total += tu
        for i in tr.items:
            twu[i] = twu.get(i, 0) + tu
            count[i] = count.get(i, 0) + 1
    return total, twu, count


class PeriodTree:
    def __init__(self, period: int, profits: ProfitTable, pttu=0, threshold=0):
        self.period = period
        self.profits = profits
        self.pttu = pttu
        self.threshold = threshold
        self.root = Node()
        self.header: dict[str, HeaderEntry] = {}
        self.rank: dict[str, int] = {}
        self._next_rank = 0

    # header table

    def header_items(self) -> list[str]:
        return list(self.header)

    def _add_header(self, item, twu):
        if item in self.header:
            raise DuplicateEntryError(f"{item} already in header of period {self.period}")
        self.header[item] = HeaderEntry(item, twu)
        self.rank[item] = self._next_rank
        self._next_rank += 1

    def append_header_items(self, items: Iterable[tuple[str, object]]) -> None:
        """Append entries after the existing header, sorted among themselves.

        Paths are not retrofitted here; the caller re-routes the affected
        transactions afterwards.
        """
        items = list(items)
        names = [i for i, _ in items]
        if len(set(names)) != len(names):
            raise DuplicateEntryError("duplicate item in append list")
        for item, twu in sorted(items, key=lambda e: (-e[1], item_key(e[0]))):
            self._add_header(item, twu)

    def chain(self, item: str) -> Iterator[Node]:
        node = self.header[item].link
        while node is not None:
            yield node
            node = node.next_link

    def _link(self, node: Node):
        entry = self.header[node.item]
        node.prev_link = entry.tail
        node.next_link = None
        if entry.tail is None:
            entry.link = node
        else:
            entry.tail.next_link = node
        entry.tail = node

    def _unlink(self, node: Node):
        entry = self.header[node.item]
        if node.prev_link is None:
            entry.link = node.next_link
        else:
            node.prev_link.next_link = node.next_link
        if node.next_link is None:
            entry.tail = node.prev_link
        else:
            node.next_link.prev_link = node.prev_link
        node.prev_link = node.next_link = None

    # paths

    def sort_transaction_items(self, tr: TemporalTransaction) -> list[tuple[str, object]]:
        rank = self.rank
        profits = self.profits
        kept = [i for i in tr.items if i in rank]
        kept.sort(key=rank.__getitem__)
        return [(i, profits[i] * tr.items[i]) for i in kept]

    def _check_order(self, ordered):
        last = -1
        for item, _ in ordered:
            r = self.rank.get(item)
            if r is None:
                raise ContractError(f"{item} is not a header item of period {self.period}")
            if r <= last:
                raise ContractError(f"path {[i for i, _ in ordered]} violates header order")
            last = r

    def insert_path(self, ordered: list[tuple[str, object]], tu) -> None:
        self._check_order(ordered)
        node = self.root
        node.count += 1
        node.twu += tu
        for item, u in ordered:
            child = node.children.get(item)
            if child is None:
                child = node.children[item] = Node(item, node)
                self._link(child)
            child.count += 1
            child.twu += tu
            child.util += u
            node = child

    def insert_transaction(self, tr: TemporalTransaction) -> None:
        self.insert_path(self.sort_transaction_items(tr), transaction_utility(tr, self.profits))

    def detach_transaction(self, ordered: list[tuple[str, object]], tu) -> None:
        """Remove one transaction's contribution; prune nodes whose count hits zero."""
        path = []
        node = self.root
        for item, _ in ordered:
            node = node.children.get(item)
            if node is None or node.count < 1:
                raise InconsistencyError(
                    f"period {self.period}: no path for {[i for i, _ in ordered]}"
                )
            path.append(node)
        if self.root.count < 1:
            raise InconsistencyError(f"period {self.period}: root count underflow")
        self.root.count -= 1
        self.root.twu -= tu
        for node, (_, u) in zip(path, ordered):
            node.count -= 1
            node.twu -= tu
            node.util -= u
        for node in reversed(path):
            if node.count == 0:
                if node.children:
                    raise InconsistencyError(f"period {self.period}: emptied node {node} has children")
                del node.parent.children[node.item]
                self._unlink(node)

    def detach(self, tr: TemporalTransaction) -> None:
        self.detach_transaction(self.sort_transaction_items(tr), transaction_utility(tr, self.profits))

    def conditional_pattern_base(self, item: str) -> list[tuple[list[str], int, object]]:
        if item not in self.header:
            raise MissingItemError(f"{item} is not a header item of period {self.period}")
        base = []
        for node in self.chain(item):
            prefix = []
            up = node.parent
            while up.item is not None:
                prefix.append(up.item)
                up = up.parent
            prefix.reverse()
            base.append((prefix, node.count, node.twu))
        return base

    def remove_header_item(self, item: str) -> None:
        """Splice every node of ``item`` out, re-attaching and merging its children."""
        if item not in self.header:
            raise MissingItemError(f"{item} is not a header item of period {self.period}")
        for node in list(self.chain(item)):
            parent = node.parent
            del parent.children[item]
            for child in list(node.children.values()):
                self._graft(child, parent)
        del self.header[item]
        del self.rank[item]

    def _graft(self, node: Node, parent: Node):
        twin = parent.children.get(node.item)
        if twin is None:
            node.parent = parent
            parent.children[node.item] = node
            return
        twin.count += node.count
        twin.twu += node.twu
        twin.util += node.util
        self._unlink(node)
        for child in list(node.children.values()):
            self._graft(child, twin)

    # inspection

    def nodes(self) -> Iterator[tuple[int, Node]]:
        """Pre-order ``(depth, node)`` with children in header order; root first."""
        stack = [(0, self.root)]
        rank = self.rank
        while stack:
            depth, node = stack.pop()
            yield depth, node
            children = sorted(node.children.values(), key=lambda n: rank[n.item], reverse=True)
            stack.extend((depth + 1, c) for c in children)

    def node_count(self) -> int:
        total, stack = 0, [self.root]
        while stack:
            node = stack.pop()
            total += len(node.children)
            stack.extend(node.children.values())
        return total

    def snapshot(self) -> str:
        lines = [
            f"period {self.period}",
            f"pttu {format_number(self.pttu)}",
            f"threshold {format_number(self.threshold)}",
            f"header {len(self.header)}",
        ]
        lines += [f"{e.item} {format_number(e.twu)}" for e in self.header.values()]
        node_lines = []
        for depth, node in self.nodes():
            label = ROOT_LABEL if node.item is None else node.item
            node_lines.append(
                f"{depth} {label} {node.count} {format_number(node.twu)} {format_number(node.util)}"
            )
        lines.append(f"nodes {len(node_lines)}")
        lines += node_lines
        return "\n".join(lines) + "\n"

    @classmethod
    def from_snapshot(cls, text: str, profits: ProfitTable) -> "PeriodTree":
        lines = [line for line in text.splitlines() if line.strip()]
        try:
            return cls._from_lines(lines, profits)
        except (ValueError, IndexError, KeyError) as exc:
            raise ParseError(f"malformed tree snapshot: {exc}") from None

    @classmethod
    def _from_lines(cls, lines, profits):
        def field(line, name):
            key, value = line.split()
            if key != name:
                raise ValueError(f"expected {name!r}, got {key!r}")
            return value

        period = int(field(lines[0], "period"))
        tree = cls(period, profits, parse_number(field(lines[1], "pttu")), parse_number(field(lines[2], "threshold")))
        n_header = int(field(lines[3], "header"))
        pos = 4
        for line in lines[pos:pos + n_header]:
            item, twu = line.split()
            tree._add_header(item, parse_number(twu))
        pos += n_header
        n_nodes = int(field(lines[pos], "nodes"))
        pos += 1
        stack = []
        for line in lines[pos:pos + n_nodes]:
            depth, item, count, twu, util = line.split()
            depth = int(depth)
            if depth == 0:
                node = tree.root
            else:
                del stack[depth:]
                parent = stack[-1]
                node = Node(item, parent)
                parent.children[item] = node
                tree._link(node)
            node.count, node.twu, node.util = int(count), parse_number(twu), parse_number(util)
            stack.append(node)
        if len(lines) != pos + n_nodes:
            raise ValueError("trailing lines")
        return tree


def build_period_tree(
    db: TemporalDatabase,
    p: int,
    profits: ProfitTable,
    config: MiningConfig,
    order: list[str] | None = None,
    stats=None,
) -> PeriodTree:
    """Build the utility tree of period ``p``.

    The header holds every item whose period TWU reaches ``min_util * pttu``.
    ``order`` overrides the header order (it must list exactly those items);
    maintained trees are compared against builds with their own order.
    ``stats`` may carry a precomputed ``period_item_stats`` result.
    """
    transactions = db.period(p)
    total, twu, _ = stats or period_item_stats(transactions, profits)
    threshold = Fraction(config.min_util) * total
    high = [i for i, t in twu.items() if t >= threshold]
    if order is None:
        order = header_order(high, twu, profits)
    elif sorted(order, key=item_key) != sorted(high, key=item_key):
        raise ContractError("explicit header order does not match the high-TWU items")
    tree = PeriodTree(p, profits, total, threshold)
    for item in order:
        tree._add_header(item, twu[item])
    for tr in transactions:
        tree.insert_transaction(tr)
    return tree
