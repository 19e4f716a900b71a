"""Questionnaire-style transaction tables encoded as attribute=value items.

A dataset is a header of attribute ids plus one transaction per data row;
each non-empty cell contributes one item (attribute, integer answer code).
Datasets are immutable after load and safe to share across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    CsvParseError,
    DatasetSchemaError,
    EmptyDatasetError,
    UnknownAttributeError,
)


@dataclass(frozen=True, order=True)
class Attribute:
    """A column of the transaction table, ordered by header position."""

    index: int
    id: str


@dataclass(frozen=True, order=True)
class Item:
    """An attribute=value pair; canonical order is (attribute index, value)."""

    attribute: Attribute
    value: int

    def __str__(self):
        return f"{self.attribute.id}={self.value}"


# A transaction (and any itemset) is a duplicate-free set of items.
Itemset = frozenset


def sort_items(items: Iterable[Item]) -> tuple[Item, ...]:
    """Canonical total order: attribute index ascending, then value."""
    return tuple(sorted(items))


def render_items(items: Iterable[Item]) -> str:
    return " ".join(str(i) for i in sort_items(items))


class Dataset:
    """Immutable transaction table with interned items.

    Items are interned so that (attribute, value) pairs resolve to a single
    object; dense integer ids follow canonical order, which keeps mining
    output deterministic.
    """

    def __init__(self, attributes: list[Attribute], transactions: list[Itemset]):
        self.attributes = tuple(attributes)
        self.transactions = tuple(transactions)
        self.n = len(self.transactions)
        self._by_id = {a.id: a for a in self.attributes}
        if len(self._by_id) != len(self.attributes):
            raise DatasetSchemaError("duplicate attribute ids in header")
        self._items: dict[tuple[str, int], Item] = {}
        for t in self.transactions:
            for item in t:
                self._items.setdefault((item.attribute.id, item.value), item)

    def attribute(self, attribute_id: str) -> Attribute:
        try:
            return self._by_id[attribute_id]
        except KeyError:
            raise UnknownAttributeError(f"unknown attribute {attribute_id!r}") from None

    def item_of(self, attribute_id: str, value: int) -> Item:
        """Return the canonical interned item for attribute=value."""
        attr = self.attribute(attribute_id)
        key = (attribute_id, value)
        item = self._items.get(key)
        if item is None:
            item = Item(attr, value)
            self._items[key] = item
        return item

    def items(self) -> tuple[Item, ...]:
        """All distinct items observed in transactions, canonically sorted."""
        observed = {i for t in self.transactions for i in t}
        return sort_items(observed)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.attributes == other.attributes
            and self.transactions == other.transactions
        )

    def __hash__(self):
        return hash((self.attributes, self.transactions))


@dataclass(frozen=True)
class DatasetStats:
    n: int
    attribute_count: int
    distinct_items: int
    value_inventory: dict = field(hash=False)

    def to_dict(self):
        return {
            "n": self.n,
            "attributes": self.attribute_count,
            "distinct_items": self.distinct_items,
            "values": {a: list(v) for a, v in self.value_inventory.items()},
        }


def load_csv(text: str) -> Dataset:
    """Parse a comma-separated table: header of attribute ids, integer cells.

    Empty cells yield no item; a non-integer cell is a parse error naming
    its row and column (1-based, header is row 1).
    """
    reader = csv.reader(io.StringIO(text))
    # blank lines yield no cells and are ignored; a row of empty cells
    # (e.g. ",,") is a real transaction with no items
    rows = [row for row in reader if row]
    if not rows:
        raise EmptyDatasetError("no header row")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise DatasetSchemaError(f"duplicate header ids: {', '.join(dupes)}")
    if any(h == "" for h in header):
        raise DatasetSchemaError("empty attribute id in header")
    attributes = [Attribute(i, h) for i, h in enumerate(header)]
    if len(rows) == 1:
        raise EmptyDatasetError("no data rows")

    transactions = []
    for r, row in enumerate(rows[1:], start=2):
        items = set()
        for c, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                continue
            if c >= len(attributes):
                raise CsvParseError(
                    f"row {r} has more cells than header columns", location=(r, c + 1)
                )
            try:
                value = int(cell)
            except ValueError:
                raise CsvParseError(
                    f"non-integer cell {cell!r} at row {r}, column {c + 1}",
                    location=(r, c + 1),
                ) from None
            items.add(Item(attributes[c], value))
        transactions.append(Itemset(items))
    return Dataset(attributes, transactions)


def serialize_csv(dataset: Dataset) -> str:
    """Inverse of load_csv (structural round-trip)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([a.id for a in dataset.attributes])
    for t in dataset.transactions:
        cells = [""] * len(dataset.attributes)
        for item in t:
            cells[item.attribute.index] = str(item.value)
        writer.writerow(cells)
    return out.getvalue()


def stats(dataset: Dataset) -> DatasetStats:
    """Exact summary counts plus a per-attribute sorted value inventory."""
    inventory: dict[str, tuple[int, ...]] = {a.id: () for a in dataset.attributes}
    values: dict[str, set[int]] = {a.id: set() for a in dataset.attributes}
    distinct = set()
    for t in dataset.transactions:
        for item in t:
            values[item.attribute.id].add(item.value)
            distinct.add(item)
    for a in dataset.attributes:
        inventory[a.id] = tuple(sorted(values[a.id]))
    return DatasetStats(
        n=dataset.n,
        attribute_count=len(dataset.attributes),
        distinct_items=len(distinct),
        value_inventory=inventory,
    )
