import random

import pytest
from hypothesis import given, strategies as st

from rulewb.dataset import load_csv, serialize_csv, sort_items, stats
from rulewb.errors import (
    CsvParseError,
    DatasetSchemaError,
    EmptyDatasetError,
    UnknownAttributeError,
)

from conftest import random_dataset

TABLE1 = """\
q1,q2,q3,q4,q5,q6,q7,q8,q9,q10
4,99,2,1,3,1,2,2,1,1
2,1,1,1,3,4,2,1,1,1
1,1,1,1,1,1,3,4,2,2
"""


def test_table1_extract():
    ds = load_csv(TABLE1)
    assert ds.n == 3
    first = ds.transactions[0]
    expected = {
        ("q1", 4), ("q2", 99), ("q3", 2), ("q4", 1), ("q5", 3),
        ("q6", 1), ("q7", 2), ("q8", 2), ("q9", 1), ("q10", 1),
    }
    assert {(i.attribute.id, i.value) for i in first} == expected


def test_empty_row_yields_empty_transaction():
    ds = load_csv("q1,q2\n,\n")
    assert ds.n == 1
    assert ds.transactions[0] == frozenset()


def test_round_trip_random():
    rng = random.Random(7)
    text = random_dataset(rng, max_attrs=8, max_rows=50)
    ds = load_csv(text)
    assert load_csv(serialize_csv(ds)) == ds


def test_non_integer_cell_reports_position():
    with pytest.raises(CsvParseError) as exc:
        load_csv("q1,q2\n1,x\n")
    assert exc.value.location == (2, 2)


def test_duplicate_header():
    with pytest.raises(DatasetSchemaError):
        load_csv("q1,q1\n1,2\n")


def test_zero_data_rows():
    with pytest.raises(EmptyDatasetError):
        load_csv("q1,q2\n")


def test_item_of_interns():
    ds = load_csv(TABLE1)
    a = ds.item_of("q1", 1)
    b = ds.item_of("q1", 1)
    assert a is b
    assert str(a) == "q1=1"


def test_item_of_unknown_attribute():
    ds = load_csv(TABLE1)
    with pytest.raises(UnknownAttributeError):
        ds.item_of("q999", 1)


def test_stats_table1():
    s = stats(load_csv(TABLE1))
    assert s.n == 3
    assert s.attribute_count == 10
    assert s.value_inventory["q1"] == (1, 2, 4)


def test_stats_empty_transactions():
    s = stats(load_csv("q1,q2\n,\n"))
    assert s.distinct_items == 0


def test_stats_distinct_matches_scan():
    rng = random.Random(11)
    ds = load_csv(random_dataset(rng))
    brute = {(i.attribute.id, i.value) for t in ds.transactions for i in t}
    assert stats(ds).distinct_items == len(brute)


def test_canonical_order_stable():
    rng = random.Random(3)
    ds = load_csv(random_dataset(rng))
    items = list(ds.items())
    shuffled = items[:]
    rng.shuffle(shuffled)
    assert sort_items(sort_items(shuffled)) == tuple(items)


@given(
    st.lists(
        st.lists(st.one_of(st.none(), st.integers(0, 99)), min_size=3, max_size=3),
        min_size=1,
        max_size=20,
    )
)
def test_round_trip_property(rows):
    text = "a,b,c\n" + "\n".join(
        ",".join("" if v is None else str(v) for v in row) for row in rows
    ) + "\n"
    ds = load_csv(text)
    assert load_csv(serialize_csv(ds)) == ds
    assert all(len(t) <= 3 for t in ds.transactions)


def test_transaction_size_bounded_by_attributes():
    rng = random.Random(5)
    ds = load_csv(random_dataset(rng))
    assert all(len(t) <= len(ds.attributes) for t in ds.transactions)
