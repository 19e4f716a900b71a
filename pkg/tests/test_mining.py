import random
from fractions import Fraction

import pytest

from rulewb.dataset import Itemset, load_csv
from rulewb.errors import RuleFileError
from rulewb.mining import (
    MiningParams,
    generate_rules,
    mine,
    mine_frequent,
    parse_rules,
    serialize_rules,
    support,
)

from conftest import random_dataset
from oracles import brute_force_frequent, brute_force_rules

# transactions: ab, ab, ac, b
FOUR = "a,b,c\n1,1,\n1,1,\n1,,1\n,1,\n"


def _key(itemset):
    return tuple(sorted((i.attribute.id, i.value) for i in itemset))


def test_four_transaction_frequent():
    ds = load_csv(FOUR)
    freq = mine_frequent(ds, Fraction(1, 2))
    got = {_key(k): v for k, v in freq.counts.items()}
    assert got == {
        (("a", 1),): 3,
        (("b", 1),): 3,
        (("a", 1), ("b", 1)): 2,
    }


def test_impossible_threshold_is_empty():
    ds = load_csv(FOUR)
    # ceil(min_sup * n) > n is impossible for min_sup <= 1, so use n rows
    # where no itemset reaches 100% support
    freq = mine_frequent(ds, Fraction(1))
    assert len(freq) == 0


def test_rules_from_four_transactions():
    ds = load_csv(FOUR)
    params = MiningParams(min_sup=Fraction(1, 2), max_sup=1, min_conf=Fraction(3, 5))
    rules = mine(ds, params)
    described = {
        (_key(r.antecedent), _key(r.consequent), r.count_xy, r.count_x) for r in rules
    }
    assert ((("a", 1),), (("b", 1),), 2, 3) in described
    for r in rules:
        assert r.confidence >= Fraction(3, 5)


def test_min_conf_one_keeps_exact_implications():
    ds = load_csv(FOUR)
    params = MiningParams(min_sup=Fraction(1, 4), max_sup=1, min_conf=1)
    for r in mine(ds, params):
        assert r.count_xy == r.count_x


def test_max_sup_band_drops_rules():
    ds = load_csv(FOUR)
    loose = mine(ds, MiningParams(min_sup=Fraction(1, 4), max_sup=1, min_conf=Fraction(1, 2)))
    banded = mine(
        ds, MiningParams(min_sup=Fraction(1, 4), max_sup=Fraction(3, 10), min_conf=Fraction(1, 2))
    )
    assert {r.identity() for r in banded} <= {r.identity() for r in loose}
    assert all(r.support <= Fraction(3, 10) for r in banded)
    assert any(r.support > Fraction(3, 10) for r in loose)


def test_support_of_empty_set_is_one():
    ds = load_csv(FOUR)
    assert support(ds, Itemset()) == 1


def test_support_singleton():
    ds = load_csv(FOUR)
    assert support(ds, [ds.item_of("a", 1)]) == Fraction(3, 4)


def test_support_matches_paper_shaped_fixture():
    # 1000 rows; exactly 152 contain the full 4-item pattern -> 15.2%
    header = "q2,q3,q47,q70"
    rows = []
    for i in range(1000):
        if i < 152:
            rows.append("1,1,1,1")
        else:
            rows.append("2,2,2,2")
    ds = load_csv(header + "\n" + "\n".join(rows) + "\n")
    pattern = [ds.item_of(a, 1) for a in ("q2", "q3", "q47", "q70")]
    assert support(ds, pattern) == Fraction(152, 1000)


def test_antimonotonicity_random():
    rng = random.Random(23)
    ds = load_csv(random_dataset(rng, max_attrs=8, max_rows=40))
    freq = mine_frequent(ds, Fraction(1, 10))
    for itemset, count in freq.counts.items():
        for item in itemset:
            sub = itemset - {item}
            if sub:
                assert freq.counts[sub] >= count


@pytest.mark.parametrize("seed", range(5))
def test_oracle_equivalence_small(seed):
    rng = random.Random(seed)
    ds = load_csv(random_dataset(rng, max_attrs=8, max_rows=60))
    min_sup = Fraction(rng.randint(5, 30), 100)
    expected = brute_force_frequent(ds, min_sup)
    freq = mine_frequent(ds, min_sup)
    assert freq.counts == expected

    params = MiningParams(
        min_sup=min_sup,
        max_sup=Fraction(rng.randint(50, 100), 100),
        min_conf=Fraction(rng.randint(30, 90), 100),
        max_consequent_len=rng.randint(1, 3),
    )
    got = {r.identity(): (r.count_xy, r.count_x, r.n) for r in generate_rules(freq, params)}
    want = brute_force_rules(
        expected, ds.n, params.min_sup, params.max_sup, params.min_conf,
        params.max_consequent_len,
    )
    want = {(a, b): v for (a, b), v in want.items()}
    assert got == want


def test_serialization_round_trip_and_determinism():
    rng = random.Random(41)
    text = random_dataset(rng, max_attrs=7, max_rows=30)
    ds = load_csv(text)
    params = MiningParams(min_sup="0.1", max_sup="1", min_conf="0.5", max_consequent_len=2)
    a = serialize_rules(mine(ds, params))
    b = serialize_rules(mine(load_csv(text), params))
    assert a == b
    reloaded = parse_rules(a, ds)
    assert serialize_rules(reloaded) == a


def test_rule_file_rejects_bad_header():
    ds = load_csv(FOUR)
    with pytest.raises(RuleFileError):
        parse_rules("a=1\tb=1\t1\t1\t4\n", ds)


def test_params_validation():
    with pytest.raises(ValueError):
        MiningParams(min_sup="0.5", max_sup="0.2", min_conf="0.5")
    with pytest.raises(ValueError):
        MiningParams(min_sup="0", max_sup="0.2", min_conf="0.5")


def test_float_thresholds_mean_their_decimal():
    # 0.02 must behave as 2/100 exactly, not the nearest binary double
    p = MiningParams(min_sup=0.02, max_sup=0.30, min_conf=0.80)
    assert p.min_sup == Fraction(2, 100)
    assert p.max_sup == Fraction(30, 100)
