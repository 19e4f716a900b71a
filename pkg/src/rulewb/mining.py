"""Levelwise Apriori mining and rule generation with exact rational metrics.

Support counting uses one transaction bitset per interned item id; an
itemset's support is the popcount of the AND of its item bitsets. All
support/confidence values are exact fractions of integer counts, so
results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Union

from .dataset import Dataset, Item, Itemset, render_items, sort_items
from .errors import RuleFileError

RULES_FORMAT_VERSION = "rulewb-rules v1"


def as_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    """Coerce a threshold to an exact fraction.

    Floats go through their decimal string so 0.02 means 2/100 rather than
    the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class MiningParams:
    min_sup: Fraction
    max_sup: Fraction
    min_conf: Fraction
    max_consequent_len: int = 1

    def __post_init__(self):
        object.__setattr__(self, "min_sup", as_fraction(self.min_sup))
        object.__setattr__(self, "max_sup", as_fraction(self.max_sup))
        object.__setattr__(self, "min_conf", as_fraction(self.min_conf))
        for name in ("min_sup", "max_sup", "min_conf"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.min_sup > self.max_sup:
            raise ValueError("min_sup must not exceed max_sup")
        if self.max_consequent_len < 1:
            raise ValueError("max_consequent_len must be positive")

    def to_dict(self):
        return {
            "min_sup": str(self.min_sup),
            "max_sup": str(self.max_sup),
            "min_conf": str(self.min_conf),
            "max_consequent_len": self.max_consequent_len,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            min_sup=Fraction(d["min_sup"]),
            max_sup=Fraction(d["max_sup"]),
            min_conf=Fraction(d["min_conf"]),
            max_consequent_len=int(d["max_consequent_len"]),
        )


@dataclass(frozen=True)
class AssociationRule:
    """X -> Y with exact transaction counts (count_xy/count_x over n rows)."""

    antecedent: Itemset
    consequent: Itemset
    count_xy: int
    count_x: int
    n: int

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError("antecedent and consequent must be nonempty")
        if self.antecedent & self.consequent:
            raise ValueError("antecedent and consequent must be disjoint")
        if not 0 < self.count_xy <= self.count_x <= self.n:
            raise ValueError("inconsistent counts")

    @property
    def support(self) -> Fraction:
        return Fraction(self.count_xy, self.n)

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.count_xy, self.count_x)

    def sort_key(self):
        return (sort_items(self.antecedent), sort_items(self.consequent))

    def identity(self):
        return (sort_items(self.antecedent), sort_items(self.consequent))

    def __str__(self):
        return f"{render_items(self.antecedent)} -> {render_items(self.consequent)}"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[AssociationRule, ...]
    provenance: str = ""

    def __post_init__(self):
        seen = set()
        for r in self.rules:
            key = r.identity()
            if key in seen:
                raise ValueError(f"duplicate rule {r}")
            seen.add(key)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


class FrequentItemsets:
    """Frequent itemsets with exact support counts (antimonotone by construction)."""

    def __init__(self, counts: dict[Itemset, int], n: int, min_sup: Fraction):
        self.counts = counts
        self.n = n
        self.min_sup = min_sup

    def __len__(self):
        return len(self.counts)

    def count(self, itemset: Itemset) -> int:
        return self.counts[itemset]


def _min_count(min_sup: Fraction, n: int) -> int:
    # ceil(min_sup * n) without floats
    f = min_sup * n
    return -(-f.numerator // f.denominator)


def support(dataset: Dataset, itemset: Iterable[Item]) -> Fraction:
    """Exact fraction of transactions containing every item of the itemset."""
    wanted = frozenset(itemset)
    if dataset.n == 0:
        return Fraction(1) if not wanted else Fraction(0)
    count = sum(1 for t in dataset.transactions if wanted <= t)
    return Fraction(count, dataset.n)


def _item_bitsets(dataset: Dataset) -> dict[Item, int]:
    bits: dict[Item, int] = {}
    for row, t in enumerate(dataset.transactions):
        mask = 1 << row
        for item in t:
            bits[item] = bits.get(item, 0) | mask
    return bits


def mine_frequent(dataset: Dataset, min_sup) -> FrequentItemsets:
    """Apriori: levelwise candidate generation over item-id prefixes.

    Returns exactly the nonempty itemsets whose support count reaches
    ceil(min_sup * n).
    """
    min_sup = as_fraction(min_sup)
    if not 0 < min_sup <= 1:
        raise ValueError(f"min_sup must be in (0, 1], got {min_sup}")
    counts: dict[Itemset, int] = {}
    n = dataset.n
    if n == 0:
        return FrequentItemsets(counts, 0, min_sup)
    threshold = _min_count(min_sup, n)
    bits = _item_bitsets(dataset)

    items = sort_items(bits)  # canonical order fixes the dense ids
    # level 1
    level: dict[tuple[Item, ...], int] = {}
    for item in items:
        c = bits[item].bit_count()
        if c >= threshold:
            level[(item,)] = c
            counts[Itemset((item,))] = c

    k = 2
    while level:
        prev = sorted(level)
        next_level: dict[tuple[Item, ...], int] = {}
        for i, a in enumerate(prev):
            for b in prev[i + 1 :]:
                if a[:-1] != b[:-1]:
                    break  # shared (k-2)-prefix join; sorted order makes this safe
                cand = a + (b[-1],)
                # prune: every (k-1)-subset must be frequent
                if any(
                    sub not in level
                    for sub in combinations(cand, k - 1)
                    if sub != a and sub != b
                ):
                    continue
                mask = bits[cand[0]]
                for item in cand[1:]:
                    mask &= bits[item]
                c = mask.bit_count()
                if c >= threshold:
                    next_level[cand] = c
                    counts[Itemset(cand)] = c
        level = next_level
        k += 1
    return FrequentItemsets(counts, n, min_sup)


def generate_rules(freq: FrequentItemsets, params: MiningParams) -> RuleSet:
    """Emit every rule meeting the support band and confidence threshold.

    max_sup is applied here as a post-filter; it is not antimonotone and
    must not prune candidate itemsets.
    """
    rules = []
    for itemset, count_xy in freq.counts.items():
        if len(itemset) < 2:
            continue
        sup = Fraction(count_xy, freq.n)
        if sup < params.min_sup or sup > params.max_sup:
            continue
        members = sort_items(itemset)
        for size in range(1, min(params.max_consequent_len, len(members) - 1) + 1):
            for cons in combinations(members, size):
                consequent = Itemset(cons)
                antecedent = itemset - consequent
                count_x = freq.counts[antecedent]
                if Fraction(count_xy, count_x) >= params.min_conf:
                    rules.append(
                        AssociationRule(antecedent, consequent, count_xy, count_x, freq.n)
                    )
    rules.sort(key=AssociationRule.sort_key)
    prov = (
        f"mined min_sup={params.min_sup} max_sup={params.max_sup} "
        f"min_conf={params.min_conf} max_consequent={params.max_consequent_len}"
    )
    return RuleSet(tuple(rules), provenance=prov)


def mine(dataset: Dataset, params: MiningParams) -> RuleSet:
    return generate_rules(mine_frequent(dataset, params.min_sup), params)


def display_order(rules: Iterable[AssociationRule]) -> list[AssociationRule]:
    """Report order: confidence desc, support desc, then canonical."""
    return sorted(
        rules, key=lambda r: (-r.confidence, -r.support, r.sort_key())
    )


def serialize_rules(ruleset: RuleSet) -> str:
    """Versioned line-oriented rule file (tab-separated counts)."""
    lines = [f"# {RULES_FORMAT_VERSION}"]
    for r in ruleset.rules:
        lines.append(
            "\t".join(
                (
                    render_items(r.antecedent),
                    render_items(r.consequent),
                    str(r.count_xy),
                    str(r.count_x),
                    str(r.n),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _parse_items(text: str, dataset: Dataset, lineno: int) -> Itemset:
    items = set()
    for token in text.split():
        attr, sep, value = token.partition("=")
        if not sep:
            raise RuleFileError(f"bad item {token!r} on line {lineno}", location=(lineno, None))
        try:
            items.add(dataset.item_of(attr, int(value)))
        except ValueError:
            raise RuleFileError(
                f"non-integer value in item {token!r} on line {lineno}",
                location=(lineno, None),
            ) from None
    return Itemset(items)


def parse_rules(text: str, dataset: Dataset, provenance: str = "loaded") -> RuleSet:
    """Parse a rule file against a dataset (items are interned through it)."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# {RULES_FORMAT_VERSION}":
        raise RuleFileError(f"missing version header '# {RULES_FORMAT_VERSION}'")
    rules = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise RuleFileError(
                f"expected 5 tab-separated fields on line {lineno}", location=(lineno, None)
            )
        ant = _parse_items(parts[0], dataset, lineno)
        cons = _parse_items(parts[1], dataset, lineno)
        try:
            count_xy, count_x, n = (int(p) for p in parts[2:])
        except ValueError:
            raise RuleFileError(
                f"non-integer count on line {lineno}", location=(lineno, None)
            ) from None
        try:
            rules.append(AssociationRule(ant, cons, count_xy, count_x, n))
        except ValueError as exc:
            raise RuleFileError(f"invalid rule on line {lineno}: {exc}", location=(lineno, None))
    return RuleSet(tuple(rules), provenance=provenance)
