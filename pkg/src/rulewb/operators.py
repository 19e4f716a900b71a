"""The four post-processing operators: prune, conform, unexpected, exception.

All operators are pure filters: outputs are subsets of the input rule list
by identity, order preserved. Multi-term schema sides match conjunctively
(every term must match its side).
"""

from __future__ import annotations

from enum import Enum

from .dataset import Itemset
from .errors import SchemaValidityError
from .mining import AssociationRule, RuleSet
from .schema import ResolvedSchema, ResolvedTerm


class MatchMode(str, Enum):
    """Per-term semantics for non-implicative conforming.

    ANY: a term matches if some item of its extension occurs in the rule.
    ALL: a positive term matches only if its whole extension occurs.
    """

    ANY = "any"
    ALL = "all"


def term_matches(term: ResolvedTerm, itemset: Itemset) -> bool:
    """Positive: extension intersects the itemset. Negated: it does not."""
    hit = bool(term.extension & itemset)
    return not hit if term.term.negated else hit


def _term_matches_all(term: ResolvedTerm, itemset: Itemset) -> bool:
    if term.term.negated:
        return not (term.extension & itemset)
    return bool(term.extension) and term.extension <= itemset


def _anti_matches(term: ResolvedTerm, itemset: Itemset) -> bool:
    # the inverted side of unexpectedness: extension disjoint from the side
    return not (term.extension & itemset)


def conforms(rule: AssociationRule, rs: ResolvedSchema, mode: MatchMode = MatchMode.ANY) -> bool:
    """Rule sides match the schema sides (implicative), or every term
    matches the union of both sides (non-implicative)."""
    if rs.schema.implicative:
        return all(term_matches(t, rule.antecedent) for t in rs.antecedent) and all(
            term_matches(t, rule.consequent) for t in rs.consequent
        )
    pool = rule.antecedent | rule.consequent
    if mode is MatchMode.ALL:
        return all(_term_matches_all(t, pool) for t in rs.antecedent)
    return all(term_matches(t, pool) for t in rs.antecedent)


def is_unexpected(rule: AssociationRule, rs: ResolvedSchema, scope: str) -> bool:
    if scope == "condition":
        return all(_anti_matches(t, rule.antecedent) for t in rs.antecedent) and all(
            term_matches(t, rule.consequent) for t in rs.consequent
        )
    if scope == "conclusion":
        return all(term_matches(t, rule.antecedent) for t in rs.antecedent) and all(
            _anti_matches(t, rule.consequent) for t in rs.consequent
        )
    if scope == "both":
        return all(_anti_matches(t, rule.antecedent) for t in rs.antecedent) and all(
            _anti_matches(t, rule.consequent) for t in rs.consequent
        )
    raise SchemaValidityError(f"unknown unexpectedness scope {scope!r}")


def is_exception(rule: AssociationRule, rs: ResolvedSchema) -> bool:
    """Rule has shape X ^ Z -> not-Y: schema condition plus extra items,
    with a conclusion item contradicting a consequent concept on the same
    attribute."""
    if not all(term_matches(t, rule.antecedent) for t in rs.antecedent):
        return False
    covered = Itemset().union(*(t.extension for t in rs.antecedent))
    if not (rule.antecedent - covered):
        return False  # Z must be nonempty
    for item in rule.consequent:
        for t in rs.consequent:
            if item in t.extension:
                continue
            if any(other.attribute == item.attribute for other in t.extension):
                return True
    return False


def _require_implicative(rs: ResolvedSchema, what: str):
    if not rs.schema.implicative:
        raise SchemaValidityError(
            f"{what} requires an implicative schema, {rs.schema.name!r} is not"
        )


def _filter(rules: RuleSet, keep, provenance: str) -> RuleSet:
    return RuleSet(tuple(r for r in rules if keep(r)), provenance=provenance)


def apply_conform(rules: RuleSet, rs: ResolvedSchema, mode: MatchMode = MatchMode.ANY) -> RuleSet:
    return _filter(
        rules, lambda r: conforms(r, rs, mode), f"conform {rs.schema.name}"
    )


def apply_prune(rules: RuleSet, rs: ResolvedSchema, mode: MatchMode = MatchMode.ANY) -> RuleSet:
    return _filter(
        rules, lambda r: not conforms(r, rs, mode), f"prune {rs.schema.name}"
    )


def apply_unexpected(rules: RuleSet, rs: ResolvedSchema, scope: str = "condition") -> RuleSet:
    _require_implicative(rs, "unexpectedness")
    inverted = []
    if scope in ("condition", "both"):
        inverted.extend(rs.antecedent)
    if scope in ("conclusion", "both"):
        inverted.extend(rs.consequent)
    for t in inverted:
        if t.term.negated:
            raise SchemaValidityError(
                f"negated term {t.term.render()} on the inverted side of "
                f"unexpectedness is ambiguous; rewrite the schema"
            )
    return _filter(
        rules,
        lambda r: is_unexpected(r, rs, scope),
        f"unexpected({scope}) {rs.schema.name}",
    )


def apply_exception(rules: RuleSet, rs: ResolvedSchema) -> RuleSet:
    _require_implicative(rs, "exception")
    return _filter(rules, lambda r: is_exception(r, rs), f"exception {rs.schema.name}")


def apply_operator(
    rules: RuleSet,
    kind: str,
    rs: ResolvedSchema,
    scope: str = None,
    mode: MatchMode = MatchMode.ANY,
) -> RuleSet:
    if kind == "prune":
        return apply_prune(rules, rs, mode)
    if kind == "conform":
        return apply_conform(rules, rs, mode)
    if kind == "unexpected":
        return apply_unexpected(rules, rs, scope or "condition")
    if kind == "exception":
        return apply_exception(rules, rs)
    raise SchemaValidityError(f"unknown operator kind {kind!r}")
