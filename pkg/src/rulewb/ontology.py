"""Domain ontology: concept DAG, leaf-to-item mappings, defined concepts.

A concept is one of:
  leaf        -- carries a direct item mapping (attribute=value strings)
  generalized -- has children; its extension is the union over subsumed leaves
  defined     -- carries an expression over concepts and answer values

The document format is JSON: {"concepts": [{"name", "parents"?, "items"?,
"define"?}, ...]}; unknown keys are rejected. Expression nodes are one of
{"concept": name}, {"or": [...]}, {"and": [...]}, {"answerIn": [values]}.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Union

from .dataset import Dataset, Item, Itemset, sort_items
from .errors import OntologyCycleError, OntologyError, UnknownConceptError


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class Ref:
    concept: str


@dataclass(frozen=True)
class Or:
    operands: tuple

    def __post_init__(self):
        if not self.operands:
            raise OntologyError("'or' needs at least one operand")


@dataclass(frozen=True)
class And:
    operands: tuple

    def __post_init__(self):
        if not self.operands:
            raise OntologyError("'and' needs at least one operand")


@dataclass(frozen=True)
class AnswerIn:
    values: frozenset

    def __post_init__(self):
        if not self.values:
            raise OntologyError("'answerIn' needs at least one value")


ConceptExpr = Union[Ref, Or, And, AnswerIn]


def parse_expr(node) -> ConceptExpr:
    if not isinstance(node, dict) or len(node) != 1:
        raise OntologyError(f"expression node must be a single-key object, got {node!r}")
    key, value = next(iter(node.items()))
    if key == "concept":
        if not isinstance(value, str):
            raise OntologyError("'concept' takes a concept name")
        return Ref(value)
    if key in ("or", "and"):
        if not isinstance(value, list):
            raise OntologyError(f"'{key}' takes a list of expressions")
        ops = tuple(parse_expr(v) for v in value)
        return Or(ops) if key == "or" else And(ops)
    if key == "answerIn":
        if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
            raise OntologyError("'answerIn' takes a list of integers")
        return AnswerIn(frozenset(value))
    raise OntologyError(f"unknown expression operator {key!r}")


def expr_to_json(expr: ConceptExpr):
    if isinstance(expr, Ref):
        return {"concept": expr.concept}
    if isinstance(expr, Or):
        return {"or": [expr_to_json(e) for e in expr.operands]}
    if isinstance(expr, And):
        return {"and": [expr_to_json(e) for e in expr.operands]}
    return {"answerIn": sorted(expr.values)}


# ------------------------------------------------------------------ concepts

@dataclass(frozen=True)
class Concept:
    name: str
    parents: frozenset = frozenset()
    items: tuple = ()              # leaf mapping, "attr=value" strings
    define: Optional[ConceptExpr] = None


_CONCEPT_KEYS = {"name", "parents", "items", "define"}


class Ontology:
    """Validated concept DAG with item mappings and defined concepts."""

    def __init__(self, concepts: list[Concept], source_text: str = ""):
        self.concepts: dict[str, Concept] = {}
        for c in concepts:
            if c.name in self.concepts:
                raise OntologyError(f"duplicate concept name {c.name!r}")
            self.concepts[c.name] = c
        self.children: dict[str, set[str]] = {name: set() for name in self.concepts}
        for c in concepts:
            for p in c.parents:
                if p not in self.concepts:
                    raise UnknownConceptError(
                        f"concept {c.name!r} names unknown parent {p!r}"
                    )
                self.children[p].add(c.name)
        self._check_isa_acyclic()
        self._check_definitions()
        self.source_text = source_text
        self._extension_cache: dict = {}

    # -- validation ----------------------------------------------------------

    def _check_isa_acyclic(self):
        state: dict[str, int] = {}  # 0 visiting, 1 done

        def visit(name, stack):
            if state.get(name) == 1:
                return
            if state.get(name) == 0:
                cycle = stack[stack.index(name):]
                raise OntologyCycleError(
                    f"is-a cycle through concept {name!r}: {' -> '.join(cycle + [name])}"
                )
            state[name] = 0
            stack.append(name)
            for child in self.children[name]:
                visit(child, stack)
            stack.pop()
            state[name] = 1

        for name in self.concepts:
            visit(name, [])

    def _check_definitions(self):
        state: dict[str, int] = {}

        def refs(expr):
            if isinstance(expr, Ref):
                yield expr.concept
            elif isinstance(expr, (Or, And)):
                for op in expr.operands:
                    yield from refs(op)

        def visit(name, stack):
            if state.get(name) == 1:
                return
            if state.get(name) == 0:
                cycle = stack[stack.index(name):]
                raise OntologyCycleError(
                    f"definition cycle through concept {name!r}: "
                    f"{' -> '.join(cycle + [name])}"
                )
            state[name] = 0
            stack.append(name)
            concept = self.concepts[name]
            if concept.define is not None:
                for ref in refs(concept.define):
                    if ref not in self.concepts:
                        raise UnknownConceptError(
                            f"definition of {name!r} references unknown concept {ref!r}"
                        )
                    visit(ref, stack)
            stack.pop()
            state[name] = 1

        for name in self.concepts:
            visit(name, [])

    # -- queries --------------------------------------------------------------

    def concept(self, name: str) -> Concept:
        try:
            return self.concepts[name]
        except KeyError:
            raise UnknownConceptError(f"unknown concept {name!r}") from None

    def kind_of(self, name: str) -> str:
        c = self.concept(name)
        if c.define is not None:
            return "defined"
        if self.children[name]:
            return "generalized"
        return "leaf"

    def leaves_under(self, name: str) -> frozenset:
        """Leaf concepts reachable from `name` by reflexive-transitive is-a."""
        self.concept(name)
        seen = set()
        stack = [name]
        leaves = set()
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            kids = self.children[cur]
            if not kids and self.concepts[cur].define is None:
                leaves.add(cur)
            stack.extend(kids)
        return frozenset(leaves)

    def leaf_items(self, name: str, dataset: Optional[Dataset] = None) -> Itemset:
        """f0: the items a leaf concept is directly mapped to."""
        concept = self.concept(name)
        items = set()
        for token in concept.items:
            attr, _, value = token.partition("=")
            value = int(value)
            if dataset is not None and any(a.id == attr for a in dataset.attributes):
                items.add(dataset.item_of(attr, value))
            else:
                # item outside the dataset universe (or no dataset): synthesize
                from .dataset import Attribute

                items.add(Item(Attribute(-1, attr), value))
        return Itemset(items)

    def mapped_universe(self, dataset: Optional[Dataset] = None) -> Itemset:
        universe = set()
        for name, c in self.concepts.items():
            if c.items:
                universe |= self.leaf_items(name, dataset)
        return Itemset(universe)

    def digest(self) -> str:
        basis = self.source_text or json.dumps(to_document(self), sort_keys=True)
        return hashlib.sha256(basis.encode()).hexdigest()


def parse_ontology(text: str) -> Ontology:
    """Parse and validate an ontology document (see module docstring)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OntologyError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"concepts"}:
        raise OntologyError("document must be an object with a single 'concepts' key")
    if not isinstance(doc["concepts"], list):
        raise OntologyError("'concepts' must be a list")
    concepts = []
    for entry in doc["concepts"]:
        if not isinstance(entry, dict):
            raise OntologyError(f"concept entry must be an object, got {entry!r}")
        unknown = set(entry) - _CONCEPT_KEYS
        if unknown:
            raise OntologyError(
                f"unknown keys {sorted(unknown)} in concept entry {entry.get('name')!r}"
            )
        if "name" not in entry or not isinstance(entry["name"], str):
            raise OntologyError(f"concept entry missing 'name': {entry!r}")
        items = entry.get("items", [])
        if not isinstance(items, list) or not all(isinstance(i, str) for i in items):
            raise OntologyError(f"'items' of {entry['name']!r} must be a list of strings")
        for token in items:
            attr, sep, value = token.partition("=")
            if not sep or not attr or not value.lstrip("-").isdigit():
                raise OntologyError(
                    f"bad item {token!r} in concept {entry['name']!r} (want attr=value)"
                )
        parents = entry.get("parents", [])
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise OntologyError(f"'parents' of {entry['name']!r} must be a list of names")
        define = parse_expr(entry["define"]) if "define" in entry else None
        if define is not None and items:
            raise OntologyError(
                f"concept {entry['name']!r} cannot have both 'items' and 'define'"
            )
        concepts.append(
            Concept(
                name=entry["name"],
                parents=frozenset(parents),
                items=tuple(items),
                define=define,
            )
        )
    return Ontology(concepts, source_text=text)


def to_document(ontology: Ontology) -> dict:
    entries = []
    for c in ontology.concepts.values():
        entry = {"name": c.name}
        if c.parents:
            entry["parents"] = sorted(c.parents)
        if c.items:
            entry["items"] = list(c.items)
        if c.define is not None:
            entry["define"] = expr_to_json(c.define)
        entries.append(entry)
    return {"concepts": entries}


def item_extension(
    ontology: Ontology, expr: ConceptExpr, dataset: Optional[Dataset] = None
) -> Itemset:
    """Evaluate the concept-to-itemset mapping f over an expression.

    AnswerIn selects from the dataset's item universe when a dataset is
    given, otherwise from the ontology's mapped universe.
    """
    cache_key = (expr, id(dataset))
    cached = ontology._extension_cache.get(cache_key)
    if cached is not None:
        return cached

    if isinstance(expr, Ref):
        kind = ontology.kind_of(expr.concept)
        if kind == "defined":
            result = item_extension(ontology, ontology.concepts[expr.concept].define, dataset)
        else:
            leaves = ontology.leaves_under(expr.concept)
            result = Itemset().union(
                *(ontology.leaf_items(leaf, dataset) for leaf in leaves)
            ) if leaves else Itemset()
    elif isinstance(expr, Or):
        result = Itemset().union(
            *(item_extension(ontology, op, dataset) for op in expr.operands)
        )
    elif isinstance(expr, And):
        sets = [item_extension(ontology, op, dataset) for op in expr.operands]
        result = sets[0]
        for s in sets[1:]:
            result &= s
    elif isinstance(expr, AnswerIn):
        universe = (
            Itemset(dataset.items()) if dataset is not None
            else ontology.mapped_universe()
        )
        result = Itemset(i for i in universe if i.value in expr.values)
    else:
        raise OntologyError(f"unknown expression {expr!r}")

    ontology._extension_cache[cache_key] = result
    return result


@dataclass(frozen=True)
class ValidationReport:
    unmapped_items: tuple        # dataset items no leaf mapping covers
    phantom_items: tuple         # mapped items absent from the dataset

    @property
    def clean(self) -> bool:
        return not self.unmapped_items and not self.phantom_items

    def to_dict(self):
        return {
            "unmapped_items": [str(i) for i in self.unmapped_items],
            "phantom_items": [str(i) for i in self.phantom_items],
        }


def validate_against(ontology: Ontology, dataset: Dataset) -> ValidationReport:
    """Mapping hygiene report; informational, never raises."""
    mapped = ontology.mapped_universe(dataset)
    observed = set(dataset.items())
    mapped_keys = {(i.attribute.id, i.value) for i in mapped}
    observed_keys = {(i.attribute.id, i.value) for i in observed}
    unmapped = sort_items(
        i for i in observed if (i.attribute.id, i.value) not in mapped_keys
    )
    phantom = tuple(
        sorted(
            (i for i in mapped if (i.attribute.id, i.value) not in observed_keys),
            key=lambda i: (i.attribute.id, i.value),
        )
    )
    return ValidationReport(unmapped_items=unmapped, phantom_items=phantom)
