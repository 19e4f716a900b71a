"""Rule schemas and the operator script DSL.

Grammar (line oriented, '#' starts a comment):

    schema NAME: <TERM {, TERM} [-> TERM {, TERM}]>
    apply OP[(SCOPE)] NAME

TERM is `[!]ConceptName`. OP is one of prune, conform, unexpected,
exception; SCOPE (unexpected only) is condition, conclusion or both.
A schema with an arrow is implicative; without one it is non-implicative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .dataset import Dataset, Itemset
from .errors import SchemaValidityError, ScriptSyntaxError
from .ontology import ConceptExpr, Ontology, Ref, item_extension

OPERATOR_KINDS = ("prune", "conform", "unexpected", "exception")
UNEXPECTED_SCOPES = ("condition", "conclusion", "both")


@dataclass(frozen=True)
class SchemaTerm:
    expr: ConceptExpr
    negated: bool = False

    def render(self) -> str:
        if not isinstance(self.expr, Ref):
            raise SchemaValidityError("only concept references render in the DSL")
        return ("!" if self.negated else "") + self.expr.concept


@dataclass(frozen=True)
class RuleSchema:
    name: str
    antecedent: tuple[SchemaTerm, ...]
    consequent: tuple[SchemaTerm, ...] = ()
    implicative: bool = True

    def __post_init__(self):
        if not self.antecedent:
            raise SchemaValidityError(f"schema {self.name!r} needs at least one term")
        if self.implicative and not self.consequent:
            raise SchemaValidityError(
                f"implicative schema {self.name!r} needs a consequent"
            )
        if not self.implicative and self.consequent:
            raise SchemaValidityError(
                f"non-implicative schema {self.name!r} cannot have a consequent"
            )


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    schema: str
    scope: Optional[str] = None

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise SchemaValidityError(f"unknown operator {self.kind!r}")
        if self.kind == "unexpected":
            if self.scope not in UNEXPECTED_SCOPES:
                raise SchemaValidityError(
                    f"unexpected needs a scope in {UNEXPECTED_SCOPES}, got {self.scope!r}"
                )
        elif self.scope is not None:
            raise SchemaValidityError(f"{self.kind} does not take a scope")

    def render(self) -> str:
        op = self.kind if self.scope is None else f"{self.kind}({self.scope})"
        return f"apply {op} {self.schema}"

    def to_dict(self):
        return {"kind": self.kind, "schema": self.schema, "scope": self.scope}

    @classmethod
    def from_dict(cls, d):
        return cls(kind=d["kind"], schema=d["schema"], scope=d.get("scope"))


@dataclass(frozen=True)
class ResolvedTerm:
    term: SchemaTerm
    extension: Itemset


@dataclass(frozen=True)
class ResolvedSchema:
    schema: RuleSchema
    antecedent: tuple[ResolvedTerm, ...]
    consequent: tuple[ResolvedTerm, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)


_TERM_RE = re.compile(r"^(!?)([A-Za-z_][A-Za-z0-9_]*)$")
_SCHEMA_RE = re.compile(r"^schema\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*<(.*)>\s*$")
_APPLY_RE = re.compile(
    r"^apply\s+([a-z]+)(?:\(([a-z]+)\))?\s+([A-Za-z_][A-Za-z0-9_]*)\s*$"
)


def _parse_terms(text: str, lineno: int) -> tuple[SchemaTerm, ...]:
    terms = []
    for raw in text.split(","):
        token = raw.strip()
        m = _TERM_RE.match(token)
        if not m:
            col = text.index(raw) + 1
            raise ScriptSyntaxError(
                f"line {lineno}: bad term {token!r}", location=(lineno, col)
            )
        terms.append(SchemaTerm(expr=Ref(m.group(2)), negated=bool(m.group(1))))
    return tuple(terms)


def parse_schema_line(body: str, name: str, lineno: int = 0) -> RuleSchema:
    """Parse the `<... [-> ...]>` body of one schema."""
    if "->" in body:
        left, _, right = body.partition("->")
        if "->" in right:
            raise ScriptSyntaxError(f"line {lineno}: more than one '->'", location=(lineno, None))
        return RuleSchema(
            name=name,
            antecedent=_parse_terms(left, lineno),
            consequent=_parse_terms(right, lineno),
            implicative=True,
        )
    return RuleSchema(
        name=name, antecedent=_parse_terms(body, lineno), consequent=(), implicative=False
    )


def parse_script(text: str) -> tuple[list[RuleSchema], list[OperatorSpec]]:
    """Parse a full .rsl script, preserving declaration order."""
    schemas: list[RuleSchema] = []
    by_name: dict[str, RuleSchema] = {}
    specs: list[OperatorSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("schema"):
            m = _SCHEMA_RE.match(line)
            if not m:
                raise ScriptSyntaxError(
                    f"line {lineno}: malformed schema declaration", location=(lineno, 1)
                )
            name, body = m.groups()
            if name in by_name:
                raise ScriptSyntaxError(
                    f"line {lineno}: duplicate schema name {name!r}", location=(lineno, 1)
                )
            schema = parse_schema_line(body, name, lineno)
            schemas.append(schema)
            by_name[name] = schema
        elif line.startswith("apply"):
            m = _APPLY_RE.match(line)
            if not m:
                raise ScriptSyntaxError(
                    f"line {lineno}: malformed apply statement", location=(lineno, 1)
                )
            kind, scope, name = m.groups()
            if name not in by_name:
                raise ScriptSyntaxError(
                    f"line {lineno}: unknown schema {name!r}", location=(lineno, 1)
                )
            if kind == "unexpected" and scope is None:
                scope = "condition"
            try:
                spec = OperatorSpec(kind=kind, scope=scope, schema=name)
            except SchemaValidityError as exc:
                raise ScriptSyntaxError(f"line {lineno}: {exc}", location=(lineno, 1)) from None
            _check_spec_against_schema(spec, by_name[name], lineno)
            specs.append(spec)
        else:
            raise ScriptSyntaxError(
                f"line {lineno}: expected 'schema' or 'apply'", location=(lineno, 1)
            )
    return schemas, specs


def _check_spec_against_schema(spec: OperatorSpec, schema: RuleSchema, lineno=None):
    if spec.kind in ("exception", "unexpected") and not schema.implicative:
        where = f"line {lineno}: " if lineno else ""
        raise SchemaValidityError(
            f"{where}{spec.kind} requires an implicative schema, {schema.name!r} is not",
            location=(lineno, 1) if lineno else None,
        )


def check_spec(spec: OperatorSpec, schema: RuleSchema):
    """Validate an operator spec against its target schema."""
    _check_spec_against_schema(spec, schema)


def format_schema(schema: RuleSchema) -> str:
    """Canonical DSL line; parse(format(s)) == s."""
    ant = ", ".join(t.render() for t in schema.antecedent)
    if schema.implicative:
        cons = ", ".join(t.render() for t in schema.consequent)
        return f"schema {schema.name}: <{ant} -> {cons}>"
    return f"schema {schema.name}: <{ant}>"


def resolve(
    schema: RuleSchema, ontology: Ontology, dataset: Optional[Dataset] = None
) -> ResolvedSchema:
    """Attach item extensions to every term; empty extensions are flagged."""
    warnings = []

    def resolve_side(terms):
        out = []
        for term in terms:
            ext = item_extension(ontology, term.expr, dataset)
            if not ext:
                label = (
                    term.render() if isinstance(term.expr, Ref) else repr(term.expr)
                )
                warnings.append(
                    f"term {label} of schema {schema.name!r} "
                    f"resolves to an empty item set"
                )
            out.append(ResolvedTerm(term=term, extension=ext))
        return tuple(out)

    return ResolvedSchema(
        schema=schema,
        antecedent=resolve_side(schema.antecedent),
        consequent=resolve_side(schema.consequent),
        warnings=tuple(warnings),
    )
