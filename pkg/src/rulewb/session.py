"""Iterative post-processing session: working set, operator log, undo.

Pruning replaces the working set; conform/unexpected/exception store their
output as a named result and leave the working set alone. Undo is log
replay from the original rule set, which keeps the log the single source
of truth for the session state.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .dataset import Dataset, load_csv, render_items
from .errors import NothingToUndoError, SessionError
from .mining import MiningParams, RuleSet, display_order, parse_rules
from .ontology import Ontology, parse_ontology, validate_against
from .operators import MatchMode, apply_operator
from .schema import OperatorSpec, RuleSchema, check_spec, format_schema, parse_script, resolve

SESSION_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LogEntry:
    seq: int
    spec: OperatorSpec
    mode: str
    before_count: int      # working-set size before the operation
    after_count: int       # working-set size after (filters leave it unchanged)
    result_count: int = 0  # size of the operator's output
    result_name: Optional[str] = None

    def to_dict(self):
        return {
            "seq": self.seq,
            "op": self.spec.to_dict(),
            "mode": self.mode,
            "before_count": self.before_count,
            "after_count": self.after_count,
            "result_count": self.result_count,
            "result_name": self.result_name,
        }


@dataclass
class Session:
    id: str
    dataset: Dataset
    ontology: Ontology
    original_rules: RuleSet
    working_set: RuleSet
    schemas: dict[str, RuleSchema] = field(default_factory=dict)
    results: dict[str, RuleSet] = field(default_factory=dict)
    log: list[LogEntry] = field(default_factory=list)
    mining_params: Optional[MiningParams] = None
    validation: Optional[object] = None


def open_session(
    rules: RuleSet,
    ontology: Ontology,
    dataset: Dataset,
    mining_params: Optional[MiningParams] = None,
    session_id: Optional[str] = None,
) -> Session:
    report = validate_against(ontology, dataset)
    return Session(
        id=session_id or uuid.uuid4().hex,
        dataset=dataset,
        ontology=ontology,
        original_rules=rules,
        working_set=rules,
        mining_params=mining_params,
        validation=report,
    )


def add_schemas(session: Session, schemas) -> None:
    for schema in schemas:
        if schema.name in session.schemas:
            raise SessionError(f"schema {schema.name!r} already registered")
        session.schemas[schema.name] = schema


def execute(
    session: Session,
    spec: OperatorSpec,
    mode: MatchMode = MatchMode.ANY,
    result_name: Optional[str] = None,
) -> LogEntry:
    """Apply one operator; the session is untouched if anything fails."""
    try:
        schema = session.schemas[spec.schema]
    except KeyError:
        raise SessionError(f"unknown schema {spec.schema!r}") from None
    check_spec(spec, schema)
    resolved = resolve(schema, session.ontology, session.dataset)
    before = len(session.working_set)
    output = apply_operator(session.working_set, spec.kind, resolved, spec.scope, mode)

    seq = len(session.log) + 1
    name = None
    if spec.kind == "prune":
        session.working_set = output
        after = len(output)
    else:
        name = result_name or f"{spec.kind}-{seq}"
        if name in session.results:
            raise SessionError(f"result name {name!r} already used")
        session.results[name] = output
        after = before
    entry = LogEntry(
        seq=seq,
        spec=spec,
        mode=mode.value,
        before_count=before,
        after_count=after,
        result_count=len(output),
        result_name=name,
    )
    session.log.append(entry)
    return entry


def replay(session: Session, entries: list[LogEntry]) -> None:
    """Rebuild working set and results from the original rules and a log."""
    session.working_set = session.original_rules
    session.results = {}
    session.log = []
    for entry in entries:
        execute(
            session,
            entry.spec,
            mode=MatchMode(entry.mode),
            result_name=entry.result_name,
        )


def undo(session: Session) -> Session:
    """Drop the last log entry and replay the rest."""
    if not session.log:
        raise NothingToUndoError("session log is empty")
    replay(session, session.log[:-1])
    return session


# ---------------------------------------------------------------- persistence

def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def save_session(
    session: Session,
    path,
    dataset_path: str,
    ontology_path: str,
    rules_path: str,
) -> None:
    """Persist inputs-by-reference plus the ordered log; rule sets are
    recomputed on load."""
    doc = {
        "version": SESSION_FORMAT_VERSION,
        "id": session.id,
        "dataset": {"path": dataset_path, "digest": _digest(Path(dataset_path).read_text())},
        "ontology": {"path": ontology_path, "digest": session.ontology.digest()},
        "rules": {"path": rules_path, "digest": _digest(Path(rules_path).read_text())},
        "mining_params": session.mining_params.to_dict() if session.mining_params else None,
        "schemas": [format_schema(s) for s in session.schemas.values()],
        "log": [e.to_dict() for e in session.log],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_session(path) -> Session:
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != SESSION_FORMAT_VERSION:
        raise SessionError(f"unsupported session file version {doc.get('version')!r}")
    dataset_text = Path(doc["dataset"]["path"]).read_text()
    if _digest(dataset_text) != doc["dataset"]["digest"]:
        raise SessionError("dataset file changed since the session was saved")
    dataset = load_csv(dataset_text)
    ontology_text = Path(doc["ontology"]["path"]).read_text()
    ontology = parse_ontology(ontology_text)
    if ontology.digest() != doc["ontology"]["digest"]:
        raise SessionError("ontology file changed since the session was saved")
    rules_text = Path(doc["rules"]["path"]).read_text()
    if _digest(rules_text) != doc["rules"]["digest"]:
        raise SessionError("rules file changed since the session was saved")
    rules = parse_rules(rules_text, dataset)
    params = (
        MiningParams.from_dict(doc["mining_params"]) if doc.get("mining_params") else None
    )
    session = open_session(rules, ontology, dataset, params, session_id=doc["id"])
    schemas, _ = parse_script("\n".join(doc["schemas"]))
    add_schemas(session, schemas)
    entries = [
        LogEntry(
            seq=e["seq"],
            spec=OperatorSpec.from_dict(e["op"]),
            mode=e["mode"],
            before_count=e["before_count"],
            after_count=e["after_count"],
            result_name=e["result_name"],
        )
        for e in doc["log"]
    ]
    replay(session, entries)
    return session


# -------------------------------------------------------------------- reports

def _rule_rows(rules: RuleSet):
    return [
        {
            "antecedent": render_items(r.antecedent),
            "consequent": render_items(r.consequent),
            "confidence": round(float(r.confidence), 3),
            "support": round(float(r.support), 3),
        }
        for r in display_order(rules)
    ]


def export_report(session: Session, format: str = "json") -> str:
    """Full session report: params, ontology digest, log, result tables."""
    if format == "json":
        doc = {
            "session": session.id,
            "mining_params": session.mining_params.to_dict() if session.mining_params else None,
            "ontology_digest": session.ontology.digest(),
            "original_count": len(session.original_rules),
            "working_count": len(session.working_set),
            "log": [e.to_dict() for e in session.log],
            "results": {
                name: _rule_rows(rules) for name, rules in session.results.items()
            },
        }
        return json.dumps(doc, indent=2) + "\n"
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["section", "name", "antecedent", "consequent", "confidence", "support"])
        for entry in session.log:
            writer.writerow(
                [
                    "log",
                    entry.spec.render(),
                    "",
                    "",
                    f"before={entry.before_count}",
                    f"after={entry.after_count}",
                ]
            )
        for name, rules in session.results.items():
            for row in _rule_rows(rules):
                writer.writerow(
                    ["result", name, row["antecedent"], row["consequent"],
                     f"{row['confidence']:.3f}", f"{row['support']:.3f}"]
                )
        return out.getvalue()
    raise SessionError(f"unknown report format {format!r}")
