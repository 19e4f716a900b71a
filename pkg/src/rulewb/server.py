"""HTTP API over datasets, mining, ontologies and sessions.

All ids for immutable artifacts (datasets, ontologies, rule sets, results)
are content addressed; session ids are opaque tokens. Rule sets are never
inlined in session responses, only paged through /rulesets and /results.
"""

from __future__ import annotations

import hashlib
import json
import threading
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import mining, session as session_mod
from .dataset import load_csv, render_items, stats
from .errors import (
    NothingToUndoError,
    RulewbError,
    SessionError,
    UnknownConceptError,
)
from .mining import MiningParams, RuleSet, display_order
from .ontology import (
    Ontology,
    Ref,
    item_extension,
    parse_expr,
    parse_ontology,
    validate_against,
)
from .operators import MatchMode
from .schema import OperatorSpec, format_schema, parse_script
from .session import Session


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, location=None):
        self.status = status
        self.code = code
        self.message = message
        self.location = location

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.location is not None:
            body["location"] = list(self.location) if isinstance(self.location, tuple) else self.location
        return JSONResponse(status_code=self.status, content={"error": body})


def _content_id(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class Store:
    """In-memory artifact and session registry."""

    def __init__(self):
        self.datasets = {}
        self.dataset_texts = {}
        self.ontologies = {}
        self.rulesets = {}
        self.sessions: dict[str, Session] = {}
        self.session_locks: dict[str, threading.Lock] = {}
        self.default_dataset: Optional[str] = None

    def add_dataset(self, text: str) -> str:
        did = _content_id(text)
        if did not in self.datasets:
            self.datasets[did] = load_csv(text)
            self.dataset_texts[did] = text
        if self.default_dataset is None:
            self.default_dataset = did
        return did

    def add_ontology(self, text: str) -> str:
        oid = _content_id(text)
        if oid not in self.ontologies:
            self.ontologies[oid] = parse_ontology(text)
        return oid

    def add_ruleset(self, ruleset: RuleSet) -> str:
        rid = _content_id(mining.serialize_rules(ruleset))
        self.rulesets.setdefault(rid, ruleset)
        return rid

    def get(self, table: dict, key: str, what: str):
        try:
            return table[key]
        except KeyError:
            raise ApiError(404, f"unknown_{what}", f"unknown {what} id {key!r}") from None


class MineBody(BaseModel):
    dataset: str
    min_sup: str = "0.02"
    max_sup: str = "0.30"
    min_conf: str = "0.80"
    max_consequent_len: int = 1


class SessionBody(BaseModel):
    ruleset: str
    ontology: str
    dataset: str


class SchemasBody(BaseModel):
    script: str


class ApplyBody(BaseModel):
    op: str
    schema_name: str = Field(alias="schema")
    scope: Optional[str] = None
    mode: str = "any"
    result_name: Optional[str] = None

    model_config = {"populate_by_name": True}


def _page_rules(ruleset: RuleSet, offset: int, limit: int, sort: str):
    if sort == "confidence":
        ordered = display_order(ruleset)
    elif sort in ("canonical", ""):
        ordered = list(ruleset.rules)
    else:
        raise ApiError(400, "bad_sort", f"unknown sort {sort!r}")
    page = ordered[offset : offset + limit]
    return {
        "total": len(ruleset),
        "offset": offset,
        "limit": limit,
        "sort": sort or "canonical",
        "rules": [
            {
                "antecedent": render_items(r.antecedent),
                "consequent": render_items(r.consequent),
                "support": round(float(r.support), 3),
                "confidence": round(float(r.confidence), 3),
                "count_xy": r.count_xy,
                "count_x": r.count_x,
                "n": r.n,
            }
            for r in page
        ],
    }


def _concept_tree(ontology: Ontology):
    return [
        {
            "name": c.name,
            "parents": sorted(c.parents),
            "kind": ontology.kind_of(c.name),
        }
        for c in ontology.concepts.values()
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="rulewb")
    store = Store()
    app.state.store = store

    @app.exception_handler(ApiError)
    async def api_error_handler(_req, exc: ApiError):
        return exc.response()

    @app.exception_handler(RulewbError)
    async def rulewb_error_handler(_req, exc: RulewbError):
        return ApiError(400, exc.code, exc.message, exc.location).response()

    @app.middleware("http")
    async def cors(request: Request, call_next):
        response = await call_next(request)
        response.headers["Access-Control-Allow-Origin"] = "*"
        response.headers["Access-Control-Allow-Headers"] = "Content-Type"
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
        return response

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/datasets")
    async def post_dataset(request: Request):
        text = (await request.body()).decode("utf-8")
        did = store.add_dataset(text)
        return {"id": did, "stats": stats(store.datasets[did]).to_dict()}

    @app.post("/ontologies")
    async def post_ontology(request: Request):
        text = (await request.body()).decode("utf-8")
        oid = store.add_ontology(text)
        ontology = store.ontologies[oid]
        report = None
        if store.default_dataset:
            report = validate_against(
                ontology, store.datasets[store.default_dataset]
            ).to_dict()
        return {"id": oid, "concepts": len(ontology.concepts), "validation": report}

    @app.post("/mine")
    async def post_mine(body: MineBody):
        dataset = store.get(store.datasets, body.dataset, "dataset")
        try:
            params = MiningParams(
                min_sup=body.min_sup,
                max_sup=body.max_sup,
                min_conf=body.min_conf,
                max_consequent_len=body.max_consequent_len,
            )
        except ValueError as exc:
            raise ApiError(400, "bad_params", str(exc))
        ruleset = mining.mine(dataset, params)
        rid = store.add_ruleset(ruleset)
        return {"ruleset": rid, "count": len(ruleset)}

    @app.post("/rulesets")
    async def post_ruleset(request: Request, dataset: str = Query(...)):
        # upload a pre-mined rules file against an uploaded dataset
        ds = store.get(store.datasets, dataset, "dataset")
        text = (await request.body()).decode("utf-8")
        ruleset = mining.parse_rules(text, ds)
        rid = store.add_ruleset(ruleset)
        return {"ruleset": rid, "count": len(ruleset)}

    @app.get("/rulesets/{rid}")
    async def get_ruleset(
        rid: str, offset: int = 0, limit: int = 100, sort: str = "canonical"
    ):
        ruleset = store.get(store.rulesets, rid, "ruleset")
        return _page_rules(ruleset, offset, limit, sort)

    @app.get("/ontologies/{oid}/concepts")
    async def get_concepts(oid: str):
        ontology = store.get(store.ontologies, oid, "ontology")
        return {"concepts": _concept_tree(ontology)}

    @app.get("/ontologies/{oid}/extension")
    async def get_extension(oid: str, expr: str, dataset: Optional[str] = None):
        ontology = store.get(store.ontologies, oid, "ontology")
        ds = store.get(store.datasets, dataset, "dataset") if dataset else None
        expr = expr.strip()
        if expr.startswith("{"):
            try:
                parsed = parse_expr(json.loads(expr))
            except json.JSONDecodeError as exc:
                raise ApiError(400, "bad_expression", f"invalid JSON expression: {exc}")
        else:
            parsed = Ref(expr)
        try:
            items = item_extension(ontology, parsed, ds)
        except UnknownConceptError as exc:
            raise ApiError(404, exc.code, exc.message)
        return {"items": sorted(str(i) for i in items), "count": len(items)}

    @app.post("/sessions")
    async def post_session(body: SessionBody):
        ruleset = store.get(store.rulesets, body.ruleset, "ruleset")
        ontology = store.get(store.ontologies, body.ontology, "ontology")
        dataset = store.get(store.datasets, body.dataset, "dataset")
        sess = session_mod.open_session(ruleset, ontology, dataset)
        store.sessions[sess.id] = sess
        store.session_locks[sess.id] = threading.Lock()
        return {"id": sess.id, "working_count": len(sess.working_set)}

    def _session(sid: str) -> Session:
        return store.get(store.sessions, sid, "session")

    def _locked(sid: str):
        lock = store.session_locks[sid]
        if not lock.acquire(blocking=False):
            raise ApiError(409, "session_busy", "concurrent mutation on this session")
        return lock

    @app.post("/sessions/{sid}/schemas")
    async def post_schemas(sid: str, body: SchemasBody):
        sess = _session(sid)
        lock = _locked(sid)
        try:
            schemas, _specs = parse_script(body.script)
            session_mod.add_schemas(sess, schemas)
        finally:
            lock.release()
        return {
            "schemas": [
                {"name": s.name, "text": format_schema(s), "implicative": s.implicative}
                for s in schemas
            ]
        }

    @app.post("/sessions/{sid}/apply")
    async def post_apply(sid: str, body: ApplyBody):
        sess = _session(sid)
        try:
            spec = OperatorSpec(kind=body.op, schema=body.schema_name, scope=body.scope)
            mode = MatchMode(body.mode)
        except ValueError as exc:
            raise ApiError(400, "bad_mode", str(exc))
        lock = _locked(sid)
        try:
            entry = session_mod.execute(sess, spec, mode=mode, result_name=body.result_name)
        finally:
            lock.release()
        if spec.kind == "prune":
            result_id = store.add_ruleset(sess.working_set)
        else:
            result_id = store.add_ruleset(sess.results[entry.result_name])
        return {
            "entry": entry.to_dict(),
            "result": result_id,
            "working_count": len(sess.working_set),
        }

    @app.post("/sessions/{sid}/undo")
    async def post_undo(sid: str):
        sess = _session(sid)
        lock = _locked(sid)
        try:
            try:
                session_mod.undo(sess)
            except NothingToUndoError as exc:
                raise ApiError(400, exc.code, exc.message)
        finally:
            lock.release()
        return {
            "working_count": len(sess.working_set),
            "log_length": len(sess.log),
            "results": sorted(sess.results),
        }

    @app.get("/sessions/{sid}/log")
    async def get_log(sid: str):
        sess = _session(sid)
        return {
            "log": [e.to_dict() for e in sess.log],
            "working_count": len(sess.working_set),
            "original_count": len(sess.original_rules),
        }

    @app.get("/results/{rid}")
    async def get_result(
        rid: str, offset: int = 0, limit: int = 100, sort: str = "confidence"
    ):
        ruleset = store.get(store.rulesets, rid, "result")
        return _page_rules(ruleset, offset, limit, sort)

    @app.get("/sessions/{sid}/report")
    async def get_report(sid: str, format: str = "json"):
        sess = _session(sid)
        try:
            report = session_mod.export_report(sess, format)
        except SessionError as exc:
            raise ApiError(400, exc.code, exc.message)
        media = "application/json" if format == "json" else "text/csv"
        return Response(content=report, media_type=media)

    _mount_ui(app)
    return app


def _mount_ui(app: FastAPI):
    """Serve the built web UI when its static assets exist."""
    from pathlib import Path

    from fastapi.staticfiles import StaticFiles

    for candidate in (
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
        Path(__file__).resolve().parent / "ui",
    ):
        if candidate.is_dir():
            app.mount("/", StaticFiles(directory=str(candidate), html=True), name="ui")
            return
