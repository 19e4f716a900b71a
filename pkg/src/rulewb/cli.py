"""Command line entry points: mine, post, serve."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from . import mining, session as session_mod
from .dataset import load_csv
from .errors import RulewbError
from .mining import MiningParams
from .ontology import parse_ontology
from .operators import MatchMode
from .schema import parse_script


@click.group()
def main():
    """Association-rule mining and ontology-based post-processing."""


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise click.ClickException(f"cannot read {what} {path!r}: {exc}")


@main.command()
@click.option("--data", required=True, help="CSV transaction table")
@click.option("--min-sup", default="0.02", show_default=True)
@click.option("--max-sup", default="0.30", show_default=True)
@click.option("--min-conf", default="0.80", show_default=True)
@click.option("--max-consequent", default=1, show_default=True, type=int)
@click.option("--out", required=True, help="output rules file")
def mine(data, min_sup, max_sup, min_conf, max_consequent, out):
    """Mine association rules from a CSV transaction table."""
    try:
        params = MiningParams(
            min_sup=min_sup, max_sup=max_sup, min_conf=min_conf,
            max_consequent_len=max_consequent,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    try:
        dataset = load_csv(_read(data, "data file"))
        start = time.perf_counter()
        rules = mining.mine(dataset, params)
        elapsed = time.perf_counter() - start
        Path(out).write_text(mining.serialize_rules(rules))
    except RulewbError as exc:
        raise click.ClickException(exc.message)
    click.echo(f"{len(rules)} rules ({dataset.n} transactions, {elapsed:.2f}s) -> {out}")


@main.command()
@click.option("--rules", "rules_path", required=True, help="rules file from `mine`")
@click.option("--data", required=True, help="CSV the rules were mined from")
@click.option("--ontology", "ontology_path", required=True, help="ontology document")
@click.option("--script", "script_path", required=True, help=".rsl operator script")
@click.option("--out", required=True, help="report output path")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]),
              show_default=True)
@click.option("--mode", default="any", type=click.Choice(["any", "all"]),
              show_default=True, help="non-implicative conforming semantics")
def post(rules_path, data, ontology_path, script_path, out, fmt, mode):
    """Run a post-processing script over a mined rule set."""
    try:
        dataset = load_csv(_read(data, "data file"))
        ontology = parse_ontology(_read(ontology_path, "ontology"))
        ruleset = mining.parse_rules(_read(rules_path, "rules file"), dataset)
        schemas, specs = parse_script(_read(script_path, "script"))
        sess = session_mod.open_session(ruleset, ontology, dataset)
        session_mod.add_schemas(sess, schemas)
        for spec in specs:
            entry = session_mod.execute(sess, spec, mode=MatchMode(mode))
            click.echo(
                f"{entry.seq}: {spec.render()} "
                f"working {entry.before_count}->{entry.after_count}, "
                f"output {entry.result_count}"
            )
        report = session_mod.export_report(sess, fmt)
    except RulewbError as exc:
        where = f" at {exc.location}" if exc.location else ""
        raise click.ClickException(f"{exc.message}{where}")
    Path(out).write_text(report)
    click.echo(f"report -> {out}")


@main.command()
@click.option("--port", default=8040, show_default=True, envvar="RULEWB_PORT", type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data", default=None, help="preload a default dataset")
def serve(port, host, data):
    """Serve the HTTP API (and the web UI if built)."""
    import uvicorn

    from .server import create_app

    app = create_app()
    if data:
        try:
            app.state.store.add_dataset(_read(data, "data file"))
        except RulewbError as exc:
            raise click.ClickException(exc.message)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit as exc:
        sys.exit(exc.code or 1)


if __name__ == "__main__":
    main()
