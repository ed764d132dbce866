"""The ``at`` command line: serve the API, run generation headless,
or run rule inference over fact files."""

from __future__ import annotations

import os
from pathlib import Path

import click

from .facts import parse_facts
from .pipeline import generate_for_user
from .rules import infer, parse_rules, sort_directives
from .storage import Storage, StorageError


@click.group()
def main():
    """Assistance toolkit: profile-adapted pedagogical device generation."""


@main.command()
@click.option("--port", type=int, default=lambda: int(os.environ.get("AT_PORT", "8080")),
              show_default="AT_PORT or 8080")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(), default=None,
              help="Data directory (defaults to AT_DATA_DIR or ./data).")
@click.option("--rules", type=click.Path(exists=True), default=None,
              help="Rule file (defaults to AT_RULES or config/adaptation.rules).")
def serve(port: int, host: str, data_dir: str | None, rules: str | None):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(Storage(data_dir) if data_dir else None, rules)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--data-dir", type=click.Path(), default=None,
              help="Data directory (defaults to AT_DATA_DIR or ./data).")
@click.option("--user", "email", required=True, help="Registered teacher email.")
@click.option("--unit", "unit_id", required=True, help="Teaching unit id.")
@click.option("--rules", type=click.Path(exists=True), default=None,
              help="Rule file (defaults to AT_RULES or config/adaptation.rules).")
def gen(data_dir: str | None, email: str, unit_id: str, rules: str | None):
    """Generate the device for a stored unit, without HTTP."""
    storage = Storage(data_dir) if data_dir else Storage()
    try:
        uid = storage.uid_for_email(email)
        device_dir = generate_for_user(storage, uid, unit_id, rules)
    except (StorageError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(device_dir)


@main.command("infer")
@click.option("--facts", "facts_path", required=True, type=click.Path(exists=True))
@click.option("--rules", "rules_path", required=True, type=click.Path(exists=True))
def infer_command(facts_path: str, rules_path: str):
    """Print the directives derived from a fact file, one per line."""
    try:
        facts = parse_facts(Path(facts_path).read_text(encoding="utf-8"))
        rulebase = parse_rules(Path(rules_path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    result = infer(facts, rulebase)
    for directive in sort_directives(result.directives):
        click.echo(directive.canonical())


if __name__ == "__main__":
    main()
