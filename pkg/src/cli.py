#!/usr/bin/env python3
"""
🖥️ cohomog7 Command Line
Single-manifold reports, parameter-space search, summary tables and validation.

Exit codes: 0 success, 1 usage or parse error, 2 invalid parameters, 3 internal consistency failure.
"""

import asyncio
import csv
import functools
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Coroutine, List, Optional, TypeVar

import typer
import yaml
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .classify import ClassificationReport, SummaryRow, headline, report, summary_row
from .errors import Cohomog7Error, InvalidInputError, InvalidParametersError, ParameterParseError
from .families import Family, parse_params, validate as validate_params
from .search import SearchSpec, run_search

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("cohomog7.cli")

T = TypeVar("T")

app = typer.Typer(
    name="cohomog7",
    help="Integral cohomology of the cohomogeneity one 7-manifolds L, M, N and O.",
    add_completion=False,
    no_args_is_help=True,
)


@dataclass
class ToolConfig:
    """Configuration for the command line tool"""
    name: str = "cohomog7"
    version: str = __version__
    log_level: str = "WARNING"
    workers: int = 4
    chunk_size: int = 256
    cache_dir: Optional[str] = None


def load_config(config_path: Optional[Path] = None) -> ToolConfig:
    """Defaults, then the YAML file, then the environment (a .env file is read first)"""
    load_dotenv()
    data = {}
    if config_path is not None:
        if not Path(config_path).exists():
            raise InvalidInputError(f"config file {config_path} does not exist")
        with open(config_path, 'r') as f:
            data = yaml.safe_load(f) or {}
        known = {f.name for f in fields(ToolConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}", data={'unknown': unknown})

    config = ToolConfig(**data)
    if os.getenv("COHOMOG7_CACHE_DIR"):
        config.cache_dir = os.getenv("COHOMOG7_CACHE_DIR")
    if os.getenv("COHOMOG7_LOG_LEVEL"):
        config.log_level = os.getenv("COHOMOG7_LOG_LEVEL")
    if config.workers < 1 or config.chunk_size < 1:
        raise InvalidInputError("workers and chunk_size must be positive")
    return config


def setup_logging(level: str) -> logging.Logger:
    """Rich logging on stderr for every cohomog7.* logger"""
    root = logging.getLogger("cohomog7")
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    root.handlers = []
    root.propagate = False

    handler = RichHandler(
        console=err_console,
        show_time=True,
        show_level=True,
        show_path=False
    )
    handler.setFormatter(logging.Formatter(
        "%(message)s",
        datefmt="[%X]"
    ))
    root.addHandler(handler)
    return root


def handle_errors(func):
    """Turn library exceptions into a message on stderr and the matching exit code"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Cohomog7Error as e:
            err_console.print(f"[red]❌ {escape(e.message)}[/red]")
            logger.debug("error data: %s", e.data)
            raise typer.Exit(code=e.exit_code)
    return wrapper


def _config(ctx: typer.Context) -> ToolConfig:
    return ctx.obj if isinstance(ctx.obj, ToolConfig) else ToolConfig()


def _run_coroutine(coro: Coroutine[Any, Any, T]) -> T:
    """asyncio.run, moved to a helper thread when the caller already has a running loop"""
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(coro)
    with ThreadPoolExecutor(max_workers=1) as pool:
        return pool.submit(asyncio.run, coro).result()


@app.callback()
@handle_errors
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="YAML configuration file"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    tool_config = load_config(config)
    if log_level:
        tool_config.log_level = log_level
    setup_logging(tool_config.log_level)
    ctx.obj = tool_config


# Rendering

def _render_report(rep: ClassificationReport) -> None:
    console.print(Panel.fit(f"🧮 {escape(rep.label)}", style="bold cyan"))
    console.print(escape(headline(rep)), markup=True)
    if not rep.valid:
        for error in rep.errors:
            console.print(f"  • {escape(error['message'])}")
        return

    groups = Table(title="Integral cohomology")
    groups.add_column("k", style="cyan", justify="right")
    groups.add_column("H^k", style="green")
    for k, group in enumerate(rep.table.groups):
        groups.add_row(str(k), str(group))
    console.print(groups)

    notes = rep.table.ring_notes
    generators = ", ".join(f"{g.name} in H^{g.degree}" for g in notes.generators)
    console.print(f"Ring generators{'' if notes.complete else ' (partial list)'}: {escape(generators)}")
    for line in notes.products + notes.remarks:
        console.print(f"  • {escape(line)}")

    provenance = Table(title="Provenance")
    provenance.add_column("Claim", style="cyan")
    provenance.add_column("Source")
    for entry in rep.provenance:
        provenance.add_row(escape(entry.claim), escape(entry.source))
    console.print(provenance)


def _rows_table(rows: List[SummaryRow], title: str) -> Table:
    table = Table(title=title)
    for column in SummaryRow.COLUMNS:
        table.add_column(column.capitalize())
    for row in rows:
        table.add_row(*(escape(getattr(row, column)) for column in SummaryRow.COLUMNS))
    return table


def _rows_csv(rows: List[SummaryRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SummaryRow.COLUMNS)
    for row in rows:
        writer.writerow([getattr(row, column) for column in SummaryRow.COLUMNS])
    return buffer.getvalue()


def _single_format(json_output: bool, csv_output: bool) -> None:
    if json_output and csv_output:
        raise InvalidInputError("choose at most one of --json and --csv")


# Commands

@app.command()
@handle_errors
def info(
    params: str = typer.Argument(..., help="e.g. 'N(1,1)(2,1)' or 'O(2,3:2)'"),
    json_output: bool = typer.Option(False, "--json", help="Print the report as JSON"),
):
    """Cohomology groups, ring notes and classification of one manifold."""
    rep = report(parse_params(params))
    if json_output:
        typer.echo(json.dumps(rep.to_dict(), ensure_ascii=False, indent=2))
    else:
        _render_report(rep)
    if not rep.valid:
        raise typer.Exit(code=InvalidParametersError.exit_code)


@app.command()
@handle_errors
def validate(params: str = typer.Argument(..., help="Parameter string to check")):
    """Check a parameter tuple against the restrictions of its family."""
    parsed = parse_params(params)
    violations = validate_params(parsed)
    if not violations:
        console.print(f"✅ {escape(parsed.label)} is valid")
        return
    console.print(f"❌ {escape(parsed.label)} is invalid")
    for violation in violations:
        console.print(f"  • [{violation.rule}] {violation.message}", markup=False)
    raise typer.Exit(code=InvalidParametersError.exit_code)


@app.command()
@handle_errors
def search(
    ctx: typer.Context,
    families: str = typer.Option("L,M,N,O", "--families", help="Comma separated subset of L,M,N,O"),
    bound: int = typer.Option(5, "--bound", help="Largest |parameter|"),
    r: Optional[int] = typer.Option(None, "--r", help="Keep only rows with this r"),
    type_er: bool = typer.Option(False, "--type-er", help="Keep only cohomology type E_r"),
    eschenburg: bool = typer.Option(False, "--eschenburg", help="Keep only Eschenburg ring candidates"),
    json_output: bool = typer.Option(False, "--json", help="One JSON report per line"),
    csv_output: bool = typer.Option(False, "--csv", help="Summary rows as CSV"),
):
    """Enumerate valid parameter tuples up to a bound and list the candidates."""
    _single_format(json_output, csv_output)
    output = "json" if json_output else "csv" if csv_output else "table"
    try:
        spec = SearchSpec(families=families, bound=bound, r=r, type_er=type_er, eschenburg=eschenburg, output=output)
    except (ValidationError, ValueError) as e:
        raise InvalidInputError(f"invalid search: {e}") from e

    config = _config(ctx)
    cache_dir = Path(config.cache_dir) if config.cache_dir else None
    hits = _run_coroutine(run_search(spec, config.workers, config.chunk_size, cache_dir))

    if output == "json":
        for hit in hits:
            typer.echo(hit.to_json_line())
    elif output == "csv":
        typer.echo(_rows_csv([hit.summary for hit in hits]), nl=False)
    else:
        console.print(_rows_table([hit.summary for hit in hits], f"Candidates ({len(hits)})"))


@app.command()
@handle_errors
def table(
    file: Path = typer.Argument(..., help="One parameter string per line; '#' starts a comment"),
    family: Optional[str] = typer.Option(None, "--family", help="Only rows of this family"),
    csv_output: bool = typer.Option(False, "--csv", help="Summary rows as CSV"),
    json_output: bool = typer.Option(False, "--json", help="Summary rows as JSON"),
    skip_invalid: bool = typer.Option(False, "--skip-invalid", help="Warn about bad lines instead of failing"),
):
    """Summary table of the known cohomology rings for a list of manifolds."""
    _single_format(json_output, csv_output)
    if not file.exists():
        raise InvalidInputError(f"file {file} does not exist")
    selected = None
    if family is not None:
        try:
            selected = Family(family.strip().upper())
        except ValueError:
            raise InvalidInputError(f"unknown family {family!r}") from None

    rows: List[SummaryRow] = []
    with open(file, 'r', encoding='utf-8') as f:
        for number, raw in enumerate(f, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                params = parse_params(text, line=number)
            except ParameterParseError as e:
                if not skip_invalid:
                    raise
                logger.warning("skipping %s", e.message)
                continue
            if selected is not None and params.family is not selected:
                continue
            rep = report(params)
            if not rep.valid and skip_invalid:
                logger.warning("skipping line %d: %s", number, headline(rep))
                continue
            rows.append(summary_row(rep))

    if json_output:
        typer.echo(json.dumps([row.to_dict() for row in rows], ensure_ascii=False, indent=2))
    elif csv_output:
        typer.echo(_rows_csv(rows), nl=False)
    else:
        console.print(_rows_table(rows, "Known integral cohomology rings"))


if __name__ == "__main__":
    app()
