"""Stdout rendering and exit-status translation shared by the CLI routes."""
import logging
from pathlib import Path
from typing import Iterable, NoReturn, Optional, Union

import orjson
import typer
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from app.config import OutputFormat
from app.models.errors import InvariantBreach, RestrictionError, one_line
from app.models.permutation import RestrictionTuple
from app.services.permutation_service import permutation_service

logger = logging.getLogger(__name__)

EXIT_UNEQUAL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

Payload = Union[BaseModel, dict, list]


def to_json_bytes(payload: Payload) -> bytes:
    """Canonical JSON: sorted keys, two-space indent, trailing newline"""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        payload = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
    return orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)


def emit(payload: Payload, output: OutputFormat = OutputFormat.JSON, title: Optional[str] = None):
    if output == OutputFormat.JSON:
        typer.echo(to_json_bytes(payload).decode(), nl=False)
        return
    data = orjson.loads(to_json_bytes(payload))
    rows = data if isinstance(data, list) else [data]
    console = Console()
    for row in rows:
        table = Table(title=title, show_header=True)
        table.add_column("field", style="bold")
        table.add_column("value")
        for key in sorted(row):
            value = row[key]
            if key in ("lhs", "rhs") and isinstance(value, dict):
                continue
            text = value if isinstance(value, str) else orjson.dumps(value).decode()
            table.add_row(key, text)
        console.print(table)


def emit_lines(lines: Iterable[str]):
    for line in lines:
        typer.echo(line)


def read_restriction(path: Optional[Path], r: int) -> Optional[RestrictionTuple]:
    if path is None:
        return None
    try:
        data = orjson.loads(path.read_bytes())
    except OSError as e:
        raise RestrictionError(f"cannot read {path}: {e.strerror}") from e
    except orjson.JSONDecodeError as e:
        raise RestrictionError(f"{path} is not valid JSON: {e}") from e
    return permutation_service.parse_restriction(data, r)


def usage_error(e: Exception) -> NoReturn:
    typer.echo(f"❌ {one_line(e)}", err=True)
    raise typer.Exit(EXIT_USAGE)


def internal_error(action: str, e: Exception) -> NoReturn:
    if isinstance(e, InvariantBreach):
        logger.error(f"❌ Invariant breach in {action}: {e}")
    else:
        logger.error(f"Error in {action}: {e}")
    typer.echo(f"❌ internal error in {action}: {e}", err=True)
    raise typer.Exit(EXIT_INTERNAL)


def finish(ok: bool):
    if not ok:
        raise typer.Exit(EXIT_UNEQUAL)
