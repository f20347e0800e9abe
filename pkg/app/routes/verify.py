import logging
from pathlib import Path
from typing import Optional

import typer

from app.config import CliConfig, OutputFormat
from app.models.errors import SchemaError
from app.models.identity import IdentityParams
from app.services.identity_registry import SERIES, identity_registry
from app.utils.output import emit, finish, internal_error, read_restriction, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


def build_params(
    identity_id: str,
    r: Optional[int],
    n: Optional[int],
    b: Optional[int],
    restriction_file: Optional[Path],
    max_degree: Optional[int],
) -> IdentityParams:
    """Assemble IdentityParams from flags; series ids fall back to the configured K"""
    entry = identity_registry.entry(identity_id)
    restriction = None
    if restriction_file is not None:
        colors = 2 if entry.signed else r
        if colors is None:
            raise SchemaError(f"{identity_id} needs --r to read a restriction")
        restriction = read_restriction(restriction_file, colors)
    if max_degree is None and entry.kind == SERIES:
        max_degree = CliConfig.build().max_degree
    return IdentityParams(r=r, n=n, b=b, restriction=restriction, max_degree=max_degree)


@router.command("verify")
def verify(
    identity_id: str = typer.Option(..., "--id", help="Identity id, see `identities`"),
    r: Optional[int] = typer.Option(None, "--r", min=1),
    n: Optional[int] = typer.Option(None, "--n", min=0),
    b: Optional[int] = typer.Option(None, "--b", min=0),
    restriction: Optional[Path] = typer.Option(None, "--restriction", help="JSON restriction tuple"),
    max_degree: Optional[int] = typer.Option(None, "--max-degree", min=0),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes (default SIGNBAL_JOBS)"),
    timings: bool = typer.Option(False, "--timings", help="Report elapsed_ms"),
    output: OutputFormat = typer.Option(OutputFormat.JSON, "--output"),
):
    """Verify one identity by exhaustive enumeration; exit 1 if the sides differ"""
    try:
        config = CliConfig.build(jobs=jobs, output=output, timings=timings)
        params = build_params(identity_id, r, n, b, restriction, max_degree)
        report = identity_registry.verify(identity_id, params, jobs=config.jobs, timings=config.timings)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("verify", e)

    emit(report, config.output, title=report.id)
    finish(report.equal)


@router.command("identities")
def identities(output: OutputFormat = typer.Option(OutputFormat.JSON, "--output")):
    """List every identity id with its parameters"""
    emit(identity_registry.list_identities(), output, title="identities")
