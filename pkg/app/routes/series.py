import logging
from typing import Optional

import typer

from app.config import CliConfig, OutputFormat
from app.services.identity_registry import identity_registry
from app.utils.output import emit, finish, internal_error, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


@router.command("series")
def series(
    identity_id: str = typer.Option(..., "--id", help="lin-posi2, lin-nega2, lin-nepo or brenti-series"),
    n: int = typer.Option(..., "--n", min=0),
    max_degree: Optional[int] = typer.Option(None, "--max-degree", min=0, help="Cap K (default SIGNBAL_MAX_DEGREE)"),
    jobs: Optional[int] = typer.Option(None, "--jobs"),
    output: OutputFormat = typer.Option(OutputFormat.JSON, "--output"),
):
    """Compare both sides of a series identity through t^K"""
    try:
        config = CliConfig.build(jobs=jobs, output=output, max_degree=max_degree)
        report = identity_registry.series(identity_id, n, config.max_degree, jobs=config.jobs)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("series", e)

    emit(report, config.output, title=report.id)
    finish(report.equal)
