import logging

import typer

from app.config import OutputFormat
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service
from app.utils.output import emit, internal_error, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


@router.command("stats", context_settings={"ignore_unknown_options": True})
def stats(
    window: str = typer.Argument(..., help='Window notation, e.g. "5 1[1] 3 4[2] 2[1] 6[3]" or "-2 1 3"'),
    r: int = typer.Option(..., "--r", help="Number of colors"),
    output: OutputFormat = typer.Option(OutputFormat.JSON, "--output"),
):
    """Every statistic of one colored permutation"""
    try:
        p = permutation_service.parse_window(window, r)
        bundle = statistics_service.stat_bundle(p)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("stats", e)
    emit(bundle, output, title=bundle.window)
