import logging
from typing import Optional

import typer

from app.config import CliConfig, OutputFormat
from app.services.selftest_service import SelftestLevel, selftest_service
from app.utils.output import emit, finish, internal_error, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


@router.command("selftest")
def selftest(
    level: SelftestLevel = typer.Option(SelftestLevel.QUICK, "--level"),
    jobs: Optional[int] = typer.Option(None, "--jobs"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for the randomized suites"),
    output: OutputFormat = typer.Option(OutputFormat.JSON, "--output"),
):
    """Run every identity and law check at the level's sizes; exit 1 on any failure"""
    try:
        config = CliConfig.build(jobs=jobs, output=output, seed=seed)
        summary = selftest_service.run(level, jobs=config.jobs, seed=config.seed, max_degree=config.max_degree)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("selftest", e)

    if config.output == OutputFormat.TABLE:
        emit(summary.entries, config.output, title=f"selftest {level.value}")
    else:
        emit(summary, config.output)
    finish(summary.passed)
