# main.py - Sign-Balance Workbench command line

import logging
import sys

import typer
from dotenv import load_dotenv

# Import all routers
from app.routes.enumerate import router as enumerate_router
from app.routes.involutions import router as involutions_router
from app.routes.selftest import router as selftest_router
from app.routes.series import router as series_router
from app.routes.stats import router as stats_router
from app.routes.verify import router as verify_router
from app.config import settings

# Load environment variables
load_dotenv()

# Configure logging; stdout is reserved for JSON
logging.basicConfig(
    level=settings.log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

app = typer.Typer(
    name="signbal",
    help="Exact enumeration of signed Euler-Mahonian identities over S_n, B_n, D_n and G(r,1,n)",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

# Include routers
app.add_typer(stats_router)
app.add_typer(enumerate_router)
app.add_typer(involutions_router)
app.add_typer(verify_router)
app.add_typer(series_router)
app.add_typer(selftest_router)

logger.debug(f"Sign-Balance Workbench ready ({settings.environment})")

if __name__ == "__main__":
    app()
