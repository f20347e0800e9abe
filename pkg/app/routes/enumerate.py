import itertools
import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer

from app.models.errors import DomainError
from app.models.permutation import FamilySpec, WindowStyle
from app.services.permutation_service import permutation_service
from app.utils.output import emit_lines, internal_error, read_restriction, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


class FamilyChoice(str, Enum):
    SYM = "sym"
    B = "b"
    D = "d"
    G = "g"


def family_spec(family: FamilyChoice, r: Optional[int], n: int, restriction_file: Optional[Path] = None) -> FamilySpec:
    """Resolve the CLI family flags to a FamilySpec"""
    if family == FamilyChoice.SYM:
        if r not in (None, 1):
            raise DomainError(f"sym is uncolored; got --r {r}")
        spec = FamilySpec.sym(n)
    elif family in (FamilyChoice.B, FamilyChoice.D):
        if r not in (None, 2):
            raise DomainError(f"{family.value} is signed (r=2); got --r {r}")
        spec = FamilySpec.hyperoctahedral(n) if family == FamilyChoice.B else FamilySpec.even_signed(n)
    else:
        if r is None:
            raise DomainError("family g needs --r")
        spec = FamilySpec.colored(r, n)

    restriction = read_restriction(restriction_file, spec.r)
    if restriction is not None:
        if family != FamilyChoice.G and family != FamilyChoice.B:
            raise DomainError(f"a restriction applies to g or b, not {family.value}")
        if restriction.n != n:
            raise DomainError(f"restriction has length {restriction.n}, expected {n}")
        spec = FamilySpec.restricted(restriction)
    return spec


@router.command("enumerate")
def enumerate_family(
    family: FamilyChoice = typer.Option(..., "--family"),
    n: int = typer.Option(..., "--n", min=0),
    r: Optional[int] = typer.Option(None, "--r", help="Number of colors (family g)"),
    restriction: Optional[Path] = typer.Option(None, "--restriction", help="JSON array of allowed colors per position"),
    limit: Optional[int] = typer.Option(None, "--limit", min=0),
):
    """Window strings of a family, one per line, in lexicographic order"""
    try:
        spec = family_spec(family, r, n, restriction)
        style = WindowStyle.SIGNED if spec.r == 2 else WindowStyle.BRACKETS
        elements = itertools.islice(permutation_service.enumerate_family(spec), limit)
        emit_lines(permutation_service.format_window(p, style) for p in elements)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("enumerate", e)
