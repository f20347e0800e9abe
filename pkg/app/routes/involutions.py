import logging
from pathlib import Path
from typing import Optional

import typer

from app.models.errors import DomainError
from app.models.involution import InvolutionTag
from app.models.permutation import FamilySpec, WindowStyle
from app.services.involution_service import involution_service
from app.services.permutation_service import permutation_service
from app.utils.output import emit, emit_lines, internal_error, read_restriction, usage_error

router = typer.Typer()
logger = logging.getLogger(__name__)


def _style(r: int) -> WindowStyle:
    return WindowStyle.SIGNED if r == 2 else WindowStyle.BRACKETS


def domain_spec(tag: InvolutionTag, n: int, r: Optional[int], restriction_file: Optional[Path] = None) -> FamilySpec:
    """The family a tag acts on at size n"""
    if tag == InvolutionTag.PHI:
        colors = 2 if r is None else r
        restriction = read_restriction(restriction_file, colors)
        if restriction is not None:
            if restriction.n != n:
                raise DomainError(f"restriction has length {restriction.n}, expected {n}")
            return FamilySpec.restricted(restriction)
        return FamilySpec.colored(colors, n)

    if r not in (None, 2):
        raise DomainError(f"{tag.value} acts on signed permutations; got --r {r}")
    if restriction_file is not None:
        raise DomainError("--restriction only applies to phi")
    if tag in (InvolutionTag.PSI_B, InvolutionTag.THETA):
        return FamilySpec.hyperoctahedral(n)
    return FamilySpec.even_signed(n)


@router.command("involute", context_settings={"ignore_unknown_options": True})
def involute(
    window: str = typer.Argument(..., help="Window notation of the element"),
    tag: InvolutionTag = typer.Option(..., "--tag"),
    r: int = typer.Option(2, "--r", help="Number of colors (phi only; the others are signed)"),
):
    """Apply one sign-reversing involution"""
    try:
        p = permutation_service.parse_window(window, r)
        image = involution_service.involute(tag, p)
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("involute", e)

    style = _style(r)
    emit(
        {
            "tag": tag.value,
            "input": permutation_service.format_window(p, style),
            "image": permutation_service.format_window(image, style),
            "fixed": image == p,
        }
    )


@router.command("fixed-points")
def fixed_points(
    tag: InvolutionTag = typer.Option(..., "--tag"),
    n: int = typer.Option(..., "--n", min=0, help="Size of the permutations"),
    r: Optional[int] = typer.Option(None, "--r", help="Number of colors (phi only)"),
    restriction: Optional[Path] = typer.Option(None, "--restriction", help="Restriction tuple for phi"),
):
    """Fixed points of an involution, one window per line"""
    try:
        spec = domain_spec(tag, n, r, restriction)
        style = _style(spec.r)
        emit_lines(permutation_service.format_window(p, style) for p in involution_service.fixed_points(tag, spec))
    except ValueError as e:
        usage_error(e)
    except Exception as e:
        internal_error("fixed-points", e)
