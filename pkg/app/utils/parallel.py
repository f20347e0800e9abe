import logging
from typing import Callable, Iterable, Optional, Tuple

from joblib import Parallel, delayed

from app.models.permutation import ColoredPermutation, FamilySpec
from app.services.algebra.polynomial import Exponent, Poly, PolyAccumulator
from app.services.permutation_service import permutation_service

logger = logging.getLogger(__name__)

# summand(p) -> (exponent, ω-exponent, ±1), or None to skip p
Summand = Callable[[ColoredPermutation], Optional[Tuple[Exponent, int, int]]]

CHUNKS_PER_JOB = 4


def _accumulate(elements: Iterable[ColoredPermutation], summand: Summand, r: int, arity: int) -> PolyAccumulator:
    acc = PolyAccumulator(r, arity)
    for p in elements:
        term = summand(p)
        if term is not None:
            acc.add(*term)
        else:
            acc.count += 1
    return acc


def _accumulate_chunk(spec: FamilySpec, summand: Summand, r: int, arity: int, index: int, parts: int) -> PolyAccumulator:
    return _accumulate(permutation_service.enumerate_family(spec, chunk=(index, parts)), summand, r, arity)


def family_sum(spec: FamilySpec, summand: Summand, r: int, arity: int, jobs: int = 1) -> Tuple[Poly, int]:
    """Σ over the family of summand(p), as (polynomial, elements visited).

    The family is cut into disjoint rank chunks; partial sums merge by
    addition, so the result does not depend on `jobs`.
    """
    if jobs <= 1:
        total = _accumulate_chunk(spec, summand, r, arity, 0, 1)
    else:
        parts = jobs * CHUNKS_PER_JOB
        partials = Parallel(n_jobs=jobs)(
            delayed(_accumulate_chunk)(spec, summand, r, arity, i, parts) for i in range(parts)
        )
        total = PolyAccumulator(r, arity)
        for partial in partials:
            total.merge(partial)
    logger.debug(f"Summed {total.count} elements of {spec.kind.value} r={spec.r} n={spec.n} (jobs={jobs})")
    return total.to_poly(), total.count


def stream_sum(elements: Iterable[ColoredPermutation], summand: Summand, r: int, arity: int) -> Tuple[Poly, int]:
    """Sequential sum over an explicit stream (fixed points, small families)"""
    total = _accumulate(elements, summand, r, arity)
    return total.to_poly(), total.count
