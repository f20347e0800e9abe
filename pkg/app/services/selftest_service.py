"""Runs the catalog and the law checks at quick or full sizes.

Failures, including unexpected exceptions, become failed entries in the
summary; nothing here raises for a broken identity.
"""
import logging
import random
import time
from enum import Enum
from typing import Callable, Iterator, NamedTuple

from app.models.characters import CharacterForm
from app.models.identity import IdentityParams, IdentityReport, LawReport, SelftestEntry, SelftestSummary
from app.models.involution import HatVariant, InvolutionTag
from app.models.permutation import FamilyKind, FamilySpec
from app.services.identity_registry import REFINED, SERIES, identity_registry
from app.services.law_checks import law_checks
from app.services.permutation_service import permutation_service

logger = logging.getLogger(__name__)

REFINED_SAMPLES = 25

# n values run by the quick level; other identities run at their smallest params
QUICK_SIZES = {
    "B-odd-absinv": (1, 2, 3),
    "B-odd-length": (1, 2, 3),
    "D-odd-length": (1, 2, 3),
    "B-GF-length": tuple(range(1, 8)),
    "B-GF-absinv": tuple(range(1, 8)),
}


class SelftestLevel(str, Enum):
    QUICK = "quick"
    FULL = "full"


class _Planned(NamedTuple):
    kind: str
    name: str
    params: dict
    run: Callable[[], object]


def _identity(identity_id: str, params: IdentityParams, jobs: int) -> _Planned:
    return _Planned(
        "identity", identity_id, params.to_json(), lambda: identity_registry.verify(identity_id, params, jobs=jobs)
    )


def _law(name: str, params: dict, run: Callable[[], LawReport]) -> _Planned:
    return _Planned("law", name, params, run)


class SelftestService:
    def run(self, level: SelftestLevel, jobs: int = 1, seed: int = 20240229, max_degree: int = 8) -> SelftestSummary:
        plan = list(self.plan(level, jobs, seed, max_degree))
        logger.info(f"Selftest {level.value}: {len(plan)} checks (jobs={jobs}, seed={seed})")
        entries = [self._execute(item) for item in plan]
        failed = [f"{e.name} {e.params}" for e in entries if not e.passed]
        if failed:
            logger.warning(f"❌ Selftest {level.value}: {len(failed)} of {len(entries)} checks failed")
        else:
            logger.info(f"✅ Selftest {level.value}: all {len(entries)} checks passed")
        return SelftestSummary(
            level=level.value, passed=not failed, total=len(entries), failed=failed, entries=entries
        )

    def _execute(self, item: _Planned) -> SelftestEntry:
        started = time.perf_counter()
        try:
            outcome = item.run()
        except Exception as e:
            logger.error(f"❌ {item.kind} {item.name} {item.params} raised: {e}")
            return SelftestEntry(
                kind=item.kind,
                name=item.name,
                params=item.params,
                passed=False,
                checked=0,
                elapsed_ms=self._since(started),
                detail=f"{type(e).__name__}: {e}",
            )
        if isinstance(outcome, IdentityReport):
            passed, checked = outcome.equal, outcome.elements
            detail = None if passed else f"lhs {outcome.lhs_text} != rhs {outcome.rhs_text}"
        else:
            passed, checked = outcome.passed, outcome.checked
            detail = None if passed else "; ".join(outcome.failures)
        return SelftestEntry(
            kind=item.kind,
            name=item.name,
            params=item.params,
            passed=passed,
            checked=checked,
            elapsed_ms=self._since(started),
            detail=detail,
        )

    @staticmethod
    def _since(started: float) -> float:
        return round((time.perf_counter() - started) * 1000, 3)

    def plan(self, level: SelftestLevel, jobs: int, seed: int, max_degree: int) -> Iterator[_Planned]:
        if level == SelftestLevel.QUICK:
            yield from self._quick_identities(jobs, max_degree)
            yield from self._quick_laws(jobs, seed)
        else:
            yield from self._full_identities(jobs, seed, max_degree)
            yield from self._full_laws(jobs, seed)

    # Quick

    def _quick_identities(self, jobs: int, max_degree: int) -> Iterator[_Planned]:
        for identity_id in identity_registry.ids():
            if identity_id in QUICK_SIZES:
                for n in QUICK_SIZES[identity_id]:
                    yield _identity(identity_id, IdentityParams(n=n), jobs)
                continue
            if identity_registry.entry(identity_id).kind == SERIES:
                params = IdentityParams(n=1, max_degree=max_degree)
            else:
                params = identity_registry.smallest_params(identity_id)
            yield _identity(identity_id, params, jobs)

    def _quick_laws(self, jobs: int, seed: int) -> Iterator[_Planned]:
        yield from self._involution_laws(
            [
                (InvolutionTag.PHI, FamilySpec.colored(2, 4)),
                (InvolutionTag.PHI, FamilySpec.colored(3, 2)),
                (InvolutionTag.PHI, FamilySpec.hyperoctahedral(3)),
                (InvolutionTag.ETA, FamilySpec.even_signed(4)),
                (InvolutionTag.IOTA, FamilySpec.even_signed(3)),
                (InvolutionTag.PSI_B, FamilySpec.hyperoctahedral(4)),
                (InvolutionTag.PSI_D, FamilySpec.even_signed(4)),
                (InvolutionTag.THETA, FamilySpec.hyperoctahedral(4)),
            ]
        )
        yield from self._hat_laws([(HatVariant.G_EVEN, 2, 2), (HatVariant.G_EVEN, 3, 1)], n_max=2, r_default=2, odd_n=1)
        for tag in (InvolutionTag.PSI_B, InvolutionTag.PSI_D):
            for n in (3, 4):
                yield _law("straighten-laws", {"tag": tag.value, "n": n}, lambda t=tag, n=n: law_checks.straighten_laws(t, n))
        for form in CharacterForm:
            yield _law(
                "character-multiplicativity",
                {"r": 2, "n": 2, "form": form.value},
                lambda f=form: law_checks.character_multiplicativity(2, 2, f),
            )
        yield _law(
            "character-multiplicativity-random",
            {"r": 4, "n": 4, "pairs": 200, "seed": seed},
            lambda: law_checks.character_multiplicativity_random(4, 4, 200, seed),
        )
        yield _law("signed-character-table", {"n": 3}, lambda: law_checks.signed_character_table(3))
        yield _law("character-value-sets", {"r": 3, "n": 2}, lambda: law_checks.character_value_sets(3, 2))
        yield from self._core_laws([(FamilyKind.B, 2, 3), (FamilyKind.D, 2, 3), (FamilyKind.G, 3, 2)])
        yield _law("natural-vs-order-l", {"r": 3, "n": 3}, lambda: law_checks.natural_matches_order_l(3, 3))
        yield _law("flag-congruences", {"r": 3, "n": 3}, lambda: law_checks.flag_congruences(3, 3))
        yield _law("d-last-sign", {"n": 4}, lambda: law_checks.d_last_sign_invariance(4))
        yield _law("tilde-partition", {"n": 2}, lambda: law_checks.tilde_partition(2))
        yield _law("barred-counts", {"n": 2, "k": 3}, lambda: law_checks.barred_counts(2, 3))
        yield _law("min-barred-weight", {"n": 4}, lambda: law_checks.min_barred_weight(4))
        yield from self._coherence(jobs, substitution_sizes=(2,))

    # Full

    def _full_identities(self, jobs: int, seed: int, max_degree: int) -> Iterator[_Planned]:
        rng = random.Random(seed)

        def plain(identity_id, sizes, **fixed):
            for n in sizes:
                yield _identity(identity_id, IdentityParams(n=n, **fixed), jobs)

        yield from plain("macmahon", range(1, 8))
        yield from plain("A-even", range(1, 6))
        yield from plain("A-odd", range(1, 5))
        yield from plain("A-EM", range(1, 5))
        yield from plain("gessel-simion", range(1, 9))

        g_even_sizes = [(1, range(1, 5)), (2, range(1, 5)), (3, range(1, 4)), (4, range(1, 4))]
        for r, sizes in g_even_sizes:
            for b in range(r):
                yield from plain("G-main-even", sizes, r=r, b=b)
        for r, n in ((2, 2), (3, 2), (4, 2), (2, 3)):
            for i in range(REFINED_SAMPLES):
                h = permutation_service.random_restriction(r, 2 * n, rng)
                yield _identity("G-main-even-refined", IdentityParams(r=r, n=n, b=i % r, restriction=h), jobs)
        for r in range(1, 7):
            for n in range(1, 5):
                s = permutation_service.random_restriction(r, n, rng)
                for b in range(r):
                    yield _identity("G-main-odd", IdentityParams(r=r, n=n, b=b), jobs)
                    yield _identity("G-main-odd-refined", IdentityParams(r=r, n=n, b=b, restriction=s), jobs)

        for identity_id in ("B-EM-length", "B-EM-absinv", "B-signedM"):
            yield from plain(identity_id, range(1, 5))
        yield from plain("B-neg-flip", range(1, 7))
        for identity_id in ("B-EM-length-refined", "B-EM-absinv-refined"):
            for n in (2, 3):
                for _ in range(REFINED_SAMPLES):
                    h = permutation_service.random_restriction(2, 2 * n, rng)
                    yield _identity(identity_id, IdentityParams(n=n, restriction=h), jobs)
        for n in (4, 6):
            for _ in range(REFINED_SAMPLES):
                s = permutation_service.random_restriction(2, n, rng)
                yield _identity("B-neg-flip-refined", IdentityParams(n=n, restriction=s), jobs)

        yield from plain("B-odd-absinv", range(1, 5))
        for n in (1, 2):
            for _ in range(REFINED_SAMPLES):
                h = permutation_service.random_restriction(2, 2 * n + 1, rng)
                yield _identity("B-odd-absinv-refined", IdentityParams(n=n, restriction=h), jobs)
        yield from plain("B-odd-length", range(1, 5))
        yield from plain("lemma-lin", range(1, 7))
        yield from plain("eq-ch", range(1, 7))
        for identity_id in identity_registry.ids(SERIES):
            yield from plain(identity_id, range(1, 6), max_degree=max_degree)

        yield from plain("D-EM-even", range(1, 5))
        yield from plain("D-EM-even-refined", range(1, 5))
        yield from plain("D-odd-length", range(1, 5))
        yield from plain("B-GF-length", range(1, 9))
        yield from plain("B-GF-absinv", range(1, 9))
        yield from plain("D-GF", range(1, 8))

        for r in range(1, 4):
            for b in range(r):
                yield from plain("cancel-phi", (1, 2), r=r, b=b)
        for identity_id in ("cancel-B-absinv", "cancel-B-length", "cancel-D-even", "cancel-D-odd"):
            yield from plain(identity_id, range(1, 4))
        for identity_id in ("cancel-theta-neg", "cancel-theta-length", "cancel-psi-b", "cancel-psi-d"):
            yield from plain(identity_id, range(1, 7))

    def _full_laws(self, jobs: int, seed: int) -> Iterator[_Planned]:
        cases = []
        for r in range(1, 4):
            for m in (2, 4):
                cases.append((InvolutionTag.PHI, FamilySpec.colored(r, m)))
        for m in (1, 3, 5, 7):
            cases.append((InvolutionTag.PHI, FamilySpec.hyperoctahedral(m)))
        for m in (2, 4, 6):
            cases.append((InvolutionTag.ETA, FamilySpec.even_signed(m)))
        for m in (1, 3, 5, 7):
            cases.append((InvolutionTag.IOTA, FamilySpec.even_signed(m)))
        for m in range(1, 7):
            cases.append((InvolutionTag.PSI_B, FamilySpec.hyperoctahedral(m)))
            cases.append((InvolutionTag.PSI_D, FamilySpec.even_signed(m)))
            cases.append((InvolutionTag.THETA, FamilySpec.hyperoctahedral(m)))
        yield from self._involution_laws(cases)

        yield from self._hat_laws(
            [(HatVariant.G_EVEN, r, n) for r in range(1, 4) for n in range(1, 4)], n_max=3, r_default=2, odd_n=3
        )
        for tag in (InvolutionTag.PSI_B, InvolutionTag.PSI_D):
            for n in range(1, 7):
                yield _law("straighten-laws", {"tag": tag.value, "n": n}, lambda t=tag, n=n: law_checks.straighten_laws(t, n))

        for form in CharacterForm:
            for r in range(1, 4):
                for n in range(1, 4):
                    yield _law(
                        "character-multiplicativity",
                        {"r": r, "n": n, "form": form.value},
                        lambda r=r, n=n, f=form: law_checks.character_multiplicativity(r, n, f),
                    )
            for r in range(1, 7):
                yield _law(
                    "character-multiplicativity-random",
                    {"r": r, "n": 5, "form": form.value},
                    lambda r=r, f=form: law_checks.character_multiplicativity_random(r, 5, 10_000, seed + r, f),
                )
        for n in range(1, 5):
            yield _law("signed-character-table", {"n": n}, lambda n=n: law_checks.signed_character_table(n))
        for r in range(1, 5):
            for n in range(1, 4):
                yield _law(
                    "character-value-sets", {"r": r, "n": n}, lambda r=r, n=n: law_checks.character_value_sets(r, n)
                )

        core = [(FamilyKind.B, 2, n) for n in range(1, 5)] + [(FamilyKind.D, 2, n) for n in range(2, 5)]
        core += [(FamilyKind.G, r, n) for r in range(1, 4) for n in range(1, 4)]
        yield from self._core_laws(core)
        for n in range(1, 4):
            yield _law(
                "generator-relations", {"family": "g", "r": 4, "n": n},
                lambda n=n: law_checks.generator_relations(FamilyKind.G, 4, n),
            )
        for n in range(1, 6):
            yield _law("natural-vs-order-l", {"r": 2, "n": n}, lambda n=n: law_checks.natural_matches_order_l(2, n))
            yield _law("flag-congruences", {"r": 3, "n": n}, lambda n=n: law_checks.flag_congruences(3, n))
        for n in range(1, 7):
            yield _law("d-last-sign", {"n": n}, lambda n=n: law_checks.d_last_sign_invariance(n))
            yield _law("min-barred-weight", {"n": n}, lambda n=n: law_checks.min_barred_weight(n))
        for n in range(1, 4):
            yield _law("tilde-partition", {"n": n}, lambda n=n: law_checks.tilde_partition(n))
            yield _law("barred-counts", {"n": n, "k": 6}, lambda n=n: law_checks.barred_counts(n, 6))
        yield from self._coherence(jobs, substitution_sizes=(1, 2, 3))
        for identity_id, params in (
            ("G-main-even", IdentityParams(r=3, n=2, b=1)),
            ("B-odd-absinv", IdentityParams(n=2)),
            ("D-EM-even-refined", IdentityParams(n=2)),
        ):
            yield _law(
                "determinism", {"id": identity_id, **params.to_json()},
                lambda i=identity_id, p=params: law_checks.determinism(i, p, jobs=4),
            )

    # Shared groups

    def _involution_laws(self, cases) -> Iterator[_Planned]:
        for tag, spec in cases:
            params = {"tag": tag.value, "family": spec.kind.value, "r": spec.r, "n": spec.n}
            yield _law("involution-laws", params, lambda t=tag, s=spec: law_checks.involution_laws(t, s))
            yield _law("fixed-points", params, lambda t=tag, s=spec: law_checks.fixed_point_agreement(t, s))

    def _hat_laws(self, g_cases, n_max: int, r_default: int, odd_n: int) -> Iterator[_Planned]:
        for variant, r, n in g_cases:
            yield _law("hat-laws", {"variant": variant.value, "r": r, "n": n}, lambda v=variant, r=r, n=n: law_checks.hat_laws(v, n, r))
        for variant, sizes in (
            (HatVariant.B_ODD, range(1, odd_n + 1)),
            (HatVariant.D_EVEN, range(1, n_max + 1)),
            (HatVariant.D_ODD, range(1, odd_n + 1)),
        ):
            for n in sizes:
                yield _law(
                    "hat-laws",
                    {"variant": variant.value, "r": r_default, "n": n},
                    lambda v=variant, n=n: law_checks.hat_laws(v, n, r_default),
                )

    def _core_laws(self, cases) -> Iterator[_Planned]:
        for kind, r, n in cases:
            params = {"family": kind.value, "r": r, "n": n}
            yield _law("bfs-oracle", params, lambda k=kind, r=r, n=n: law_checks.bfs_oracle(k, r, n))
            yield _law("generator-relations", params, lambda k=kind, r=r, n=n: law_checks.generator_relations(k, r, n))

    def _coherence(self, jobs: int, substitution_sizes) -> Iterator[_Planned]:
        for identity_id in identity_registry.ids(REFINED):
            params = identity_registry.smallest_params(identity_id)
            if params.r is not None and params.r < 2:
                params = params.model_copy(update={"r": 2, "b": 1})
            yield _law(
                "specialization-coherence",
                {"id": identity_id, **params.to_json()},
                lambda i=identity_id, p=params: law_checks.specialization_coherence(i, p),
            )
        for n in substitution_sizes:
            yield _law("substitution-coherence", {"n": n}, lambda n=n: law_checks.substitution_coherence(n))
        if jobs > 1:
            params = IdentityParams(n=2)
            yield _law(
                "determinism", {"id": "B-EM-length", "n": 2}, lambda: law_checks.determinism("B-EM-length", params, jobs)
            )


selftest_service = SelftestService()
