import pytest

from app.models.identity import IdentityParams
from app.models.involution import InvolutionTag
from app.models.permutation import FamilyKind, FamilySpec
from app.services.involution_service import involution_service
from app.services.law_checks import MAX_FAILURES, law_checks


@pytest.mark.parametrize("kind, r, n", [(FamilyKind.SYM, 1, 4), (FamilyKind.B, 2, 3), (FamilyKind.D, 2, 4), (FamilyKind.G, 3, 2)])
def test_bfs_oracle(kind, r, n):
    report = law_checks.bfs_oracle(kind, r, n)
    assert report.passed, report.failures


@pytest.mark.parametrize("kind, r, n", [(FamilyKind.SYM, 1, 4), (FamilyKind.B, 2, 3), (FamilyKind.D, 2, 4), (FamilyKind.G, 4, 3)])
def test_generator_relations(kind, r, n):
    report = law_checks.generator_relations(kind, r, n)
    assert report.passed, report.failures


def test_orders_and_congruences():
    assert law_checks.natural_matches_order_l(4, 3).passed
    assert law_checks.flag_congruences(4, 3).passed
    assert law_checks.d_last_sign_invariance(5).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tilde_sets_partition(n):
    report = law_checks.tilde_partition(n)
    assert report.passed, report.failures
    assert report.checked == 2 ** (n + 1) * [1, 2, 6, 24][n]


@pytest.mark.parametrize(
    "refined_id, params",
    [
        ("G-main-even-refined", IdentityParams(r=2, n=1, b=1)),
        ("G-main-odd-refined", IdentityParams(r=3, n=2, b=2)),
        ("B-EM-length-refined", IdentityParams(n=2)),
        ("B-neg-flip-refined", IdentityParams(n=2)),
        ("D-EM-even-refined", IdentityParams(n=2)),
    ],
)
def test_specialization_coherence(refined_id, params):
    report = law_checks.specialization_coherence(refined_id, params)
    assert report.passed, report.failures


def test_substitution_coherence():
    assert law_checks.substitution_coherence(2).passed


def test_determinism_across_workers():
    report = law_checks.determinism("A-even", IdentityParams(n=2), jobs=2)
    assert report.passed
    assert report.checked == 3


def test_failures_are_capped(mocker):
    mocker.patch.object(involution_service, "fixed_points_by_filter", return_value=iter([]))
    report = law_checks.fixed_point_agreement(InvolutionTag.PSI_B, FamilySpec.hyperoctahedral(3))
    assert not report.passed
    assert len(report.failures) == MAX_FAILURES
    assert report.checked > MAX_FAILURES
