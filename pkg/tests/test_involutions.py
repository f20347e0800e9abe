import pytest

from app.models.errors import DomainError
from app.models.involution import InvolutionTag
from app.models.permutation import FamilySpec, RestrictionTuple
from app.services.involution_service import involution_service
from app.services.law_checks import law_checks
from app.services.permutation_service import permutation_service
from tests.conftest import signed_words, window


def image(tag, text, r=2):
    return permutation_service.format_window(involution_service.involute(tag, window(text, r)))


class TestPhi:
    def test_swaps_first_adjacent_pair(self):
        assert image(InvolutionTag.PHI, "5 1[1] 3 4[2] 2[1] 6[3]", r=4) == "5 2[1] 3 4[2] 1[1] 6[3]"

    def test_skips_pairs_that_are_not_separated(self):
        assert image(InvolutionTag.PHI, "5 2[1] 1[1] 6[3] 4 3[2]", r=4) == "5 2[1] 1[1] 6[3] 3 4[2]"

    def test_fixed_point(self):
        p = window("5 6 2[3] 1[3] 4[1] 3[1]", r=4)
        assert involution_service.is_fixed(InvolutionTag.PHI, p)

    def test_odd_size_needs_signs(self):
        with pytest.raises(DomainError):
            involution_service.involute(InvolutionTag.PHI, window("1 2 3", r=3))


class TestSignedInvolutions:
    @pytest.mark.parametrize(
        "tag, before, after",
        [
            (InvolutionTag.ETA, "2 1 -5 6 3 -4", "2 1 -6 5 3 -4"),
            (InvolutionTag.ETA, "2 1 -3 -4 -5 -6", "2 1 -3 -4 -6 -5"),
            (InvolutionTag.IOTA, "5 8 -7 -1 -2 9 6 3 -4", "6 8 -7 -1 -2 9 5 3 -4"),
            (InvolutionTag.IOTA, "5 8 -7 -1 -2 9 6 -3 4", "5 8 -7 -1 -2 9 6 -4 3"),
            (InvolutionTag.PSI_B, "-2 1 3 -5 6 4", "-1 2 3 -5 6 4"),
            (InvolutionTag.PSI_B, "-1 -2 5 -3 6 -4", "-1 -2 5 -4 6 -3"),
            (InvolutionTag.PSI_B, "-2 -1 6 3 4 5", "-2 -1 6 -4 -3 5"),
            (InvolutionTag.THETA, "-1 2 5 -4 -3", "-1 2 5 -4 3"),
        ],
    )
    def test_worked_examples(self, tag, before, after):
        p = window(before)
        q = involution_service.involute(tag, p)
        assert q.signed == window(after).signed
        assert involution_service.involute(tag, q) == p

    def test_theta_fixes_signed_identity(self):
        assert involution_service.is_fixed(InvolutionTag.THETA, window("-1 2 -3 4 5"))

    def test_eta_rejects_odd_negatives(self):
        with pytest.raises(DomainError):
            involution_service.involute(InvolutionTag.ETA, window("2 1 -3 -5 6 -4"))

    def test_iota_rejects_even_size(self):
        with pytest.raises(DomainError):
            involution_service.involute(InvolutionTag.IOTA, window("1 2"))

    def test_signed_involutions_reject_colors(self):
        with pytest.raises(DomainError):
            involution_service.involute(InvolutionTag.THETA, window("1 2[2]", r=3))


class TestFixedPoints:
    def test_iota_fixed_points(self):
        fixed = signed_words(involution_service.fixed_points(InvolutionTag.IOTA, FamilySpec.even_signed(3)))
        assert fixed == {
            (1, 2, 3), (2, 1, 3), (3, 1, 2), (3, 2, 1),
            (-1, -2, 3), (-2, -1, 3), (-3, 1, -2), (-3, 2, -1),
        }

    def test_psi_d_fixed_points(self):
        fixed = signed_words(involution_service.fixed_points(InvolutionTag.PSI_D, FamilySpec.even_signed(3)))
        assert fixed == {
            (1, 2, 3), (-1, -2, 3), (2, 1, 3), (-2, -1, 3),
            (1, -2, -3), (-1, 2, -3), (2, -1, -3), (-2, 1, -3),
        }

    def test_psi_b_fixed_points(self):
        fixed = signed_words(involution_service.fixed_points(InvolutionTag.PSI_B, FamilySpec.hyperoctahedral(2)))
        assert fixed == {(1, 2), (-1, -2), (2, 1), (-2, -1)}

    def test_theta_fixed_points_are_signed_identities(self):
        fixed = list(involution_service.fixed_points(InvolutionTag.THETA, FamilySpec.hyperoctahedral(3)))
        assert len(fixed) == 8
        assert all(p.sigma == (1, 2, 3) for p in fixed)

    def test_restricted_phi_fixed_points(self):
        h = RestrictionTuple(r=3, entries=(frozenset({0, 1}), frozenset({1}), frozenset({0, 1, 2}), frozenset({2})))
        spec = FamilySpec.restricted(h)
        structural = set(involution_service.fixed_points(InvolutionTag.PHI, spec))
        filtered = set(involution_service.fixed_points_by_filter(InvolutionTag.PHI, spec))
        assert structural == filtered
        # S = ({1}, {2}): two blocks in either order, each ascending or descending
        assert len(structural) == 8

    def test_wrong_family(self):
        with pytest.raises(DomainError):
            list(involution_service.fixed_points(InvolutionTag.PSI_B, FamilySpec.even_signed(2)))
        with pytest.raises(DomainError):
            list(involution_service.fixed_points(InvolutionTag.ETA, FamilySpec.even_signed(3)))


@pytest.mark.parametrize(
    "tag, spec",
    [
        (InvolutionTag.PHI, FamilySpec.colored(3, 4)),
        (InvolutionTag.PHI, FamilySpec.hyperoctahedral(5)),
        (InvolutionTag.ETA, FamilySpec.even_signed(4)),
        (InvolutionTag.IOTA, FamilySpec.even_signed(5)),
        (InvolutionTag.PSI_B, FamilySpec.hyperoctahedral(4)),
        (InvolutionTag.PSI_D, FamilySpec.even_signed(4)),
        (InvolutionTag.THETA, FamilySpec.hyperoctahedral(4)),
    ],
)
def test_involution_laws(tag, spec):
    report = law_checks.involution_laws(tag, spec)
    assert report.passed, report.failures
    assert report.checked == permutation_service.family_size(spec)
    assert law_checks.fixed_point_agreement(tag, spec).passed
