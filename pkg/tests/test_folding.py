import pytest

from app.models.errors import DomainError
from app.models.involution import HattedPermutation, HatVariant, InvolutionTag
from app.models.permutation import ColoredPermutation
from app.services.folding_service import folding_service
from app.services.law_checks import MAX_FAILURES, law_checks
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service
from tests.conftest import window


class TestHatForward:
    def test_g_even_example(self):
        p = window("5[1] 6[1] 2[2] 1[2] 8 7 4[1] 3[1]", r=3)
        h = folding_service.hat_forward(HatVariant.G_EVEN, p)
        assert permutation_service.format_window(h.base) == "3[1] 1[2] 4 2[1]"
        assert h.hats == {2, 3, 4}

        part = folding_service.hat_partition(h)
        assert part.P == [2, 3, 4]
        assert part.P_N == [3]
        assert part.P_C == [2, 4]
        assert part.P_plus == part.P_minus == []

        flag = statistics_service.flag_stats(h.base)
        assert statistics_service.length(h.base) == 9
        assert flag.des_set == {1, 3}
        assert (flag.fdes, flag.fmaj, flag.col) == (7, 16, 4)

    def test_b_odd_example(self):
        h = folding_service.hat_forward(HatVariant.B_ODD, window("-5 -6 -2 -1 8 7 9 -4 -3"))
        assert h.base.signed == (-3, -1, 4, 5, -2)
        assert h.hats == {2, 3, 5}

        part = folding_service.hat_partition(h)
        assert part.L == [1, 2, 4]
        assert part.P_plus == [3]
        assert part.P_minus == [2, 5]

    def test_d_even_example(self):
        h = folding_service.hat_forward(HatVariant.D_EVEN, window("2 1 -5 -6 8 7 4 3"))
        assert h.base.signed == (1, -3, 4, -2)
        assert h.hats == {1, 3, 4}

    @pytest.mark.parametrize(
        "text, base, hats",
        [
            ("2 1 -5 -6 8 7 4 3 9", (1, -3, 4, 2, -5), {1, 3, 4}),
            ("2 1 -5 -6 8 7 -9 4 -3", (1, -3, 4, -5, 2), {1, 3, 5}),
            ("-2 -1 -5 -6 8 7 -9 3 -4", (-1, -3, 4, -5, -2), {1, 3}),
        ],
    )
    def test_d_odd_examples(self, text, base, hats):
        p = window(text)
        h = folding_service.hat_forward(HatVariant.D_ODD, p)
        assert h.base.signed == base
        assert h.hats == hats
        assert folding_service.hat_backward(HatVariant.D_ODD, h) == p

    def test_rejects_non_fixed_points(self):
        with pytest.raises(DomainError):
            folding_service.hat_forward(HatVariant.G_EVEN, window("1 3 2 4", r=3))

    def test_rejects_wrong_parity(self):
        with pytest.raises(DomainError):
            folding_service.hat_forward(HatVariant.B_ODD, window("1 2"))


class TestHatBackward:
    def test_g_even_roundtrip(self):
        p = window("5[1] 6[1] 2[2] 1[2] 8 7 4[1] 3[1]", r=3)
        h = folding_service.hat_forward(HatVariant.G_EVEN, p)
        assert folding_service.hat_backward(HatVariant.G_EVEN, h) == p

    def test_max_letter_cannot_carry_a_hat(self):
        base = window("1 -2")
        with pytest.raises(DomainError):
            folding_service.hat_backward(HatVariant.B_ODD, HattedPermutation(base, frozenset({2})))

    def test_hat_outside_base(self):
        base = ColoredPermutation.identity(3, 2)
        with pytest.raises(DomainError):
            folding_service.hat_backward(HatVariant.G_EVEN, HattedPermutation(base, frozenset({3})))


class TestStraighten:
    def test_descending_pair(self):
        assert folding_service.straighten(InvolutionTag.PSI_B, window("2 1")).signed == (1, -2)

    def test_rejects_non_fixed_points(self):
        with pytest.raises(DomainError):
            folding_service.straighten(InvolutionTag.PSI_B, window("-2 1"))

    def test_only_for_psi(self):
        with pytest.raises(DomainError):
            folding_service.straighten(InvolutionTag.THETA, window("1 2"))

    @pytest.mark.parametrize("tag, n", [(InvolutionTag.PSI_B, 4), (InvolutionTag.PSI_B, 5), (InvolutionTag.PSI_D, 4), (InvolutionTag.PSI_D, 5)])
    def test_straighten_laws(self, tag, n):
        report = law_checks.straighten_laws(tag, n)
        assert report.passed, report.failures


@pytest.mark.parametrize(
    "variant, n, r",
    [
        (HatVariant.G_EVEN, 2, 3),
        (HatVariant.G_EVEN, 2, 4),
        (HatVariant.B_ODD, 2, 2),
        (HatVariant.D_EVEN, 2, 2),
        (HatVariant.D_ODD, 2, 2),
    ],
)
def test_hat_laws(variant, n, r):
    report = law_checks.hat_laws(variant, n, r)
    assert report.passed, report.failures


def test_broken_backward_map_is_reported(mocker):
    mocker.patch.object(
        folding_service, "hat_backward", return_value=ColoredPermutation.identity(2, 4)
    )
    report = law_checks.hat_laws(HatVariant.G_EVEN, 2, 2)
    assert not report.passed
    assert len(report.failures) == MAX_FAILURES
    assert any("does not come back" in failure for failure in report.failures)
