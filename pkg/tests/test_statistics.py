from collections import Counter

import pytest

from app.models.errors import DomainError
from app.models.permutation import FamilyKind, FamilySpec
from app.models.statistics import DescentPrefix, OrderTag
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service
from tests.conftest import window

COLORED = "5 1[1] 3 4[2] 2[1] 6[3]"


class TestColoredStatistics:
    def test_order_l_inversions_and_length(self):
        p = window(COLORED, r=4)
        assert statistics_service.inversions(p, OrderTag.ORDER_L) == 13
        assert statistics_service.length(p) == 29
        assert p.col == 7

    def test_flag_statistics(self):
        flag = statistics_service.flag_stats(window("4[2] 5 1[1] 3 2[1] 6[3]", r=4))
        assert flag.des_set == {2, 4, 5}
        assert flag.fdes == 14
        assert flag.fmaj == 51
        assert flag.col == 7
        assert flag.neg_set == {1, 3, 5, 6}

    def test_identity_has_no_statistics(self):
        bundle = statistics_service.stat_bundle(window("1 2 3 4", r=3))
        assert bundle.len_G == bundle.fmaj == bundle.inv_L == 0
        assert bundle.Des == bundle.Des_F == []

    def test_bundle_for_colored_window(self):
        bundle = statistics_service.stat_bundle(window(COLORED, r=4))
        assert bundle.window == COLORED
        assert bundle.len_G == 29
        assert bundle.len_B is None and bundle.ddes is None


class TestSignedStatistics:
    def test_type_b_descents_with_zero_prefix(self):
        data = statistics_service.descent_data(window("-2 1"), OrderTag.NATURAL, DescentPrefix.ZERO)
        assert data == ({0}, 1, 0)

    def test_type_d_descents_with_mirrored_prefix(self):
        data = statistics_service.type_d_descents(window("-1 -2"))
        assert data == ({0, 1}, 2, 1)

    def test_type_d_descents_small_n(self):
        assert statistics_service.type_d_descents(window("-1")).des == 0

    def test_prefix_needs_natural_order(self):
        with pytest.raises(DomainError):
            statistics_service.descent_data(window("1 2"), OrderTag.FLAG, DescentPrefix.ZERO)

    def test_lengths(self):
        p = window("-2 3 -5 -1 -4")
        assert statistics_service.length(p, FamilyKind.D) == 14
        assert statistics_service.length(p, FamilyKind.B) == 18
        assert statistics_service.length(window("-1"), FamilyKind.B) == 1
        assert statistics_service.length(window("-2 -1"), FamilyKind.D) == 1

    def test_type_d_length_rejects_odd_negatives(self):
        with pytest.raises(DomainError):
            statistics_service.length(window("-1 2"), FamilyKind.D)

    def test_d_statistics(self):
        assert statistics_service.d_stats(window("-2 3 -5 -1 -4")) == (5, 13, 1)

    @pytest.mark.parametrize("text, sgm", [("-2 5 1 -3 4", 0), ("-2 -5 1 -3 4", 1)])
    def test_sign_of_largest_letter(self, text, sgm):
        assert statistics_service.d_stats(window(text)).sgm == sgm

    def test_sign_change(self):
        change = statistics_service.sign_change(window("-1 -3 4 2 -5"))
        assert change.delta == (0, 1, 0, 1, 1)
        assert change.ch == 3

    def test_signed_only_statistics_reject_colors(self):
        with pytest.raises(DomainError):
            statistics_service.sign_change(window("1[2] 2", r=3))

    def test_bundle_skips_type_d_length_for_odd_negatives(self):
        bundle = statistics_service.stat_bundle(window("-1 2"))
        assert bundle.len_B == 1
        assert bundle.len_D is None
        assert bundle.Neg == [1]


def test_major_index_and_inversions_share_a_distribution():
    elements = list(permutation_service.enumerate_family(FamilySpec.sym(5)))
    inv = Counter(statistics_service.inversions(p, OrderTag.NATURAL) for p in elements)
    maj = Counter(statistics_service.descent_data(p).maj for p in elements)
    assert inv == maj
