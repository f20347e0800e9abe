import itertools

import pytest
from pydantic import ValidationError

from app.models.errors import DomainError, RestrictionError, WindowParseError, one_line
from app.models.permutation import (
    ColoredPermutation,
    FamilyKind,
    FamilySpec,
    RestrictionTuple,
    TildeRestriction,
    WindowStyle,
)
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service
from tests.conftest import signed_words, window

PLUS, MINUS, BOTH = frozenset({0}), frozenset({1}), frozenset({0, 1})


def restriction(r, *entries):
    return RestrictionTuple(r=r, entries=tuple(frozenset(e) for e in entries))


class TestWindows:
    def test_parse_colored_window(self):
        p = window("5 1[1] 3 4[2] 2[1] 6[3]", r=4)
        assert p.sigma == (5, 1, 3, 4, 2, 6)
        assert p.z == (0, 1, 0, 2, 1, 3)

    def test_parse_signed_window(self):
        p = window("-2 3 -5 -1 -4")
        assert p.signed == (-2, 3, -5, -1, -4)
        assert permutation_service.format_window(p, WindowStyle.SIGNED) == "-2 3 -5 -1 -4"

    def test_parse_uncolored_identity(self):
        assert window("1 2 3", r=1) == ColoredPermutation.identity(1, 3)

    def test_format_brackets(self):
        p = ColoredPermutation(4, (5, 1, 3, 4, 2, 6), (0, 1, 0, 2, 1, 3))
        assert permutation_service.format_window(p) == "5 1[1] 3 4[2] 2[1] 6[3]"
        assert permutation_service.format_window(ColoredPermutation.identity(1, 3)) == "1 2 3"

    def test_signed_style_needs_two_colors(self):
        with pytest.raises(DomainError):
            permutation_service.format_window(window("1 2[2]", r=3), WindowStyle.SIGNED)

    @pytest.mark.parametrize(
        "text, r",
        [
            ("1 1 2", 3),       # repeated letter
            ("1 3", 3),         # missing letter
            ("-1 2", 3),        # minus sign outside r=2
            ("1[3] 2", 3),      # color out of range
            ("1 x", 2),         # junk token
            ("-1[1] 2", 2),     # sign and color together
        ],
    )
    def test_parse_errors(self, text, r):
        with pytest.raises(WindowParseError):
            window(text, r)

    def test_parse_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            window("2 2", 1)


class TestEnumeration:
    @pytest.mark.parametrize(
        "spec, size",
        [
            (FamilySpec.sym(3), 6),
            (FamilySpec.colored(3, 2), 18),
            (FamilySpec.hyperoctahedral(3), 48),
            (FamilySpec.even_signed(3), 24),
            (FamilySpec.even_signed(1), 1),
            (FamilySpec.sym(0), 1),
        ],
    )
    def test_family_sizes(self, spec, size):
        elements = list(permutation_service.enumerate_family(spec))
        assert len(elements) == size == permutation_service.family_size(spec)
        assert len(set(elements)) == size

    def test_lexicographic_order(self):
        elements = list(permutation_service.enumerate_family(FamilySpec.colored(2, 3)))
        assert elements == sorted(elements, key=lambda p: (p.sigma, p.z))

    def test_restricted_family(self):
        spec = FamilySpec.restricted(restriction(4, {0, 2}, {2, 3}))
        words = [permutation_service.format_window(p) for p in permutation_service.enumerate_family(spec)]
        assert words == [
            "1 2[2]", "1 2[3]", "1[2] 2[2]", "1[2] 2[3]",
            "2 1[2]", "2 1[3]", "2[2] 1[2]", "2[2] 1[3]",
        ]

    def test_empty_entry_gives_empty_family(self):
        spec = FamilySpec.restricted(restriction(2, {0}, set()))
        assert list(permutation_service.enumerate_family(spec)) == []

    def test_tilde_family_elements(self):
        tilde = TildeRestriction(base=RestrictionTuple(r=2, entries=(MINUS, PLUS, BOTH)), k=2)
        elements = permutation_service.enumerate_family(FamilySpec.tilde_b(tilde))
        assert signed_words(elements) == {(-1, 3, 2), (-1, 3, -2), (-2, 3, 1), (-2, 3, -1)}

    def test_chunks_partition_the_family(self):
        spec = FamilySpec.hyperoctahedral(4)
        whole = list(permutation_service.enumerate_family(spec))
        pieces = [list(permutation_service.enumerate_family(spec, chunk=(i, 7))) for i in range(7)]
        assert list(itertools.chain.from_iterable(pieces)) == whole

    def test_family_spec_checks_kind(self):
        with pytest.raises(ValueError):
            FamilySpec(kind=FamilyKind.B, r=3, n=2)
        with pytest.raises(ValueError):
            FamilySpec(kind=FamilyKind.RESTRICTED_G, r=2, n=2)

    def test_family_spec_errors_read_as_one_line(self):
        with pytest.raises(ValidationError) as info:
            FamilySpec(kind=FamilyKind.B, r=3, n=2)
        message = one_line(info.value)
        assert message.endswith("requires r=2")
        assert "\n" not in message


class TestRestrictions:
    def test_refine(self):
        h = restriction(4, {0, 1, 2, 3}, {0, 2}, {2, 3}, {0, 2, 3})
        assert permutation_service.refine_restriction(h) == restriction(4, {0, 2}, {2, 3})

    def test_refine_detects_other_tuple(self):
        h = restriction(4, {0, 1, 2, 3}, {0, 2}, {2, 3}, {0, 1, 3})
        assert permutation_service.refine_restriction(h) == restriction(4, {0, 2}, {3})

    def test_refine_full(self):
        assert permutation_service.refine_restriction(RestrictionTuple.full(3, 4)) == RestrictionTuple.full(3, 2)

    def test_refine_needs_even_length(self):
        with pytest.raises(RestrictionError):
            permutation_service.refine_restriction(RestrictionTuple.full(2, 3))

    def test_tilde_family_worked_example(self):
        h = RestrictionTuple(r=2, entries=(BOTH, MINUS, PLUS, BOTH, BOTH))
        family = permutation_service.tilde_family(h)
        assert [(t.k, t.base.entries) for t in family] == [
            (1, (BOTH, frozenset(), BOTH)),
            (2, (MINUS, PLUS, BOTH)),
            (3, (MINUS, PLUS, BOTH)),
        ]

    def test_tilde_family_needs_odd_length(self):
        with pytest.raises(RestrictionError):
            permutation_service.tilde_family(RestrictionTuple.full(2, 4))

    def test_parse_sign_shorthand(self):
        parsed = permutation_service.parse_restriction(["+", "−", "±", [0, 1]], 2)
        assert parsed.entries == (PLUS, MINUS, BOTH, BOTH)

    @pytest.mark.parametrize("data", [{"a": 1}, [[0, 5]], ["+"], [["x"]]])
    def test_parse_rejects(self, data):
        with pytest.raises(RestrictionError):
            permutation_service.parse_restriction(data, 3)

    def test_out_of_range_color_message_is_one_line(self):
        with pytest.raises(RestrictionError) as info:
            permutation_service.parse_restriction([[0], [5], [0, 1]], 2)
        assert str(info.value) == "restriction rejected: entry 2 holds colors [5] outside 0..1"


class TestGroupStructure:
    def test_compose_with_identity(self):
        p = window("5 1[1] 3 4[2] 2[1] 6[3]", r=4)
        assert permutation_service.compose(p, ColoredPermutation.identity(4, 6)) == p

    @pytest.mark.parametrize("r, n", [(1, 3), (2, 3), (3, 2), (3, 3)])
    def test_inverse(self, r, n):
        one = ColoredPermutation.identity(r, n)
        for p in permutation_service.enumerate_family(FamilySpec.colored(r, n)):
            assert permutation_service.compose(p, permutation_service.inverse(p)) == one

    def test_s0_squares_to_one_in_b1(self):
        bar = window("-1")
        assert permutation_service.compose(bar, bar) == window("1")

    def test_generators(self):
        assert permutation_service.apply_generator(ColoredPermutation.identity(1, 3), 1) == window("2 1 3", 1)
        assert permutation_service.apply_generator(ColoredPermutation.identity(2, 1), 0) == window("1[1]")
        assert permutation_service.apply_generator(ColoredPermutation.identity(2, 2), 0, type_d=True) == window(
            "-2 -1"
        )

    def test_generator_out_of_range(self):
        with pytest.raises(DomainError):
            permutation_service.apply_generator(ColoredPermutation.identity(2, 2), 2)

    def test_absolute(self):
        assert permutation_service.absolute(window("-2 3 -5 -1 -4")).signed == (2, 3, 5, 1, 4)
        assert permutation_service.absolute(window("5 1[1] 3 4[2] 2[1] 6[3]", 4)).sigma == (5, 1, 3, 4, 2, 6)

    @pytest.mark.parametrize("kind", [FamilyKind.B, FamilyKind.D])
    def test_bfs_matches_length(self, kind):
        distances = permutation_service.bfs_lengths(kind, 2, 3)
        assert len(distances) == (48 if kind == FamilyKind.B else 24)
        for p, d in distances.items():
            assert statistics_service.length(p, kind) == d
