import pytest

from app.models.characters import CharacterForm, CharacterLabel
from app.models.errors import DomainError
from app.models.permutation import ColoredPermutation
from app.services.algebra import CyclotomicInt, omega_power
from app.services.character_service import character_service
from app.services.law_checks import law_checks
from tests.conftest import window


def test_labels_cover_both_indices():
    keys = [label.key for label in character_service.labels(3)]
    assert keys == ["0,0", "0,1", "0,2", "1,0", "1,1", "1,2"]


@pytest.mark.parametrize("form", list(CharacterForm))
def test_identity_maps_to_one(form):
    one = ColoredPermutation.identity(4, 3)
    for label in character_service.labels(4, form):
        assert character_service.chi(label, one) == CyclotomicInt.one(4)


def test_length_form_value():
    # length 29, col 7: (-1)^22 ω^7 = ω^3 at r=4
    p = window("5 1[1] 3 4[2] 2[1] 6[3]", r=4)
    assert character_service.chi(CharacterLabel(a=1, b=1), p) == omega_power(4, 3)
    assert character_service.chi(CharacterLabel(a=0, b=2), p) == omega_power(4, 14)


def test_classical_form_uses_sign_of_absolute_value():
    p = window("2 1[1] 3", r=3)
    label = CharacterLabel(a=1, b=0, form=CharacterForm.CLASSICAL)
    assert character_service.chi(label, p) == CyclotomicInt.from_int(3, -1)


def test_index_must_fit_colors():
    with pytest.raises(DomainError):
        character_service.chi(CharacterLabel(a=0, b=3), window("1 2", r=3))


def test_signed_correspondence():
    correspondence = character_service.character_correspondence(2, 3)
    assert correspondence == {"0,0": ["0,0"], "0,1": ["0,1"], "1,0": ["1,0"], "1,1": ["1,1"]}


@pytest.mark.parametrize("r, n", [(1, 3), (2, 3), (3, 2), (3, 3)])
@pytest.mark.parametrize("form", list(CharacterForm))
def test_multiplicative(r, n, form):
    report = law_checks.character_multiplicativity(r, n, form)
    assert report.passed, report.failures


def test_multiplicative_on_random_pairs():
    report = law_checks.character_multiplicativity_random(5, 5, pairs=300, seed=7)
    assert report.passed, report.failures
    assert report.checked == 300


def test_four_signed_characters():
    assert law_checks.signed_character_table(3).passed


def test_both_forms_give_the_same_characters():
    assert law_checks.character_value_sets(3, 3).passed
