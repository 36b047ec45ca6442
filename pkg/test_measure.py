from fractions import Fraction

import pytest

from lie_tools.measure import GroupSpec, measure_spec
from utils.validation import DimensionMismatch, InvalidType, NotReduced, ParseError, ValidationError


def test_su3_measure():
    measure = measure_spec(GroupSpec.parse("SU(3)"))
    assert (measure.n_x, measure.n_circle) == (3, 5)
    assert measure.exponents == (1, 2, 1)
    assert measure.weight_powers == (1, 3, 1)
    assert measure.constant == 16

    payload = measure.to_json()
    assert payload["N"] == 3
    assert payload["M"] == 5
    assert payload["word"] == [1, 2, 1]
    assert payload["constant"] == {"num": 16, "den": 1}


def test_su2_measure():
    measure = measure_spec(GroupSpec.parse("SU(2)"))
    assert (measure.n_x, measure.n_circle) == (1, 2)
    assert measure.constant == 2
    assert measure.variable_names() == ["x1", "w1", "z1"]


def test_product_group_layout():
    measure = measure_spec(GroupSpec.parse("SU(2)xSU(2)xT^1"))
    assert (measure.n_x, measure.n_circle) == (2, 5)
    assert measure.constant == 4
    assert measure.variable_names() == ["x1_1", "x2_1", "w1_1", "z1_1", "w2_1", "z2_1", "u1"]
    assert measure.torus_indices == (4,)
    second = measure.factor_layout(2)
    assert second.x_indices == (1,)
    assert second.w_indices == (2,)
    assert second.z_indices == (3,)


def test_pure_torus():
    measure = measure_spec(GroupSpec.parse("T^3"))
    assert (measure.n_x, measure.n_circle) == (0, 3)
    assert measure.constant == 1
    assert measure.normalization_check() == 1


@pytest.mark.parametrize("text,n_x,n_circle", [("G2", 6, 8), ("F4", 24, 28), ("E8", 120, 128), ("B3", 9, 12)])
def test_exceptional_and_classical_counts(text, n_x, n_circle):
    measure = measure_spec(GroupSpec.parse(text))
    assert (measure.n_x, measure.n_circle) == (n_x, n_circle)
    assert measure.normalization_check() == 1
    assert all(p % 2 == 1 for p in measure.weight_powers)


def test_explicit_words():
    measure = measure_spec(GroupSpec.parse("SU(3)"), [(2, 1, 2)])
    assert measure.exponents == (1, 2, 1)
    with pytest.raises(NotReduced):
        measure_spec(GroupSpec.parse("SU(3)"), [(1, 2)])
    with pytest.raises(DimensionMismatch):
        measure_spec(GroupSpec.parse("SU(3)"), [(1, 2, 1), (1,)])


def test_form_scale_does_not_change_the_measure():
    plain = measure_spec(GroupSpec.parse("B2"))
    scaled = measure_spec(GroupSpec.parse("B2"), form_scale=Fraction(5, 2))
    assert plain.exponents == scaled.exponents
    assert plain.constant == scaled.constant


@pytest.mark.parametrize("scale", ["abc", "1/0", [2], None])
def test_form_scale_rejects_non_rationals(scale):
    with pytest.raises(ValidationError) as info:
        measure_spec(GroupSpec.parse("SU(2)"), form_scale=scale)
    assert info.value.field == "form_scale"


def test_form_scale_accepts_rational_text():
    assert measure_spec(GroupSpec.parse("SU(3)"), form_scale="5/2").constant == 16


def test_group_spec_parsing():
    assert str(GroupSpec.parse("SU(3)xT^2")) == "SU(3)xT^2"
    assert GroupSpec.parse("SU(2) x SU(2)").simple_factors == (('A', 1), ('A', 1))
    assert GroupSpec.parse("E8").simple_factors == (('E', 8),)
    with pytest.raises(ParseError):
        GroupSpec.parse("SU(1)")
    with pytest.raises(ParseError):
        GroupSpec.parse("SU(3)x")
    with pytest.raises(InvalidType):
        GroupSpec.parse("E5")
    with pytest.raises(ValidationError):
        GroupSpec()


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        GroupSpec.parse("SU(3)yT^1")
    assert info.value.position == 5
    assert info.value.to_dict()["position"] == 5


def test_factor_layout_out_of_range():
    measure = measure_spec(GroupSpec.parse("SU(2)"))
    with pytest.raises(DimensionMismatch):
        measure.factor_layout(2)
