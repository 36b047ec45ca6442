from fractions import Fraction

import pytest

from lie_tools.rootsystem import (
    build_root_system,
    dual_coxeter_number,
    expected_positive_root_count,
    weight_exponent,
)
from utils.validation import InvalidType, NotARoot, ValidationError


@pytest.mark.parametrize("type_label,rank,count", [
    ('A', 1, 1), ('A', 4, 10), ('B', 2, 4), ('C', 3, 9), ('D', 4, 12),
    ('G', 2, 6), ('F', 4, 24), ('E', 6, 36), ('E', 7, 63), ('E', 8, 120),
])
def test_positive_root_counts(type_label, rank, count):
    rs = build_root_system(type_label, rank)
    assert len(rs.positive_roots) == count
    assert expected_positive_root_count(type_label, rank) == count


def test_dimensions():
    assert build_root_system('A', 2).dimension == 8
    assert build_root_system('G', 2).dimension == 14
    assert build_root_system('E', 8).dimension == 248


def test_a2_rho_and_exponents():
    rs = build_root_system('A', 2)
    assert rs.rho == (1, 1)
    assert weight_exponent(rs, (1, 0)) == 1
    assert weight_exponent(rs, (0, 1)) == 1
    assert weight_exponent(rs, (1, 1)) == 2


def test_g2_roots_and_highest_root():
    rs = build_root_system('G', 2)
    assert set(rs.positive_roots) == {(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)}
    assert rs.highest_root == (3, 2)
    assert rs.squared_length((1, 0)) == Fraction(2, 3)
    assert rs.squared_length((3, 2)) == 2


@pytest.mark.parametrize("type_label,rank,expected", [
    ('A', 1, 2), ('A', 4, 5), ('B', 2, 3), ('G', 2, 4), ('F', 4, 9), ('E', 8, 30),
])
def test_dual_coxeter_numbers(type_label, rank, expected):
    assert dual_coxeter_number(build_root_system(type_label, rank)) == expected


def test_cartan_matrices():
    assert build_root_system('A', 2).cartan_matrix == ((2, -1), (-1, 2))
    assert build_root_system('B', 2).cartan_matrix == ((2, -1), (-2, 2))


def test_reflections():
    rs = build_root_system('A', 2)
    assert rs.reflect((1, 0), 0) == (-1, 0)
    assert rs.reflect((1, 0), 1) == (1, 1)
    assert rs.coroot_pairing((1, 1), 0) == 1


def test_every_exponent_is_a_positive_integer():
    for type_label, rank in [('B', 4), ('C', 4), ('D', 5), ('F', 4), ('E', 6)]:
        rs = build_root_system(type_label, rank)
        for beta in rs.positive_roots:
            e = weight_exponent(rs, beta)
            assert isinstance(e, int) and e >= 1


def test_form_scale_leaves_exponents_unchanged():
    plain = build_root_system('B', 3)
    scaled = build_root_system('B', 3, Fraction(3))
    assert scaled.form[0][0] == 3 * plain.form[0][0]
    assert [weight_exponent(plain, b) for b in plain.positive_roots] == \
        [weight_exponent(scaled, b) for b in scaled.positive_roots]


def test_invalid_types():
    with pytest.raises(InvalidType):
        build_root_system('E', 5)
    with pytest.raises(InvalidType):
        build_root_system('A', 0)
    with pytest.raises(InvalidType):
        build_root_system('D', 2)
    with pytest.raises(InvalidType):
        build_root_system('A', 2, Fraction(-1))


def test_weight_exponent_rejects_non_roots():
    rs = build_root_system('A', 2)
    with pytest.raises(NotARoot):
        weight_exponent(rs, (1, -1))
    with pytest.raises(NotARoot):
        weight_exponent(rs, (2, 0))


def test_forms_symmetrize_the_cartan_data():
    half = Fraction(1, 2)
    assert build_root_system('B', 3).form == ((2, -1, 0), (-1, 2, -1), (0, -1, 1))
    assert build_root_system('C', 3).form == ((1, -half, 0), (-half, 1, -1), (0, -1, 2))
    assert build_root_system('G', 2).form == ((Fraction(2, 3), -1), (-1, 2))
    f4 = build_root_system('F', 4)
    assert [f4.form[i][i] for i in range(4)] == [2, 2, 1, 1]
    assert f4.form[2][3] == -half


def test_e6_dynkin_diagram():
    rs = build_root_system('E', 6)
    edges = {
        (i + 1, j + 1)
        for i in range(6)
        for j in range(i + 1, 6)
        if rs.form[i][j] != 0
    }
    assert edges == {(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)}
    assert all(rs.form[i][j] == -1 for i, j in [(0, 2), (1, 3)])
    assert all(rs.form[i][i] == 2 for i in range(6))


def test_heights_and_highest_roots():
    assert build_root_system('A', 1).height((1,)) == 1
    assert build_root_system('G', 2).height(build_root_system('G', 2).highest_root) == 5
    e8 = build_root_system('E', 8)
    assert e8.height(e8.highest_root) == 29
    assert max(e8.height(beta) for beta in e8.positive_roots) == 29


def test_form_scale_must_be_rational():
    with pytest.raises(ValidationError) as info:
        build_root_system('A', 2, "abc")
    assert info.value.field == "form_scale"
    assert build_root_system('A', 2, "3/2").form[0][0] == 3
