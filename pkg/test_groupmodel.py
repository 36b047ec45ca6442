from fractions import Fraction

import numpy as np
import pytest

from exact.laurent import I, weighted_integral
from lie_tools.expression import conjugate_expression, parse_expression
from lie_tools.groupmodel import (
    GroupModel,
    coordinate_matrix,
    integrate_expression,
    numeric_point,
    reduce_function,
)
from lie_tools.measure import GroupSpec, measure_spec
from utils.validation import DimensionMismatch, DomainError, IndexOutOfRange, UnsupportedFactor


def _integral(group, text, words=None):
    return integrate_expression(parse_expression(text), GroupSpec.parse(group), words)


def test_su2_coordinate_entries():
    pair = GroupModel(GroupSpec.parse("SU(2)")).pair(1)
    Q = pair.Q
    assert dict(Q[0][0].terms) == {(0, 1, 1): I, (2, 1, 1): -I}
    assert dict(Q[0][1].terms) == {(1, 0, -1): I}
    assert dict(Q[1][0].terms) == {(1, 0, 1): I}
    assert dict(Q[1][1].terms) == {(0, -1, -1): -I}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_determinant_and_gram_identities(n):
    assert GroupModel(GroupSpec.parse(f"SU({n})")).pair(1).identities_hold()


def test_reductions_on_su2():
    model = GroupModel(GroupSpec.parse("SU(2)"))
    x = model.reduce(parse_expression("a[1,2]*c[1,2]"))
    assert x.to_text(model.measure.variable_names()) == "x1^2"
    assert model.reduce(parse_expression("a[1,1]*a[2,2]")) == model.reduce(parse_expression("a[1,1]*c[1,1]"))
    assert model.reduce(parse_expression("a[1,1]*c[1,1] + a[1,2]*c[1,2]")) == 1


def test_known_su2_integrals():
    assert _integral("SU(2)", "a[1,1]*a[2,2]") == Fraction(1, 2)
    assert _integral("SU(2)", "a[1,1]*a[1,2]*a[2,1]*a[2,2]") == Fraction(-1, 6)
    assert _integral("SU(2)", "a[1,1]") == 0
    assert _integral("SU(2)", "(a[1,1]*c[1,1])^2") == Fraction(1, 3)


def test_schur_orthogonality_su3():
    assert _integral("SU(3)", "a[2,3]*c[2,3]") == Fraction(1, 3)
    assert _integral("SU(3)", "a[2,3]*c[3,2]") == 0


def test_weingarten_values_su3():
    assert _integral("SU(3)", "a[1,1]*c[1,1]*a[2,2]*c[2,2]") == Fraction(1, 8)
    assert _integral("SU(3)", "(a[1,1]*c[1,1])^2") == Fraction(1, 6)


def test_determinant_expression_integrates_to_one():
    det = "a[1,1]*a[2,2]*a[3,3] - a[1,1]*a[2,3]*a[3,2] - a[1,2]*a[2,1]*a[3,3]" \
          " + a[1,2]*a[2,3]*a[3,1] + a[1,3]*a[2,1]*a[3,2] - a[1,3]*a[2,2]*a[3,1]"
    assert _integral("SU(3)", det) == 1


def test_word_independence():
    text = "a[1,2]*c[1,2]*a[3,1]*c[3,1] + i*a[2,2]*c[2,1]"
    assert _integral("SU(3)", text, [[1, 2, 1]]) == _integral("SU(3)", text, [[2, 1, 2]])


def test_conjugation_commutes_with_integration():
    model = GroupModel(GroupSpec.parse("SU(3)"))
    expr = parse_expression("i*a[1,1]*c[1,1] + 2*a[1,2]*c[1,2]*a[2,1]*c[2,1] - 1/3")
    assert model.integrate(conjugate_expression(expr)) == model.integrate(expr).conjugate()


def test_product_group_is_multiplicative():
    assert _integral("SU(2)xSU(2)xT^1", "a1[1,1]*c1[1,1]*a2[1,1]*c2[1,1]") == Fraction(1, 4)
    assert _integral("SU(2)xSU(2)xT^1", "a1[1,1]*c1[1,1]*u[1]*u[1]^-1") == Fraction(1, 2)
    assert _integral("SU(2)xSU(2)xT^1", "a1[1,1]*c1[1,1]*u[1]") == 0


def test_torus_only_group():
    assert _integral("T^2", "u[1]*u[1]^-1 + u[2]") == 1
    assert _integral("T^2", "(u[1]*u[2])^3") == 0


def test_unsupported_factor():
    with pytest.raises(UnsupportedFactor):
        _integral("G2", "a[1,1]")
    measure = measure_spec(GroupSpec.parse("B2"))
    with pytest.raises(UnsupportedFactor):
        coordinate_matrix(('B', 2), None, measure)
    # constants still integrate on any group
    assert _integral("G2", "3") == 3


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        _integral("SU(2)", "a[3,1]")
    with pytest.raises(IndexOutOfRange):
        _integral("SU(2)", "a2[1,1]")
    with pytest.raises(IndexOutOfRange):
        _integral("SU(2)", "u[1]")


def test_coordinate_matrix_word_must_match_measure():
    measure = measure_spec(GroupSpec.parse("SU(3)"))
    with pytest.raises(DimensionMismatch):
        coordinate_matrix(('A', 2), (2, 1, 2), measure)
    assert coordinate_matrix(('A', 2), (1, 2, 1), measure).size == 3


def test_numeric_point_su2():
    U = numeric_point(('A', 1), (1,), [0.6], [1.0], [1.0])
    expected = np.array([[0.8j, 0.6j], [0.6j, -0.8j]])
    assert np.allclose(U, expected)
    assert np.isclose(np.linalg.det(U), 1)


def test_numeric_point_is_special_unitary():
    rng = np.random.default_rng(0)
    x = rng.random(6)
    w = np.exp(2j * np.pi * rng.random(6))
    z = np.exp(2j * np.pi * rng.random(3))
    U = numeric_point(('A', 3), (1, 2, 1, 3, 2, 1), x, w, z)
    assert np.allclose(U @ U.conj().T, np.eye(4))
    assert np.isclose(np.linalg.det(U), 1)


def test_numeric_point_domain_errors():
    with pytest.raises(DomainError):
        numeric_point(('A', 1), (1,), [1.5], [1.0], [1.0])
    with pytest.raises(DomainError):
        numeric_point(('A', 1), (1,), [0.5], [2.0], [1.0])
    with pytest.raises(DomainError):
        numeric_point(('A', 2), (1, 2, 1), [0.5], [1.0], [1.0, 1.0])
    with pytest.raises(UnsupportedFactor):
        numeric_point(('C', 2), (1, 2, 1, 2), [0.5] * 4, [1.0] * 4, [1.0, 1.0])


def test_reduce_function():
    su2 = GroupSpec.parse("SU(2)")
    reduced = reduce_function(parse_expression("a[1,2]*c[1,2]"), su2)
    assert reduced.to_text(measure_spec(su2).variable_names()) == "x1^2"

    su3 = GroupSpec.parse("SU(3)")
    expr = parse_expression("a[1,1]*c[1,1]*a[2,3]*c[2,3]")
    other = reduce_function(expr, su3, [(2, 1, 2)])
    assert other == GroupModel(su3, [(2, 1, 2)]).reduce(expr)
    assert weighted_integral(other, measure_spec(su3, [(2, 1, 2)])) == integrate_expression(expr, su3)


def test_numeric_point_checks_every_unit_circle_value():
    with pytest.raises(DomainError) as info:
        numeric_point(('A', 1), (1,), [0.5], [1.0], [0.5j])
    assert info.value.field == "z"
    with pytest.raises(DomainError) as info:
        numeric_point(('A', 1), (1,), [float("nan")], [1.0], [1.0])
    assert info.value.field == "x"
