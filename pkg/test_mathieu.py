from fractions import Fraction

import numpy as np
import pytest

from exact.laurent import GaussianRational, spectrum
from lie_tools.expression import parse_expression
from lie_tools.groupmodel import GroupModel
from lie_tools.mathieu import (
    ORIGIN_INSIDE,
    ORIGIN_OUTSIDE,
    HullCertificate,
    carat_hull_oracle,
    mathieu_report,
    origin_in_hull,
    power_integral_sequence,
    root_modulus,
    vanishing_threshold,
    verify_certificate,
)
from lie_tools.measure import GroupSpec
from lie_tools.verification import random_spectrum
from utils.validation import DimensionMismatch, EmptySpectrum, InvalidSeparator, ValidationError

SU2 = GroupSpec.parse("SU(2)")


def test_origin_inside_triangle():
    certificate = origin_in_hull([(2, 1), (1, 2), (-1, -1)])
    assert certificate.verdict == ORIGIN_INSIDE
    assert certificate.points == ((-1, -1), (1, 2), (2, 1))
    assert certificate.inside_witness == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    assert certificate.to_json()["weights"][0] == {"num": 3, "den": 5}


def test_origin_outside_has_separator():
    certificate = origin_in_hull([(1, 0), (0, 1)])
    assert certificate.verdict == ORIGIN_OUTSIDE
    assert certificate.separating_vector == (1, 1)
    assert "weights" not in certificate.to_json()


def test_one_dimensional_and_degenerate_hulls():
    assert origin_in_hull([(-2,), (3,)]).inside_witness == (Fraction(3, 5), Fraction(2, 5))
    assert origin_in_hull([(0, 0)]).origin_inside
    assert origin_in_hull([(0, 0), (0, 0), (1, 1)]).points == ((0, 0), (1, 1))
    outside = origin_in_hull([(2, 2), (4, 4)])
    assert min(sum(v * m for v, m in zip(outside.separating_vector, p)) for p in outside.points) == 1


def test_hull_errors():
    with pytest.raises(EmptySpectrum):
        origin_in_hull([])
    with pytest.raises(DimensionMismatch):
        origin_in_hull([(1, 0), (1,)])


def test_verify_certificate_rejects_bad_witnesses():
    points = [(1, 0), (0, 1)]
    assert not verify_certificate(points, HullCertificate(ORIGIN_OUTSIDE, tuple(points), separating_vector=(1, 0)))
    assert not verify_certificate(
        points, HullCertificate(ORIGIN_INSIDE, tuple(points), inside_witness=(Fraction(1, 2), Fraction(1, 2)))
    )
    assert verify_certificate(points, HullCertificate(ORIGIN_OUTSIDE, tuple(points), separating_vector=(1, 1)))


def test_hull_agrees_with_subset_oracle():
    rng = np.random.default_rng(2)
    for k in range(30):
        points = random_spectrum(rng, 2 + k % 2, 6, 3)
        inside, weights = carat_hull_oracle(points)
        assert origin_in_hull(points).origin_inside == inside
        if inside:
            assert sum(weights.values()) == 1


def test_vanishing_threshold():
    sp_f = [(1, 0), (0, 1)]
    assert vanishing_threshold(sp_f, [(-3, 0)], (1, 1)) == 4
    assert vanishing_threshold(sp_f, [(3, 0)], (1, 1)) == 1
    assert vanishing_threshold(sp_f, [], (1, 1)) == 1
    assert vanishing_threshold([(2, 0)], [(-3, 1)], (Fraction(1, 2), 0)) == 2
    with pytest.raises(InvalidSeparator):
        vanishing_threshold(sp_f, [(0, 0)], (1, 0))
    with pytest.raises(DimensionMismatch):
        vanishing_threshold([(1,)], [], (1, 1))


def test_power_integral_sequence():
    model = GroupModel(SU2)
    f = model.reduce(parse_expression("a[1,1]*c[1,1] - 1/2"))
    assert power_integral_sequence(f, model.measure, 3) == [0, Fraction(1, 12), 0]


def test_report_with_separating_vector():
    report = mathieu_report("a[1,1]", "c[1,1]", SU2, 6)
    assert report.hypothesis_holds
    assert report.spectrum == [(1, 1)]
    assert not report.certificate.origin_inside
    assert report.n0 == 2
    assert report.checked_window == (2, 7)
    assert report.conclusion_verified
    assert "separating vector found" in report.conclusion

    payload = report.to_json()
    assert payload["n0"] == 2
    assert payload["heuristic"]["label"].startswith("heuristic")
    assert payload["f_reduced"]["n_x"] == 1


def test_report_default_g_is_one():
    report = mathieu_report(parse_expression("a[1,1]"), None, SU2, 4)
    assert report.n0 == 1
    assert report.conclusion_verified


def test_report_when_hypothesis_fails():
    report = mathieu_report("a[1,1]*c[1,1] - 1/2", None, SU2, 4)
    assert not report.hypothesis_holds
    assert report.first_nonzero_power == 2
    assert report.conclusion.startswith("hypothesis not satisfied")
    assert report.n0 is None


def test_report_with_origin_in_hull():
    report = mathieu_report("a[1,1]*c[1,1] - 1/2", None, SU2, 1)
    assert report.hypothesis_holds
    assert report.certificate.origin_inside
    assert report.n0 is None
    assert not report.conclusion_verified


def test_report_for_zero_function():
    report = mathieu_report("0*a[1,1]", "a[1,2]", SU2, 3)
    assert report.f_reduced.is_zero()
    assert report.certificate is None
    assert report.conclusion.startswith("f reduces to zero")


def test_hull_rejects_fractional_coordinates():
    with pytest.raises(ValidationError):
        origin_in_hull([(0.9, 0), (-0.9, 0.1)])
    with pytest.raises(ValidationError):
        origin_in_hull([("a", 0)])
    outside = origin_in_hull([(2.0, 0), (0, Fraction(4, 2))])
    assert not outside.origin_inside
    assert outside.points == ((0, 2), (2, 0))


def test_separator_keeps_the_origin_out_of_every_power():
    model = GroupModel(GroupSpec.parse("SU(2)xT^1"))
    f = model.reduce(parse_expression("a[1,1] + 2*a[1,1]*u[1]"))
    certificate = origin_in_hull(spectrum(f))
    assert not certificate.origin_inside
    v = certificate.separating_vector

    power = f
    for n in range(1, 5):
        if n > 1:
            power = power * f
        points = spectrum(power)
        assert all(sum(a * b for a, b in zip(v, m)) >= n for m in points)
        assert not origin_in_hull(points).origin_inside


def test_root_modulus_in_log_space():
    assert root_modulus(GaussianRational(0), 3) == 0.0
    assert root_modulus(GaussianRational(3, 4), 1) == pytest.approx(5.0)
    assert root_modulus(GaussianRational(10 ** 400), 2) == pytest.approx(1e200)
    assert root_modulus(GaussianRational(10 ** 800), 1) == float("inf")


def test_report_with_huge_power_integrals():
    report = mathieu_report("1000", None, SU2, 120)
    assert report.first_nonzero_power == 1
    assert report.power_integrals[-1] == 1000 ** 120
    assert report.heuristic_roots[-1] == pytest.approx(1000.0)
