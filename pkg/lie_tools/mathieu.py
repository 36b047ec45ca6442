"""
Mathieu-conjecture toolkit: spectra, exact origin-in-hull certificates,
vanishing thresholds for mixed integrals and power-integral experiments.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from exact.laurent import GaussianRational, LaurentPoly, spectrum, weighted_integral
from exact.simplex import phase_one, solve_linear_system
from lie_tools.expression import Expr, const, parse_expression
from lie_tools.groupmodel import GroupModel
from lie_tools.measure import GroupSpec, MeasureSpec
from utils.serialization import encode_gaussian, encode_rational, encode_vector
from utils.settings import get_setting
from utils.validation import (
    CertificateError,
    DimensionMismatch,
    EmptySpectrum,
    InvalidSeparator,
    ValidationError,
    validate_positive_int,
)

logger = logging.getLogger(__name__)

ORIGIN_INSIDE = "origin_inside"
ORIGIN_OUTSIDE = "origin_outside"


@dataclass(frozen=True)
class HullCertificate:
    verdict: str
    points: Tuple[tuple, ...]
    # convex weights aligned with points
    inside_witness: Optional[Tuple[Fraction, ...]] = None
    separating_vector: Optional[Tuple[Fraction, ...]] = None

    @property
    def origin_inside(self):
        return self.verdict == ORIGIN_INSIDE

    def to_json(self):
        payload = {
            "verdict": self.verdict,
            "points": [list(p) for p in self.points],
        }
        if self.inside_witness is not None:
            payload["weights"] = [encode_rational(value) for value in self.inside_witness]
        if self.separating_vector is not None:
            payload["separating_vector"] = [encode_rational(value) for value in self.separating_vector]
        return payload


def _dot(v, m):
    return sum((Fraction(a) * b for a, b in zip(v, m)), Fraction(0))


def _integral_coordinate(value):
    if isinstance(value, bool):
        raise ValidationError(f"Spectrum coordinate {value!r} is not an integer", field="spectrum")
    try:
        exact = Fraction(value)
    except (ValueError, TypeError):
        raise ValidationError(f"Spectrum coordinate {value!r} is not an integer", field="spectrum")
    if exact.denominator != 1:
        raise ValidationError(f"Spectrum coordinate {value!r} is not an integer", field="spectrum")
    return int(exact)


def _prepare_points(points: Iterable[Sequence[int]]):
    points = sorted({tuple(_integral_coordinate(c) for c in p) for p in points})
    if not points:
        raise EmptySpectrum("The spectrum is empty; the hull question is undefined", field="spectrum")
    dimension = len(points[0])
    if any(len(p) != dimension for p in points):
        raise DimensionMismatch("Spectrum points have differing dimensions", field="spectrum")
    return points, dimension


def verify_certificate(points: Sequence[Sequence[int]], certificate: HullCertificate) -> bool:
    """Exact post-hoc check of whichever witness the certificate carries"""
    points = [tuple(p) for p in points]
    if certificate.verdict == ORIGIN_INSIDE:
        weights = certificate.inside_witness
        if weights is None or certificate.separating_vector is not None or len(weights) != len(points):
            return False
        if any(value < 0 for value in weights) or sum(weights) != 1:
            return False
        dimension = len(points[0])
        return all(
            sum((weight * p[d] for weight, p in zip(weights, points)), Fraction(0)) == 0
            for d in range(dimension)
        )

    if certificate.verdict == ORIGIN_OUTSIDE:
        v = certificate.separating_vector
        if v is None or certificate.inside_witness is not None:
            return False
        return all(_dot(v, p) >= 1 for p in points)

    return False


def origin_in_hull(spectrum: Iterable[Sequence[int]]) -> HullCertificate:
    """
    Decide whether 0 lies in the convex hull of a finite integer point set.

    Solves lambda >= 0, sum(lambda) = 1, sum(lambda m) = 0 by exact phase-one
    simplex. On infeasibility the phase-one dual (y', y0) satisfies
    y'.m + y0 <= 0 for every point with y0 > 0, so v = -y'/y0 separates.
    """
    points, dimension = _prepare_points(spectrum)

    A = [[Fraction(p[d]) for p in points] for d in range(dimension)]
    A.append([Fraction(1)] * len(points))
    b = [Fraction(0)] * dimension + [Fraction(1)]

    result = phase_one(A, b)
    if result.feasible:
        certificate = HullCertificate(ORIGIN_INSIDE, tuple(points), inside_witness=tuple(result.solution))
    else:
        y0 = result.dual[dimension]
        v = [-result.dual[d] / y0 for d in range(dimension)]
        smallest = min(_dot(v, p) for p in points)
        v = tuple(value / smallest for value in v)
        certificate = HullCertificate(ORIGIN_OUTSIDE, tuple(points), separating_vector=v)

    if not verify_certificate(points, certificate):
        raise CertificateError(f"Hull certificate failed its exact check for {points}")

    logger.debug(f"Hull of {len(points)} points in Z^{dimension}: {certificate.verdict} ({result.pivots} pivots)")
    return certificate


def carat_hull_oracle(spectrum: Iterable[Sequence[int]]) -> Tuple[bool, Optional[dict]]:
    """
    Brute force over point subsets of size <= M+1: the origin is in the hull
    iff some such subset admits exact nonnegative barycentric weights.
    """
    points, dimension = _prepare_points(spectrum)
    for size in range(1, min(len(points), dimension + 1) + 1):
        for subset in combinations(points, size):
            A = [[Fraction(p[d]) for p in subset] for d in range(dimension)]
            A.append([Fraction(1)] * size)
            b = [Fraction(0)] * dimension + [Fraction(1)]
            weights = solve_linear_system(A, b)
            if weights is not None and all(value >= 0 for value in weights):
                return True, dict(zip(subset, weights))
    return False, None


def vanishing_threshold(sp_f: Iterable[Sequence[int]], sp_g: Iterable[Sequence[int]], v: Sequence) -> int:
    """
    Smallest n0 from the separating inequality: every exponent of f^n has
    v.m >= n, so Sp(f^n) misses -Sp(g) once n > max(-v.m') over Sp(g).
    """
    v = [Fraction(value) for value in v]
    for m in sp_f:
        if len(m) != len(v):
            raise DimensionMismatch(f"Spectrum point {tuple(m)} and separator differ in length", field="v")
        if _dot(v, m) < 1:
            raise InvalidSeparator(f"v.m = {_dot(v, m)} < 1 for m = {tuple(m)}", field="v")

    sp_g = list(sp_g)
    if not sp_g:
        return 1
    reach = max(-_dot(v, m) for m in sp_g)
    return 1 + max(0, math.floor(reach))


def power_integral_sequence(f: LaurentPoly, measure: MeasureSpec, n_max: int) -> List[GaussianRational]:
    """Exact weighted integrals of f^n for n = 1..n_max"""
    n_max = validate_positive_int(n_max, "n_max")
    values = []
    current = f
    for n in range(1, n_max + 1):
        if n > 1:
            current = current * f
        values.append(weighted_integral(current, measure))
    return values


@dataclass
class MathieuReport:
    group: str
    f_reduced: LaurentPoly
    g_reduced: LaurentPoly
    spectrum: List[tuple]
    power_integrals: List[GaussianRational]
    certificate: Optional[HullCertificate] = None
    n0: Optional[int] = None
    checked_window: Optional[Tuple[int, int]] = None
    mixed_integrals: List[GaussianRational] = field(default_factory=list)
    heuristic_roots: List[float] = field(default_factory=list)
    conclusion: str = ""
    variable_names: Optional[List[str]] = None

    @property
    def hypothesis_holds(self):
        return all(value.is_zero() for value in self.power_integrals)

    @property
    def first_nonzero_power(self):
        return next((n for n, value in enumerate(self.power_integrals, start=1) if not value.is_zero()), None)

    @property
    def conclusion_verified(self):
        return bool(self.mixed_integrals) and all(value.is_zero() for value in self.mixed_integrals)

    def to_json(self):
        return {
            "group": self.group,
            "f_reduced": self.f_reduced.to_json(self.variable_names),
            "g_reduced": self.g_reduced.to_json(self.variable_names),
            "spectrum": [encode_vector(m) for m in self.spectrum],
            "power_integrals": [encode_gaussian(value) for value in self.power_integrals],
            "hypothesis_holds": self.hypothesis_holds,
            "first_nonzero_power": self.first_nonzero_power,
            "hull": self.certificate.to_json() if self.certificate else None,
            "n0": self.n0,
            "checked_window": list(self.checked_window) if self.checked_window else None,
            "mixed_integrals": [encode_gaussian(value) for value in self.mixed_integrals],
            "conclusion_verified": self.conclusion_verified,
            "heuristic": {
                "label": "heuristic: |integral of f^n|^(1/n), floating point, not evidence",
                "values": self.heuristic_roots,
            },
            "conclusion": self.conclusion,
        }


def root_modulus(value: GaussianRational, n: int) -> float:
    """|value|^(1/n), taken in log space since exact integrals outgrow floats"""
    squared = value.re * value.re + value.im * value.im
    if squared == 0:
        return 0.0
    exponent = (math.log(squared.numerator) - math.log(squared.denominator)) / (2 * n)
    try:
        return math.exp(exponent)
    except OverflowError:
        return math.inf


def _as_expression(value):
    if value is None:
        return const(1)
    if isinstance(value, Expr):
        return value
    return parse_expression(value)


def mathieu_report(f, g, spec: GroupSpec, n_max: int, words: Optional[Sequence] = None) -> MathieuReport:
    """Run the power-integral hypothesis check and the separating-vector conclusion for (f, g)"""
    n_max = validate_positive_int(n_max, "n_max")
    window = int(get_setting("mathieu", "verify_window", 5))

    model = GroupModel(spec, words)
    f_reduced = model.reduce(_as_expression(f))
    g_reduced = model.reduce(_as_expression(g))
    measure = model.measure

    powers = power_integral_sequence(f_reduced, measure, n_max)
    report = MathieuReport(
        group=str(spec),
        f_reduced=f_reduced,
        g_reduced=g_reduced,
        spectrum=sorted(spectrum(f_reduced)),
        power_integrals=powers,
        heuristic_roots=[root_modulus(value, n) for n, value in enumerate(powers, start=1)],
        variable_names=measure.variable_names(),
    )

    if f_reduced.is_zero():
        report.conclusion = "f reduces to zero; every integral of f^n g vanishes"
        return report

    report.certificate = origin_in_hull(report.spectrum)

    if not report.hypothesis_holds:
        report.conclusion = (
            f"hypothesis not satisfied: the integral of f^{report.first_nonzero_power} is nonzero"
        )
        return report

    if report.certificate.origin_inside:
        report.conclusion = (
            f"hypothesis holds for n <= {n_max}; the origin lies in the convex hull of Sp(f), "
            f"so no vanishing threshold follows from the spectrum"
        )
        return report

    n0 = vanishing_threshold(report.spectrum, spectrum(g_reduced), report.certificate.separating_vector)
    report.n0 = n0
    report.checked_window = (n0, n0 + window)

    current = f_reduced.power(n0)
    for n in range(n0, n0 + window + 1):
        if n > n0:
            current = current * f_reduced
        report.mixed_integrals.append(weighted_integral(current * g_reduced, measure))

    if report.conclusion_verified:
        report.conclusion = (
            f"hypothesis holds for n <= {n_max}; separating vector found, so the integral of f^n g "
            f"vanishes for all n >= {n0} (checked exactly for n = {n0}..{n0 + window})"
        )
    else:
        report.conclusion = f"inconsistent: a mixed integral in n = {n0}..{n0 + window} is nonzero"
        logger.error(f"Mixed integrals for {spec} do not vanish beyond n0 = {n0}")

    logger.info(f"Mathieu report for {spec}: {report.conclusion}")
    return report
