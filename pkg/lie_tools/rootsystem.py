"""
Root-system data for the simple types A-G.

Roots are written in the basis of simple roots, so every root is an integer
vector and the invariant form is the Gram matrix (alpha_i, alpha_j), with long
roots of squared length 2.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from sympy.liealgebras.cartan_type import CartanType

from utils.validation import (
    InvalidType,
    NonIntegralExponent,
    NotARoot,
    validate_form_scale,
    validate_type_rank,
)

logger = logging.getLogger(__name__)

Vector = Tuple

EXCEPTIONAL_POSITIVE_ROOTS = {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "G2": 6}


def _normalize(vector):
    """Integral Fractions become ints so that roots are plain integer tuples"""
    return tuple(int(v) if Fraction(v).denominator == 1 else Fraction(v) for v in vector)


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    simple_roots: Tuple[Vector, ...]
    positive_roots: Tuple[Vector, ...]
    form: Tuple[Tuple[Fraction, ...], ...]
    rho: Tuple[Fraction, ...]
    _positive_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_positive_set", frozenset(self.positive_roots))

    @property
    def label(self):
        return f"{self.type_label}{self.rank}"

    @property
    def dimension(self):
        """Dimension of the compact simple group: rank + 2|positive roots|"""
        return self.rank + 2 * len(self.positive_roots)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = self.form[i]
            for j, vj in enumerate(v):
                if vj != 0:
                    total += ui * row[j] * vj
        return total

    def squared_length(self, v):
        return self.inner(v, v)

    def coroot_pairing(self, v, i) -> Fraction:
        """2(v, alpha_i)/(alpha_i, alpha_i) for the 0-based simple root i"""
        column = sum((Fraction(vj) * self.form[j][i] for j, vj in enumerate(v)), Fraction(0))
        return 2 * column / self.form[i][i]

    def reflect(self, v, i):
        """Simple reflection s_i applied to v"""
        shift = self.coroot_pairing(v, i)
        result = list(v)
        result[i] = result[i] - shift
        return _normalize(result)

    @staticmethod
    def height(v):
        return sum(v)

    def is_positive_root(self, v):
        return _normalize(v) in self._positive_set

    @property
    def highest_root(self):
        return max(self.positive_roots, key=lambda root: (self.height(root), root))

    @property
    def cartan_matrix(self):
        return tuple(
            tuple(int(2 * self.form[i][j] / self.form[i][i]) for j in range(self.rank))
            for i in range(self.rank)
        )


def expected_positive_root_count(type_label, rank):
    if type_label == 'A':
        return rank * (rank + 1) // 2
    if type_label in ('B', 'C'):
        return rank * rank
    if type_label == 'D':
        return rank * (rank - 1)
    return EXCEPTIONAL_POSITIVE_ROOTS[f"{type_label}{rank}"]


def _exact(value):
    """sympy Rationals and the dyadic floats of the E-series roots, as Fractions"""
    return Fraction(str(value))


def _dynkin_data(type_label, rank):
    """Squared lengths and the Cartan matrix, read from sympy's CartanType"""
    cartan_type = CartanType(f"{type_label}{rank}")

    lengths = []
    for i in range(1, rank + 1):
        root = cartan_type.simple_root(i)
        lengths.append(sum((_exact(c) * _exact(c) for c in root), Fraction(0)))
    longest = max(lengths)
    lengths = [2 * length / longest for length in lengths]

    # rank one: the Cartan matrix is (2)
    if rank == 1:
        return lengths, ((2,),)

    matrix = cartan_type.cartan_matrix()
    cartan = tuple(tuple(int(matrix[i, j]) for j in range(rank)) for i in range(rank))
    return lengths, cartan


def _symmetrized_form(type_label, rank, form_scale):
    """(alpha_i, alpha_j) from <alpha_i, alpha_j^vee> = 2(alpha_i, alpha_j)/(alpha_j, alpha_j)"""
    lengths, cartan = _dynkin_data(type_label, rank)
    form = [[lengths[j] * cartan[i][j] / 2 * form_scale for j in range(rank)] for i in range(rank)]

    for i in range(rank):
        for j in range(i + 1, rank):
            if form[i][j] != form[j][i]:
                raise InvalidType(
                    f"Cartan data of {type_label}{rank} does not symmetrize at ({i + 1}, {j + 1})"
                )
    return tuple(tuple(row) for row in form)


def _positive_roots(form, rank):
    """Closure of the simple roots under adding simple roots, by height"""
    scratch = RootSystem('?', rank, (), (), form, ())
    simple = [tuple(1 if k == i else 0 for k in range(rank)) for i in range(rank)]
    found = set(simple)
    ordered: List[Vector] = list(simple)
    level = simple

    while level:
        next_level = []
        for beta in level:
            for i in range(rank):
                # alpha_i-string through beta: p - q = <beta, alpha_i^vee>
                p = 0
                while True:
                    lowered = list(beta)
                    lowered[i] -= p + 1
                    if tuple(lowered) in found:
                        p += 1
                    else:
                        break
                q = p - scratch.coroot_pairing(beta, i)
                if q > 0:
                    raised = list(beta)
                    raised[i] += 1
                    raised = tuple(raised)
                    if raised not in found:
                        found.add(raised)
                        next_level.append(raised)
        next_level.sort()
        ordered.extend(next_level)
        level = next_level

    return tuple(ordered)


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int, form_scale=Fraction(1)) -> RootSystem:
    """Root-system data of a simple type; form_scale rescales the invariant form"""
    if not validate_type_rank(type_label, rank):
        raise InvalidType(f"No simple root system of type {type_label}{rank}", field="type")

    form = _symmetrized_form(type_label, rank, validate_form_scale(form_scale))

    positive = _positive_roots(form, rank)
    expected = expected_positive_root_count(type_label, rank)
    if len(positive) != expected:
        raise InvalidType(
            f"Generated {len(positive)} positive roots for {type_label}{rank}, expected {expected}"
        )

    rho = tuple(sum((Fraction(root[k]) for root in positive), Fraction(0)) / 2 for k in range(rank))
    simple = tuple(positive[:rank])

    logger.debug(f"Built root system {type_label}{rank}: {len(positive)} positive roots")
    return RootSystem(type_label, rank, simple, positive, form, rho)


def weight_exponent(rs: RootSystem, beta) -> int:
    """e = 2(rho, beta)/(beta, beta), a positive integer for every positive root"""
    beta = _normalize(beta)
    if beta not in rs._positive_set:
        raise NotARoot(f"{beta} is not a positive root of {rs.label}", field="beta")

    value = 2 * rs.inner(rs.rho, beta) / rs.squared_length(beta)
    if value.denominator != 1 or value <= 0:
        raise NonIntegralExponent(f"2(rho,beta)/(beta,beta) = {value} for beta = {beta} in {rs.label}")
    return int(value)


def dual_coxeter_number(rs: RootSystem) -> int:
    return 1 + weight_exponent(rs, rs.highest_root)


def supported_types():
    """(type, rank range) pairs accepted by build_root_system"""
    return {
        "A": "rank >= 1",
        "B": "rank >= 2",
        "C": "rank >= 2",
        "D": "rank >= 3",
        "E": "rank in {6, 7, 8}",
        "F": "rank = 4",
        "G": "rank = 2",
    }
