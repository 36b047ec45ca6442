"""
Coordinate models for SU(n) factors.

The exact model substitutes each entry of the defining representation by a
LaurentPoly built from embedded determinant-one 2x2 blocks

    B(x, w) = [[i w (1 - x^2), i x], [i x, -i w^-1]]

and a diagonal torus part. Conjugate entries use the inverse-transpose block
so that Q * Qc^T = I holds identically. The numeric model uses the unitary
square-root block instead and returns genuine special unitary matrices.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from exact.laurent import GaussianRational, LaurentPoly, weighted_integral
from lie_tools.expression import Entry, Expr, evaluate, iter_symbols, validate_expression
from lie_tools.measure import FactorLayout, GroupSpec, MeasureSpec, measure_spec
from lie_tools.rootsystem import build_root_system
from lie_tools.weyl import ReducedWord, reduced_word
from utils.settings import get_setting
from utils.validation import (
    DimensionMismatch,
    DomainError,
    UnsupportedFactor,
    validate_unit_interval,
    validate_unit_modulus,
)

logger = logging.getLogger(__name__)

Matrix = List[List[LaurentPoly]]

I_UNIT = GaussianRational(0, 1)


def identity(n, n_x, n_circle) -> Matrix:
    one = LaurentPoly.one(n_x, n_circle)
    zero = LaurentPoly.zero(n_x, n_circle)
    return [[one if r == c else zero for c in range(n)] for r in range(n)]


def transpose(matrix: Matrix) -> Matrix:
    return [list(column) for column in zip(*matrix)]


def matmul(left: Matrix, right: Matrix) -> Matrix:
    size = len(right)
    if any(len(row) != size for row in left):
        raise DimensionMismatch("Inner matrix dimensions differ")
    result = []
    for row in left:
        out_row = []
        for c in range(len(right[0])):
            total = row[0] * right[0][c]
            for k in range(1, size):
                total = total + row[k] * right[k][c]
            out_row.append(total)
        result.append(out_row)
    return result


def _permutation_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(matrix: Matrix) -> LaurentPoly:
    """Leibniz expansion; intended for the small matrices of SU(n) factors"""
    n = len(matrix)
    total = None
    for perm in permutations(range(n)):
        term = matrix[0][perm[0]]
        for r in range(1, n):
            term = term * matrix[r][perm[r]]
        if _permutation_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class CoordinateMatrixPair:
    """Q and its conjugate-substituted partner Qc for one SU(n) factor"""

    Q: Tuple[Tuple[LaurentPoly, ...], ...]
    Qc: Tuple[Tuple[LaurentPoly, ...], ...]
    word: ReducedWord
    layout: FactorLayout

    @property
    def size(self):
        return len(self.Q)

    def determinant(self):
        return determinant([list(row) for row in self.Q])

    def gram(self):
        """Q * Qc^T, identically the identity matrix"""
        return matmul([list(row) for row in self.Q], transpose([list(row) for row in self.Qc]))

    def identities_hold(self):
        n_x, n_circle = self.Q[0][0].n_x, self.Q[0][0].n_circle
        expected = identity(self.size, n_x, n_circle)
        return self.determinant() == 1 and self.gram() == expected


def _block_polys(layout: FactorLayout, j, n_x, n_circle):
    """B(x_j, w_j) and Bc(x_j, w_j) as 2x2 LaurentPoly blocks"""
    x = LaurentPoly.x_variable(n_x, n_circle, layout.x_indices[j])
    w = LaurentPoly.circle_variable(n_x, n_circle, layout.w_indices[j])
    w_inv = LaurentPoly.circle_variable(n_x, n_circle, layout.w_indices[j], -1)
    one_minus_x2 = 1 - x * x

    ix = x * I_UNIT
    diagonal = w * one_minus_x2 * I_UNIT
    anti = w_inv * (-I_UNIT)

    block = ((diagonal, ix), (ix, anti))
    conjugate_block = ((anti, -ix), (-ix, diagonal))
    return block, conjugate_block


def _right_multiply_block(matrix: Matrix, i, block):
    """matrix <- matrix * E_i(block) for the 0-based row/column pair (i, i+1)"""
    (b00, b01), (b10, b11) = block
    for row in matrix:
        left, right = row[i], row[i + 1]
        row[i] = left * b00 + right * b10
        row[i + 1] = left * b01 + right * b11


def _torus_columns(layout: FactorLayout, n_x, n_circle, inverse=False):
    sign = -1 if inverse else 1
    scales = [LaurentPoly.circle_variable(n_x, n_circle, k, sign) for k in layout.z_indices]
    last = LaurentPoly.one(n_x, n_circle)
    for k in layout.z_indices:
        last = last * LaurentPoly.circle_variable(n_x, n_circle, k, -sign)
    return scales + [last]


def coordinate_matrix(factor, word, measure: MeasureSpec, position: int = 1) -> CoordinateMatrixPair:
    """
    Q = E_{i_1}(B(x_1,w_1)) ... E_{i_L}(B(x_L,w_L)) * psi(z) for the SU(n)
    factor at the given 1-based position of the measure, together with Qc.
    """
    type_label, rank = factor
    if type_label != 'A':
        raise UnsupportedFactor(
            f"No coordinate model for {type_label}{rank}; only SU(n) factors are supported",
            field="group",
        )

    layout = measure.factor_layout(position)
    if (layout.root_system.type_label, layout.rank) != (type_label, rank):
        raise DimensionMismatch(
            f"Factor {position} of the measure is {layout.root_system.label}, not {type_label}{rank}",
            field="group",
        )
    if word is None:
        word = layout.word
    letters = tuple(word.letters if isinstance(word, ReducedWord) else word)
    if letters != layout.word.letters:
        raise DimensionMismatch(
            f"Word {list(letters)} differs from the measure's word {list(layout.word.letters)}",
            field="words",
        )

    n = rank + 1
    n_x, n_circle = measure.n_x, measure.n_circle
    Q = identity(n, n_x, n_circle)
    Qc = identity(n, n_x, n_circle)

    for j, letter in enumerate(letters):
        block, conjugate_block = _block_polys(layout, j, n_x, n_circle)
        _right_multiply_block(Q, letter - 1, block)
        _right_multiply_block(Qc, letter - 1, conjugate_block)

    for column, scale in enumerate(_torus_columns(layout, n_x, n_circle)):
        for row in Q:
            row[column] = row[column] * scale
    for column, scale in enumerate(_torus_columns(layout, n_x, n_circle, inverse=True)):
        for row in Qc:
            row[column] = row[column] * scale

    logger.debug(f"Coordinate matrices for SU({n}) with word {list(letters)} built")
    return CoordinateMatrixPair(
        Q=tuple(tuple(row) for row in Q),
        Qc=tuple(tuple(row) for row in Qc),
        word=layout.word,
        layout=layout,
    )


class GroupModel:
    """Measure and coordinate matrices of one GroupSpec, reused across expressions"""

    def __init__(self, spec: GroupSpec, words: Optional[Sequence] = None, form_scale=Fraction(1)):
        self.spec = spec
        self.measure = measure_spec(spec, words, form_scale)
        self._pairs: Dict[int, CoordinateMatrixPair] = {}

    @property
    def factor_dims(self):
        return [rank + 1 if t == 'A' else 0 for t, rank in self.spec.simple_factors]

    def pair(self, position) -> CoordinateMatrixPair:
        if position not in self._pairs:
            factor = self.spec.simple_factors[position - 1]
            self._pairs[position] = coordinate_matrix(factor, None, self.measure, position)
        return self._pairs[position]

    def validate(self, expr: Expr):
        for symbol in iter_symbols(expr):
            if isinstance(symbol, Entry) and 1 <= symbol.factor <= len(self.spec.simple_factors):
                type_label, rank = self.spec.simple_factors[symbol.factor - 1]
                if type_label != 'A':
                    raise UnsupportedFactor(
                        f"Factor {symbol.factor} is {type_label}{rank}; expressions need SU(n) factors",
                        field="expr",
                    )
        validate_expression(expr, self.factor_dims, self.spec.torus_dim)

    def reduce(self, expr: Expr) -> LaurentPoly:
        """The square-root-free reduction f -> f~ as a LaurentPoly"""
        self.validate(expr)
        n_x, n_circle = self.measure.n_x, self.measure.n_circle

        def symbol(node):
            if isinstance(node, Entry):
                pair = self.pair(node.factor)
                matrix = pair.Qc if node.conjugate else pair.Q
                return matrix[node.row - 1][node.col - 1]
            k = self.measure.torus_indices[node.index - 1]
            return LaurentPoly.circle_variable(n_x, n_circle, k, node.power)

        def constant(value):
            return LaurentPoly.constant(n_x, n_circle, value)

        return evaluate(expr, symbol, constant)

    def integrate(self, expr: Expr) -> GaussianRational:
        return weighted_integral(self.reduce(expr), self.measure)


def reduce_function(f: Expr, spec: GroupSpec, words: Optional[Sequence] = None) -> LaurentPoly:
    return GroupModel(spec, words).reduce(f)


def integrate_expression(f: Expr, spec: GroupSpec, words: Optional[Sequence] = None) -> GaussianRational:
    """Exact Haar integral of a matrix-coefficient expression"""
    return GroupModel(spec, words).integrate(f)


def _unitary_blocks(x, w):
    """Unitary square-root blocks for arrays x, w of shape (S,)"""
    root = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    return (
        (1j * w * root, 1j * x),
        (1j * x, -1j * np.conj(w) * root),
    )


def numeric_points(rank: int, letters: Sequence[int], x: np.ndarray, w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    Batched unitary chart for SU(rank+1).

    x, w have shape (S, L) and z has shape (S, rank); the result has shape
    (S, rank+1, rank+1). Inputs are assumed to lie in the domain.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    samples = x.shape[0]
    n = rank + 1

    Q = np.broadcast_to(np.eye(n, dtype=complex), (samples, n, n)).copy()
    for j, letter in enumerate(letters):
        i = letter - 1
        (b00, b01), (b10, b11) = _unitary_blocks(x[:, j], w[:, j])
        left = Q[:, :, i].copy()
        right = Q[:, :, i + 1]
        Q[:, :, i] = left * b00[:, None] + right * b10[:, None]
        Q[:, :, i + 1] = left * b01[:, None] + right * b11[:, None]

    # psi(z) with |z| = 1, so the inverse is the conjugate
    last = np.prod(np.conj(z), axis=1) if rank else np.ones(samples, dtype=complex)
    scales = np.concatenate([z, last[:, None]], axis=1)
    return Q * scales[:, None, :]


def numeric_point(factor, word, x, w, z) -> np.ndarray:
    """Special unitary matrix of the chart at one point (x, w, z)"""
    type_label, rank = factor
    if type_label != 'A':
        raise UnsupportedFactor(f"No coordinate model for {type_label}{rank}", field="group")
    rs = build_root_system(type_label, rank)
    letters = word.letters if isinstance(word, ReducedWord) else reduced_word(rs, word, require_longest=True).letters

    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z = np.atleast_1d(np.asarray(z, dtype=complex)) if rank else np.zeros(0, dtype=complex)
    if x.shape != (len(letters),) or w.shape != (len(letters),) or z.shape != (rank,):
        raise DomainError(
            f"Expected {len(letters)} x, {len(letters)} w and {rank} z values", field="point"
        )

    validate_unit_interval(x, "x")
    tolerance = get_setting("tolerances", "unit_circle", 1e-12)
    validate_unit_modulus(w, "w", tolerance)
    validate_unit_modulus(z, "z", tolerance)

    return numeric_points(rank, letters, x[None, :], w[None, :], z[None, :])[0]
