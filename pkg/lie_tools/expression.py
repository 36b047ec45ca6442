"""
Polynomial expressions in matrix coefficients of the defining representations.

Symbols: a<f>[i,j] is entry (i,j) of simple factor f, c<f>[i,j] its complex
conjugate, u[k]^(+-1) the k-th explicit torus coordinate. Expressions are
immutable trees evaluated either exactly (in the LaurentPoly ring) or
numerically on batches of unitary matrices.
"""
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence, Tuple

import numpy as np

from exact.laurent import GaussianRational
from utils.validation import EXPRESSION_GRAMMAR, IndexOutOfRange, ParseError

logger = logging.getLogger(__name__)


class Expr:
    """Base node"""

    def __add__(self, other):
        return Add((self, _as_expr(other)))

    def __radd__(self, other):
        return Add((_as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Neg(_as_expr(other))))

    def __mul__(self, other):
        return Mul((self, _as_expr(other)))

    def __rmul__(self, other):
        return Mul((_as_expr(other), self))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        return Pow(self, n)

    def __str__(self):
        return format_expression(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: GaussianRational


@dataclass(frozen=True, eq=True)
class Entry(Expr):
    conjugate: bool
    factor: int
    row: int
    col: int


@dataclass(frozen=True, eq=True)
class TorusCoord(Expr):
    index: int
    power: int = 1


@dataclass(frozen=True, eq=True)
class Add(Expr):
    items: Tuple[Expr, ...]


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    items: Tuple[Expr, ...]


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    item: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int


def _as_expr(value):
    if isinstance(value, Expr):
        return value
    return Const(GaussianRational.coerce(value))


def a(factor, row, col):
    return Entry(False, factor, row, col)


def c(factor, row, col):
    return Entry(True, factor, row, col)


def u(index, power=1):
    return TorusCoord(index, power)


def const(value):
    return Const(GaussianRational.coerce(value))


def evaluate(expr: Expr, symbol: Callable, constant: Callable):
    """Fold an expression into any ring whose values support + - * and **"""
    if isinstance(expr, Const):
        return constant(expr.value)
    if isinstance(expr, (Entry, TorusCoord)):
        return symbol(expr)
    if isinstance(expr, Add):
        return reduce(operator.add, (evaluate(item, symbol, constant) for item in expr.items))
    if isinstance(expr, Mul):
        return reduce(operator.mul, (evaluate(item, symbol, constant) for item in expr.items))
    if isinstance(expr, Neg):
        return -evaluate(expr.item, symbol, constant)
    if isinstance(expr, Pow):
        return evaluate(expr.base, symbol, constant) ** expr.exponent
    raise TypeError(f"Unknown expression node {type(expr).__name__}")


def expression_degree(expr: Expr) -> int:
    """Total degree in entries, conjugate entries and torus coordinates"""
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, (Entry, TorusCoord)):
        return 1
    if isinstance(expr, Add):
        return max(expression_degree(item) for item in expr.items)
    if isinstance(expr, Mul):
        return sum(expression_degree(item) for item in expr.items)
    if isinstance(expr, Neg):
        return expression_degree(expr.item)
    return expr.exponent * expression_degree(expr.base)


def conjugate_expression(expr: Expr) -> Expr:
    """Pointwise complex conjugate: swaps a and c, conjugates constants, inverts torus powers"""
    if isinstance(expr, Const):
        return Const(expr.value.conjugate())
    if isinstance(expr, Entry):
        return Entry(not expr.conjugate, expr.factor, expr.row, expr.col)
    if isinstance(expr, TorusCoord):
        return TorusCoord(expr.index, -expr.power)
    if isinstance(expr, Add):
        return Add(tuple(conjugate_expression(item) for item in expr.items))
    if isinstance(expr, Mul):
        return Mul(tuple(conjugate_expression(item) for item in expr.items))
    if isinstance(expr, Neg):
        return Neg(conjugate_expression(expr.item))
    return Pow(conjugate_expression(expr.base), expr.exponent)


def iter_symbols(expr: Expr):
    if isinstance(expr, (Entry, TorusCoord)):
        yield expr
    elif isinstance(expr, (Add, Mul)):
        for item in expr.items:
            yield from iter_symbols(item)
    elif isinstance(expr, Neg):
        yield from iter_symbols(expr.item)
    elif isinstance(expr, Pow):
        yield from iter_symbols(expr.base)


def validate_expression(expr: Expr, factor_dims: Sequence[int], torus_dim: int):
    """Check every symbol against the declared factors (matrix sizes) and torus"""
    for symbol in iter_symbols(expr):
        if isinstance(symbol, TorusCoord):
            if not 1 <= symbol.index <= torus_dim:
                raise IndexOutOfRange(f"u[{symbol.index}] but the torus has dimension {torus_dim}", field="expr")
            continue
        if not 1 <= symbol.factor <= len(factor_dims):
            raise IndexOutOfRange(
                f"Factor {symbol.factor} referenced but the group has {len(factor_dims)} simple factors",
                field="expr",
            )
        n = factor_dims[symbol.factor - 1]
        if not (1 <= symbol.row <= n and 1 <= symbol.col <= n):
            raise IndexOutOfRange(
                f"Entry [{symbol.row},{symbol.col}] outside the {n}x{n} matrix of factor {symbol.factor}",
                field="expr",
            )


def format_expression(expr: Expr) -> str:
    if isinstance(expr, Const):
        value = expr.value
        if value.im == 0:
            return str(value.re) if value.re >= 0 else f"({value.re})"
        if value.re == 0 and value.im == 1:
            return "i"
        return f"({value.re}+{value.im}*i)" if value.re != 0 else f"({value.im}*i)"
    if isinstance(expr, Entry):
        return f"{'c' if expr.conjugate else 'a'}{expr.factor}[{expr.row},{expr.col}]"
    if isinstance(expr, TorusCoord):
        return f"u[{expr.index}]" if expr.power == 1 else f"u[{expr.index}]^-1"
    if isinstance(expr, Add):
        return "(" + " + ".join(format_expression(item) for item in expr.items) + ")"
    if isinstance(expr, Mul):
        return "*".join(format_expression(item) for item in expr.items)
    if isinstance(expr, Neg):
        return f"(-1)*{format_expression(expr.item)}"
    return f"({format_expression(expr.base)})^{expr.exponent}"


class _Parser:
    """Recursive-descent parser for the expression grammar"""

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise ParseError(f"{message} (grammar: {EXPRESSION_GRAMMAR})", self.text, self.pos, field="expr")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char):
        if self.peek() != char:
            self.error(f"Expected {char!r}")
        self.pos += 1

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("Expected a natural number")
        return int(self.text[start:self.pos])

    def parse(self):
        expr = self.expr()
        if self.peek():
            self.error(f"Unexpected {self.peek()!r}")
        return expr

    def expr(self):
        negate_first = False
        if self.peek() == '-':
            self.pos += 1
            negate_first = True
        first = self.term()
        items = [Neg(first) if negate_first else first]
        while self.peek() in ('+', '-'):
            sign = self.text[self.pos]
            self.pos += 1
            term = self.term()
            items.append(term if sign == '+' else Neg(term))
        return items[0] if len(items) == 1 else Add(tuple(items))

    def term(self):
        items = [self.factor()]
        while self.peek() == '*':
            self.pos += 1
            items.append(self.factor())
        return items[0] if len(items) == 1 else Mul(tuple(items))

    def factor(self):
        atom = self.atom()
        if self.peek() == '^':
            self.pos += 1
            if isinstance(atom, TorusCoord) and self.peek() == '-':
                self.error("Torus inverse is written u[k]^-1 directly after the bracket")
            return Pow(atom, self.nat())
        return atom

    def atom(self):
        char = self.peek()
        if char == '(':
            self.pos += 1
            inner = self.expr()
            self.expect(')')
            return inner
        if char.isdigit():
            numerator = self.nat()
            if self.peek() == '/':
                self.pos += 1
                denominator = self.nat()
                if denominator == 0:
                    self.error("Zero denominator")
                return Const(GaussianRational(Fraction(numerator, denominator)))
            return Const(GaussianRational(numerator))
        if char == 'i':
            self.pos += 1
            return Const(GaussianRational(0, 1))
        if char in ('a', 'c'):
            self.pos += 1
            factor = self.nat() if self.peek().isdigit() else 1
            self.expect('[')
            row = self.nat()
            self.expect(',')
            col = self.nat()
            self.expect(']')
            return Entry(char == 'c', factor, row, col)
        if char == 'u':
            self.pos += 1
            self.expect('[')
            index = self.nat()
            self.expect(']')
            if self.peek() == '^':
                mark = self.pos
                self.pos += 1
                if self.peek() == '-':
                    self.pos += 1
                    if self.nat() != 1:
                        self.error("Only ^-1 inverts a torus coordinate")
                    return TorusCoord(index, -1)
                # a plain power, left to the factor rule
                self.pos = mark
            return TorusCoord(index, 1)
        self.error("Expected a rational, 'i', a[..], c[..], u[..] or '('")


def parse_expression(text: str) -> Expr:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("Empty expression", field="expr")
    return _Parser(text).parse()


def evaluate_numeric(expr: Expr, matrices: Sequence[np.ndarray], phases: np.ndarray) -> np.ndarray:
    """
    Evaluate on a batch: matrices[f] has shape (S, n_f, n_f), phases (S, T).
    Returns a complex array of shape (S,).
    """
    if matrices:
        samples = matrices[0].shape[0]
    else:
        samples = phases.shape[0]

    def symbol(node):
        if isinstance(node, TorusCoord):
            values = phases[:, node.index - 1]
            return values if node.power == 1 else np.conj(values)
        values = matrices[node.factor - 1][:, node.row - 1, node.col - 1]
        return np.conj(values) if node.conjugate else values

    result = evaluate(expr, symbol, complex)
    return np.broadcast_to(np.asarray(result, dtype=complex), (samples,))


def random_expression(rng: np.random.Generator, factor_dims: Sequence[int], max_degree: int,
                      torus_dim: int = 0, max_terms: int = 3) -> Expr:
    """
    Seeded random polynomial expression of total degree <= max_degree.

    Monomials mix conjugate pairs a[i,j]*c[k,l] (often with nonzero integral)
    with unpaired symbols; coefficients are small Gaussian rationals.
    """
    def random_entry(conjugate):
        factor = int(rng.integers(1, len(factor_dims) + 1))
        n = factor_dims[factor - 1]
        return Entry(conjugate, factor, int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1)))

    def random_symbol():
        if torus_dim and rng.random() < 0.2:
            return TorusCoord(int(rng.integers(1, torus_dim + 1)), int(rng.choice([-1, 1])))
        return random_entry(bool(rng.integers(0, 2)))

    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        degree = int(rng.integers(0, max_degree + 1))
        factors = []
        while len(factors) + 2 <= degree and rng.random() < 0.7:
            factors.extend([random_entry(False), random_entry(True)])
        while len(factors) < degree:
            factors.append(random_symbol())

        numerator = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        denominator = int(rng.choice([1, 2, 3]))
        coeff = GaussianRational(Fraction(numerator, denominator))
        if rng.random() < 0.25:
            coeff = coeff * GaussianRational(0, 1)

        factors = [Const(coeff)] + factors
        terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))

    return terms[0] if len(terms) == 1 else Add(tuple(terms))
