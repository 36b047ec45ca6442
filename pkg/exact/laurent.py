"""
Exact sparse polynomials over the Gaussian rationals Q(i).

A LaurentPoly lives in C[x_1..x_N, t_1^{+-1}..t_M^{+-1}]: polynomial in the
N x-variables (real, [0,1]-valued) and Laurent in the M circle variables.
Terms are stored as a map from one flat exponent tuple (x-part first, then
circle part) to a nonzero GaussianRational.
"""
import logging
import math
from fractions import Fraction
from operator import add
from typing import Dict, Iterable, Optional, Sequence, Tuple

from utils.serialization import decode_gaussian, decode_int, encode_gaussian
from utils.validation import DimensionMismatch, ValidationError

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


def _to_float(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:
        return math.inf if q > 0 else -math.inf


class GaussianRational:
    """Exact element re + i*im of Q(i)"""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls(Fraction(value))
        if isinstance(value, complex) and value.real.is_integer() and value.imag.is_integer():
            return cls(int(value.real), int(value.imag))
        raise TypeError(f"Cannot use {value!r} as an exact Gaussian rational")

    @classmethod
    def i(cls):
        return cls(0, 1)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        product = self * other.conjugate()
        return GaussianRational(product.re / norm, product.im / norm)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValidationError("Only nonnegative integer powers are supported", field="power")
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(_to_float(self.re), _to_float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if self.re == 0:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"({self.re}{sign}{imag})"


ONE = GaussianRational(1)
ZERO = GaussianRational(0)
I = GaussianRational(0, 1)


class LaurentPoly:
    """Sparse exact polynomial in x-variables, Laurent in circle variables"""

    __slots__ = ("n_x", "n_circle", "_terms")

    def __init__(self, n_x: int, n_circle: int, terms: Optional[Dict[Exponents, object]] = None):
        self.n_x = n_x
        self.n_circle = n_circle
        cleaned: Dict[Exponents, GaussianRational] = {}
        width = n_x + n_circle

        for exponents, coeff in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != width:
                raise DimensionMismatch(
                    f"Exponent vector of length {len(exponents)} for {n_x}+{n_circle} variables",
                    field="exponents",
                )
            if any(e < 0 for e in exponents[:n_x]):
                raise ValidationError("x-exponents must be nonnegative", field="exponents")
            coeff = GaussianRational.coerce(coeff)
            if not coeff.is_zero():
                cleaned[exponents] = coeff

        self._terms = cleaned

    @classmethod
    def _raw(cls, n_x, n_circle, terms):
        # trusted constructor: terms already validated and zero-free
        poly = cls.__new__(cls)
        poly.n_x = n_x
        poly.n_circle = n_circle
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, n_x, n_circle):
        return cls._raw(n_x, n_circle, {})

    @classmethod
    def constant(cls, n_x, n_circle, value=1):
        value = GaussianRational.coerce(value)
        if value.is_zero():
            return cls.zero(n_x, n_circle)
        return cls._raw(n_x, n_circle, {(0,) * (n_x + n_circle): value})

    @classmethod
    def one(cls, n_x, n_circle):
        return cls.constant(n_x, n_circle, 1)

    @classmethod
    def x_variable(cls, n_x, n_circle, j, power=1):
        """x_j (0-based) raised to a nonnegative power"""
        if not 0 <= j < n_x:
            raise DimensionMismatch(f"x-variable {j} outside 0..{n_x - 1}", field="variable")
        exponents = [0] * (n_x + n_circle)
        exponents[j] = power
        return cls(n_x, n_circle, {tuple(exponents): 1})

    @classmethod
    def circle_variable(cls, n_x, n_circle, k, power=1):
        """circle variable k (0-based) raised to a signed power"""
        if not 0 <= k < n_circle:
            raise DimensionMismatch(f"circle variable {k} outside 0..{n_circle - 1}", field="variable")
        exponents = [0] * (n_x + n_circle)
        exponents[n_x + k] = power
        return cls._raw(n_x, n_circle, {tuple(exponents): ONE})

    @property
    def terms(self):
        """Terms in canonical (sorted exponent) order"""
        return [(exponents, self._terms[exponents]) for exponents in sorted(self._terms)]

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, exponents):
        return self._terms.get(tuple(exponents), ZERO)

    def _check_compatible(self, other):
        if (self.n_x, self.n_circle) != (other.n_x, other.n_circle):
            raise DimensionMismatch(
                f"Variable counts differ: ({self.n_x},{self.n_circle}) vs ({other.n_x},{other.n_circle})"
            )

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check_compatible(other)
            return other
        return LaurentPoly.constant(self.n_x, self.n_circle, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        result = dict(self._terms)
        for exponents, coeff in other._terms.items():
            total = result.get(exponents, ZERO) + coeff
            if total.is_zero():
                result.pop(exponents, None)
            else:
                result[exponents] = total
        return LaurentPoly._raw(self.n_x, self.n_circle, result)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(
            self.n_x, self.n_circle, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scalar_multiply(self, scalar):
        scalar = GaussianRational.coerce(scalar)
        if scalar.is_zero():
            return LaurentPoly.zero(self.n_x, self.n_circle)
        return LaurentPoly._raw(
            self.n_x, self.n_circle, {e: c * scalar for e, c in self._terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                return self.scalar_multiply(other)
            except TypeError:
                return NotImplemented
        self._check_compatible(other)

        result: Dict[Exponents, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponents = tuple(map(add, e1, e2))
                current = result.get(exponents)
                result[exponents] = c1 * c2 if current is None else current + c1 * c2

        return LaurentPoly._raw(
            self.n_x, self.n_circle, {e: c for e, c in result.items() if not c.is_zero()}
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def power(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValidationError("Power must be a nonnegative integer", field="power")
        result = LaurentPoly.one(self.n_x, self.n_circle)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __pow__(self, n):
        return self.power(n)

    def conjugate(self):
        """Complex conjugation with |circle variable| = 1 and real x-variables"""
        n_x = self.n_x
        result = {}
        for exponents, coeff in self._terms.items():
            flipped = exponents[:n_x] + tuple(-e for e in exponents[n_x:])
            result[flipped] = coeff.conjugate()
        return LaurentPoly._raw(self.n_x, self.n_circle, result)

    def spectrum(self):
        """Circle-exponent vectors whose x-coefficient polynomial is nonzero"""
        return frozenset(exponents[self.n_x:] for exponents in self._terms)

    def constant_term_in_circle(self):
        """The x-polynomial c_0 multiplying the zero circle monomial"""
        zero = (0,) * self.n_circle
        return LaurentPoly._raw(
            self.n_x,
            self.n_circle,
            {e: c for e, c in self._terms.items() if e[self.n_x:] == zero},
        )

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return (
                (self.n_x, self.n_circle) == (other.n_x, other.n_circle)
                and self._terms == other._terms
            )
        try:
            return self == LaurentPoly.constant(self.n_x, self.n_circle, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n_x, self.n_circle, frozenset(self._terms.items())))

    def variable_names(self):
        return [f"x{j + 1}" for j in range(self.n_x)] + [f"t{k + 1}" for k in range(self.n_circle)]

    def to_text(self, names: Optional[Sequence[str]] = None):
        """Canonical text form: sorted monomials joined by ' + '"""
        if not self._terms:
            return "0"
        names = list(names) if names is not None else self.variable_names()
        monomials = []
        for exponents, coeff in self.terms:
            factors = []
            for name, e in zip(names, exponents):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            if not factors:
                monomials.append(str(coeff))
            elif coeff == 1:
                monomials.append("*".join(factors))
            else:
                monomials.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(monomials)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentPoly({self.n_x}, {self.n_circle}, {self.to_text()!r})"

    def to_json(self, names: Optional[Sequence[str]] = None):
        return {
            "n_x": self.n_x,
            "n_circle": self.n_circle,
            "text": self.to_text(names),
            "terms": [
                {"exponents": list(exponents), "coeff": encode_gaussian(coeff)}
                for exponents, coeff in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data):
        terms = {
            tuple(decode_int(e) for e in term["exponents"]): decode_gaussian(term["coeff"])
            for term in data["terms"]
        }
        return cls(int(data["n_x"]), int(data["n_circle"]), terms)


def weighted_integral(p: LaurentPoly, measure) -> GaussianRational:
    """
    Exact value of A * int_{[0,1]^N x T^M} p * prod_j x_j^(2e_j - 1) dx dt.

    Circle integration uses the normalized Haar measure, i.e. it keeps only
    the terms whose circle exponent vector is zero; each x_j^a integrates
    against x_j^(2e_j - 1) to 1/(a + 2e_j).
    """
    if (p.n_x, p.n_circle) != (measure.n_x, measure.n_circle):
        raise DimensionMismatch(
            f"Polynomial has ({p.n_x},{p.n_circle}) variables, measure expects "
            f"({measure.n_x},{measure.n_circle})"
        )

    n_x = p.n_x
    exponents_2e = [2 * e for e in measure.exponents]
    zero = (0,) * p.n_circle
    re_total = Fraction(0)
    im_total = Fraction(0)

    for exponents, coeff in p._terms.items():
        if exponents[n_x:] != zero:
            continue
        denominator = 1
        for a, two_e in zip(exponents[:n_x], exponents_2e):
            denominator *= a + two_e
        re_total += coeff.re / denominator
        im_total += coeff.im / denominator

    constant = Fraction(measure.constant)
    return GaussianRational(re_total * constant, im_total * constant)


def spectrum(p: LaurentPoly):
    return p.spectrum()


def minkowski_sum(first: Iterable[Exponents], second: Iterable[Exponents]):
    """Pointwise sums of two finite exponent sets"""
    second = list(second)
    return frozenset(tuple(map(add, a, b)) for a in first for b in second)
