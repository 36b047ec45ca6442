import re
import json
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

GROUP_GRAMMAR = (
    "GROUP := FACTOR ('x' FACTOR)* ; "
    "FACTOR := 'SU(' NAT ')' | 'T^' NAT | TYPE NAT   (TYPE one of A B C D E F G)"
)

EXPRESSION_GRAMMAR = (
    "expr := ['-'] term (('+'|'-') term)* ; term := factor ('*' factor)* ; "
    "factor := atom ('^' NAT)? ; atom := RATIONAL | 'i' | 'a' NAT '[' NAT ',' NAT ']' "
    "| 'c' NAT '[' NAT ',' NAT ']' | 'u' '[' NAT ']' | 'u' '[' NAT ']' '^-1' | '(' expr ')'"
)

SIMPLE_TYPES = ('A', 'B', 'C', 'D', 'E', 'F', 'G')


class ValidationError(Exception):
    """Base error for every domain failure"""

    default_code = "VALIDATION_ERROR"

    def __init__(self, message, field=None, code=None):
        self.message = message
        self.field = field
        self.code = code or self.default_code
        super().__init__(self.message)

    def to_dict(self):
        return {"code": self.code, "field": self.field, "message": self.message}


class InvalidType(ValidationError):
    default_code = "INVALID_TYPE"


class NotARoot(ValidationError):
    default_code = "NOT_A_ROOT"


class NonIntegralExponent(ValidationError):
    """Raised when 2(rho,beta)/(beta,beta) is not an integer; signals a bug"""
    default_code = "NON_INTEGRAL_EXPONENT"


class NotReduced(ValidationError):
    default_code = "NOT_REDUCED"


class DimensionMismatch(ValidationError):
    default_code = "DIMENSION_MISMATCH"


class UnsupportedFactor(ValidationError):
    default_code = "UNSUPPORTED_FACTOR"


class IndexOutOfRange(ValidationError):
    default_code = "INDEX_OUT_OF_RANGE"


class DomainError(ValidationError):
    default_code = "DOMAIN_ERROR"


class EmptySpectrum(ValidationError):
    default_code = "EMPTY_SPECTRUM"


class InvalidSeparator(ValidationError):
    default_code = "INVALID_SEPARATOR"


class ParseError(ValidationError):
    default_code = "PARSE_ERROR"

    def __init__(self, message, text=None, position=None, field=None):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        super().__init__(message, field=field)

    def to_dict(self):
        payload = super().to_dict()
        payload["position"] = self.position
        return payload


class CertificateError(ArithmeticError):
    """An exact hull or simplex certificate failed its own check; signals a bug"""


class BudgetTooSmall(UserWarning):
    """Quadrature degree budget below the integrand degree"""


def validate_type_rank(type_label, rank):
    """Validate a (type, rank) pair of a simple root system"""
    if type_label not in SIMPLE_TYPES:
        return False
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        return False

    if type_label == 'A':
        return rank >= 1
    if type_label in ('B', 'C'):
        return rank >= 2
    if type_label == 'D':
        return rank >= 3
    if type_label == 'E':
        return rank in (6, 7, 8)
    if type_label == 'F':
        return rank == 4
    return rank == 2


_FACTOR_RE = re.compile(r"SU\((\d+)\)|T\^(\d+)|([A-G])(\d+)")


def parse_group_spec(text):
    """Parse a group string such as 'SU(3)xSU(2)xT^1' into (factors, torus_dim)"""
    if not text or not isinstance(text, str):
        raise ParseError("Empty group specification", field="group")

    source = text
    factors: List[Tuple[str, int]] = []
    torus_dim = 0
    pos = 0
    expect_factor = True

    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue

        if not expect_factor:
            if source[pos] != 'x':
                raise ParseError("Expected 'x' between factors", source, pos, field="group")
            pos += 1
            expect_factor = True
            continue

        match = _FACTOR_RE.match(source, pos)
        if not match:
            raise ParseError(f"Expected a factor ({GROUP_GRAMMAR})", source, pos, field="group")

        if match.group(1) is not None:
            n = int(match.group(1))
            if n < 2:
                raise ParseError("SU(n) requires n >= 2", source, pos, field="group")
            factors.append(('A', n - 1))
        elif match.group(2) is not None:
            torus_dim += int(match.group(2))
        else:
            type_label, rank = match.group(3), int(match.group(4))
            if not validate_type_rank(type_label, rank):
                raise InvalidType(f"Invalid simple type {type_label}{rank}", field="group")
            factors.append((type_label, rank))

        pos = match.end()
        expect_factor = False

    if expect_factor:
        raise ParseError("Group specification ends with a separator", source, len(source), field="group")

    return factors, torus_dim


def parse_words(text, n_factors):
    """Parse per-factor reduced words from JSON, e.g. '[[1,2,1], null]'"""
    if text is None or text == "":
        return None

    try:
        words = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as e:
        raise ParseError(f"Words must be a JSON list: {e.msg}", text, e.pos, field="words")

    if not isinstance(words, list):
        raise ParseError("Words must be a JSON list of integer lists", field="words")

    # a single flat word is accepted for a single simple factor
    if words and all(isinstance(letter, int) for letter in words):
        words = [words]

    if len(words) != n_factors:
        raise DimensionMismatch(
            f"Got {len(words)} words for {n_factors} simple factors", field="words"
        )

    parsed: List[Optional[Tuple[int, ...]]] = []
    for word in words:
        if word is None:
            parsed.append(None)
            continue
        if not isinstance(word, list) or not all(isinstance(letter, int) for letter in word):
            raise ParseError("Each word must be a list of integers or null", field="words")
        parsed.append(tuple(word))

    return parsed


_POINT_RE = re.compile(r"\(([^()]*)\)")


def parse_spectrum(text):
    """Parse '[(1,0),(-1,0)]' into a list of integer tuples"""
    if not text or not isinstance(text, str):
        raise ParseError("Empty spectrum", field="spectrum")

    stripped = text.strip()
    if not (stripped.startswith('[') and stripped.endswith(']')):
        raise ParseError("Spectrum must be enclosed in [ ]", text, 0, field="spectrum")

    points = []
    for match in _POINT_RE.finditer(stripped):
        body = match.group(1).strip()
        try:
            coords = tuple(int(part) for part in body.split(',')) if body else ()
        except ValueError:
            raise ParseError("Spectrum coordinates must be integers", stripped, match.start(), field="spectrum")
        points.append(coords)

    leftover = _POINT_RE.sub('', stripped[1:-1]).replace(',', '').strip()
    if leftover:
        raise ParseError(f"Unexpected text in spectrum: {leftover!r}", field="spectrum")

    if points and len({len(p) for p in points}) != 1:
        raise DimensionMismatch("Spectrum points have differing dimensions", field="spectrum")

    return points


def validate_positive_int(value, field, minimum=1):
    """Validate an integer parameter with a lower bound"""
    try:
        number = int(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{field} must be an integer", field=field)

    if number < minimum:
        raise ValidationError(f"{field} must be >= {minimum}", field=field)

    return number


def validate_form_scale(value):
    """Exact positive rescaling of the invariant form"""
    if isinstance(value, bool):
        raise ValidationError("form_scale must be a positive rational", field="form_scale")
    try:
        scale = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValidationError(f"form_scale must be a positive rational, got {value!r}", field="form_scale")

    if scale <= 0:
        raise InvalidType("The invariant form must stay positive definite", field="form_scale")
    return scale


def validate_unit_modulus(values: Sequence[complex], field, tolerance):
    """Check that every entry lies on the unit circle"""
    for k, value in enumerate(values):
        if abs(abs(value) - 1.0) > tolerance:
            raise DomainError(f"{field}[{k}] = {value} is not on the unit circle", field=field)


def validate_unit_interval(values: Sequence[float], field):
    for k, value in enumerate(values):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{field}[{k}] = {value} is outside [0, 1]", field=field)
