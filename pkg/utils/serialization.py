import logging
from fractions import Fraction

logger = logging.getLogger(__name__)

_INT64_MAX = 2 ** 63 - 1


def encode_int(value):
    """Integers beyond the 64-bit range are emitted as decimal strings"""
    value = int(value)
    if -_INT64_MAX - 1 <= value <= _INT64_MAX:
        return value
    return str(value)


def decode_int(value):
    return int(value)


def encode_rational(value):
    value = Fraction(value)
    return {"num": encode_int(value.numerator), "den": encode_int(value.denominator)}


def decode_rational(data):
    return Fraction(decode_int(data["num"]), decode_int(data["den"]))


def encode_gaussian(value):
    return {"re": encode_rational(value.re), "im": encode_rational(value.im)}


def decode_gaussian(data):
    from exact.laurent import GaussianRational

    return GaussianRational(decode_rational(data["re"]), decode_rational(data["im"]))


def encode_complex(value):
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def encode_vector(vector):
    return [encode_rational(v) if isinstance(v, Fraction) else int(v) for v in vector]
