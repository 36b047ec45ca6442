import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from lie_tools.rootsystem import RootSystem, build_root_system, weight_exponent
from lie_tools.weyl import ReducedWord, beta_sequence, canonical_longest_word, reduced_word
from utils.serialization import encode_rational, encode_vector
from utils.validation import (
    DimensionMismatch,
    InvalidType,
    ValidationError,
    parse_group_spec,
    validate_form_scale,
    validate_type_rank,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupSpec:
    """K = K_1 x ... x K_n x T with simple K_i given by (type, rank)"""

    simple_factors: Tuple[Tuple[str, int], ...] = ()
    torus_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "simple_factors", tuple((t, int(r)) for t, r in self.simple_factors))
        for type_label, rank in self.simple_factors:
            if not validate_type_rank(type_label, rank):
                raise InvalidType(f"Invalid simple factor {type_label}{rank}", field="group")
        if self.torus_dim < 0:
            raise ValidationError("torus_dim must be nonnegative", field="group")
        if not self.simple_factors and self.torus_dim == 0:
            raise ValidationError("A group needs at least one factor", field="group")

    @classmethod
    def parse(cls, text):
        factors, torus_dim = parse_group_spec(text)
        return cls(tuple(factors), torus_dim)

    def __str__(self):
        parts = [f"SU({rank + 1})" if t == 'A' else f"{t}{rank}" for t, rank in self.simple_factors]
        if self.torus_dim:
            parts.append(f"T^{self.torus_dim}")
        return "x".join(parts)


@dataclass(frozen=True)
class VariableSlot:
    kind: str               # 'x', 'w', 'z' or 'u'
    factor: Optional[int]   # 1-based simple factor, None for the explicit torus
    local: int              # 1-based index within the factor
    index: int              # 0-based index within the x-part or circle part
    name: str


@dataclass(frozen=True)
class FactorLayout:
    factor: int
    root_system: RootSystem
    word: ReducedWord
    betas: Tuple[tuple, ...]
    exponents: Tuple[int, ...]
    x_indices: Tuple[int, ...]
    w_indices: Tuple[int, ...]
    z_indices: Tuple[int, ...]

    @property
    def dimension(self):
        return self.root_system.dimension

    @property
    def rank(self):
        return self.root_system.rank


@dataclass(frozen=True)
class MeasureSpec:
    group: GroupSpec
    n_x: int
    n_circle: int
    exponents: Tuple[int, ...]
    constant: Fraction
    layout: Tuple[VariableSlot, ...]
    factors: Tuple[FactorLayout, ...]
    torus_indices: Tuple[int, ...]

    @property
    def weight_powers(self):
        return tuple(2 * e - 1 for e in self.exponents)

    def factor_layout(self, factor):
        """Layout of the 1-based simple factor"""
        if not 1 <= factor <= len(self.factors):
            raise DimensionMismatch(f"Group has no simple factor {factor}", field="factor")
        return self.factors[factor - 1]

    def normalization_check(self) -> Fraction:
        """A * prod_j 1/(2 e_j); equals 1 exactly"""
        value = Fraction(self.constant)
        for e in self.exponents:
            value /= 2 * e
        return value

    def variable_names(self):
        x_names = [slot.name for slot in self.layout if slot.kind == 'x']
        circle_names = [slot.name for slot in self.layout if slot.kind != 'x']
        return x_names + circle_names

    def to_json(self):
        words = [list(f.word.letters) for f in self.factors]
        payload = {
            "group": str(self.group),
            "N": self.n_x,
            "M": self.n_circle,
            "exponents": list(self.exponents),
            "weight_powers": list(self.weight_powers),
            "constant": encode_rational(self.constant),
            "words": words,
            "betas": [[encode_vector(beta) for beta in f.betas] for f in self.factors],
            "variables": self.variable_names(),
            "factors": [
                {
                    "type": f.root_system.type_label,
                    "rank": f.rank,
                    "dimension": f.dimension,
                    "exponents": list(f.exponents),
                }
                for f in self.factors
            ],
            "torus_dim": self.group.torus_dim,
        }
        if len(words) == 1:
            payload["word"] = words[0]
            payload["betas"] = payload["betas"][0]
        return payload


def _slot_name(kind, factor, local, n_factors):
    if factor is None or n_factors <= 1:
        return f"{kind}{local}"
    return f"{kind}{factor}_{local}"


def measure_spec(spec: GroupSpec, words: Optional[Sequence] = None, form_scale=Fraction(1)) -> MeasureSpec:
    """Variable layout, odd weight exponents and global constant for a product group"""
    n_factors = len(spec.simple_factors)
    if words is not None and len(words) != n_factors:
        raise DimensionMismatch(f"Got {len(words)} words for {n_factors} simple factors", field="words")

    form_scale = validate_form_scale(form_scale)
    exponents = []
    x_slots = []
    circle_slots = []
    factor_layouts = []

    for k, (type_label, rank) in enumerate(spec.simple_factors, start=1):
        rs = build_root_system(type_label, rank, form_scale)
        given = words[k - 1] if words is not None else None
        if given is None:
            word = canonical_longest_word(rs)
        else:
            letters = given.letters if isinstance(given, ReducedWord) else given
            word = reduced_word(rs, letters, require_longest=True)

        betas = beta_sequence(rs, word).betas
        factor_exponents = tuple(weight_exponent(rs, beta) for beta in betas)
        length = len(betas)

        x_indices = tuple(range(len(x_slots), len(x_slots) + length))
        for j in range(length):
            x_slots.append(('x', k, j + 1))

        w_start = len(circle_slots)
        for j in range(length):
            circle_slots.append(('w', k, j + 1))
        z_start = len(circle_slots)
        for j in range(rank):
            circle_slots.append(('z', k, j + 1))

        factor_layouts.append(
            FactorLayout(
                factor=k,
                root_system=rs,
                word=word,
                betas=betas,
                exponents=factor_exponents,
                x_indices=x_indices,
                w_indices=tuple(range(w_start, w_start + length)),
                z_indices=tuple(range(z_start, z_start + rank)),
            )
        )
        exponents.extend(factor_exponents)

    torus_start = len(circle_slots)
    for j in range(spec.torus_dim):
        circle_slots.append(('u', None, j + 1))

    layout = tuple(
        VariableSlot(kind, factor, local, index, _slot_name(kind, factor, local, n_factors))
        for index, (kind, factor, local) in enumerate(x_slots)
    ) + tuple(
        VariableSlot(kind, factor, local, index, _slot_name(kind, factor, local, n_factors))
        for index, (kind, factor, local) in enumerate(circle_slots)
    )

    constant = Fraction(1)
    for e in exponents:
        constant *= 2 * e

    n_x = len(x_slots)
    n_circle = len(circle_slots)
    expected_n = sum((f.dimension - f.rank) // 2 for f in factor_layouts)
    expected_m = sum((f.dimension + f.rank) // 2 for f in factor_layouts) + spec.torus_dim
    if (n_x, n_circle) != (expected_n, expected_m):
        raise ValidationError(f"Layout ({n_x},{n_circle}) disagrees with ({expected_n},{expected_m})")

    measure = MeasureSpec(
        group=spec,
        n_x=n_x,
        n_circle=n_circle,
        exponents=tuple(exponents),
        constant=constant,
        layout=layout,
        factors=tuple(factor_layouts),
        torus_indices=tuple(range(torus_start, torus_start + spec.torus_dim)),
    )
    logger.info(f"Measure for {spec}: N={n_x}, M={n_circle}, A={constant}")
    return measure
