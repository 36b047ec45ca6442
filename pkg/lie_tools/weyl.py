import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

from lie_tools.rootsystem import RootSystem, _normalize
from utils.validation import IndexOutOfRange, NotReduced

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedWord:
    """Reduced expression s_{i_1} ... s_{i_L}; letters are 1-based"""

    root_system: RootSystem
    letters: Tuple[int, ...]

    def __len__(self):
        return len(self.letters)

    @property
    def is_longest(self):
        return len(self.letters) == len(self.root_system.positive_roots)


@dataclass(frozen=True)
class BetaSequence:
    betas: Tuple[tuple, ...]
    gammas: Tuple[tuple, ...]


def _check_letters(rs: RootSystem, letters):
    for position, letter in enumerate(letters):
        if not isinstance(letter, int) or not 1 <= letter <= rs.rank:
            raise IndexOutOfRange(
                f"Letter {letter!r} at position {position} is not a simple root index of {rs.label}",
                field="word",
            )


def word_element_action(rs: RootSystem, letters: Sequence[int], vector):
    """Apply s_{i_1} ... s_{i_L} (rightmost first) to a vector"""
    result = _normalize(vector)
    for letter in reversed(letters):
        result = rs.reflect(result, letter - 1)
    return result


def _simple_root(rs: RootSystem, index):
    return rs.simple_roots[index - 1]


@lru_cache(maxsize=None)
def canonical_longest_word(rs: RootSystem) -> ReducedWord:
    """
    Fixed reduced word for the longest element w0.

    Type A_r uses (1)(2,1)(3,2,1)...(r,...,1). Other types walk rho to -rho,
    at each step applying the smallest s_i with (v, alpha_i) > 0.
    """
    if rs.type_label == 'A':
        letters = []
        for top in range(1, rs.rank + 1):
            letters.extend(range(top, 0, -1))
        return ReducedWord(rs, tuple(letters))

    letters = []
    vector = rs.rho
    while True:
        step = next((i for i in range(rs.rank) if rs.coroot_pairing(vector, i) > 0), None)
        if step is None:
            break
        vector = rs.reflect(vector, step)
        letters.append(step + 1)

    logger.debug(f"Greedy longest word for {rs.label}: length {len(letters)}")
    return ReducedWord(rs, tuple(letters))


def beta_sequence(rs: RootSystem, word) -> BetaSequence:
    """beta_j = s_{i_1}...s_{i_{j-1}}(alpha_{i_j}) and gamma_j = -w^{-1} beta_j"""
    letters = tuple(word.letters if isinstance(word, ReducedWord) else word)
    _check_letters(rs, letters)

    betas = []
    seen = set()
    for j, letter in enumerate(letters):
        beta = word_element_action(rs, letters[:j], _simple_root(rs, letter))
        if not rs.is_positive_root(beta):
            raise NotReduced(
                f"Word {list(letters)} is not reduced: beta_{j + 1} = {beta} is not positive",
                field="word",
            )
        if beta in seen:
            raise NotReduced(
                f"Word {list(letters)} is not reduced: beta_{j + 1} = {beta} repeats",
                field="word",
            )
        seen.add(beta)
        betas.append(beta)

    if len(letters) == len(rs.positive_roots) and seen != set(rs.positive_roots):
        raise NotReduced(f"Word {list(letters)} does not exhaust the positive roots", field="word")

    inverse = tuple(reversed(letters))
    gammas = []
    for beta in betas:
        image = word_element_action(rs, inverse, beta)
        gammas.append(_normalize(-v for v in image))

    return BetaSequence(tuple(betas), tuple(gammas))


def gamma_sequence_closed_form(rs: RootSystem, word):
    """gamma_j = s_{i_L} ... s_{i_{j+1}}(alpha_{i_j})"""
    letters = tuple(word.letters if isinstance(word, ReducedWord) else word)
    _check_letters(rs, letters)
    gammas = []
    for j, letter in enumerate(letters):
        tail = tuple(reversed(letters[j + 1:]))
        gammas.append(word_element_action(rs, tail, _simple_root(rs, letter)))
    return tuple(gammas)


def is_reduced(rs: RootSystem, letters) -> bool:
    try:
        beta_sequence(rs, letters)
    except (NotReduced, IndexOutOfRange):
        return False
    return True


def reduced_word(rs: RootSystem, letters, require_longest=False) -> ReducedWord:
    """Validate user letters and wrap them as a ReducedWord"""
    letters = tuple(letters)
    beta_sequence(rs, letters)
    if require_longest and len(letters) != len(rs.positive_roots):
        raise NotReduced(
            f"Word {list(letters)} has length {len(letters)}; w0 of {rs.label} has length "
            f"{len(rs.positive_roots)}",
            field="word",
        )
    return ReducedWord(rs, letters)
