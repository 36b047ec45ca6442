"""
Floating-point Haar integration through the unitary coordinate chart.

Integrands use a batched calling convention: f(matrices, phases) returns a
complex array of shape (S,), where matrices[k] has shape (S, n_k, n_k) for
the k-th simple factor and phases has shape (S, torus_dim).
"""
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from lie_tools.expression import Expr, evaluate_numeric, expression_degree
from lie_tools.groupmodel import numeric_points
from lie_tools.measure import GroupSpec, MeasureSpec, measure_spec
from utils.serialization import encode_complex
from utils.settings import get_setting
from utils.validation import BudgetTooSmall, DimensionMismatch, DomainError, UnsupportedFactor

logger = logging.getLogger(__name__)

Integrand = Callable[[List[np.ndarray], np.ndarray], np.ndarray]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class NumericResult:
    estimate: complex
    std_error: float
    samples_or_nodes: int
    seed: Optional[int] = None

    def to_json(self):
        return {
            "estimate": encode_complex(self.estimate),
            "std_error": self.std_error,
            "samples_or_nodes": self.samples_or_nodes,
            "seed": self.seed,
        }


def expression_integrand(expr: Expr) -> Integrand:
    """Adapt a matrix-coefficient expression to the batched integrand convention"""
    def integrand(matrices, phases):
        return evaluate_numeric(expr, matrices, phases)

    integrand.degree = expression_degree(expr)
    return integrand


def _require_unitary_model(spec: GroupSpec):
    for type_label, rank in spec.simple_factors:
        if type_label != 'A':
            raise UnsupportedFactor(
                f"Numeric integration needs SU(n) factors, got {type_label}{rank}", field="group"
            )


def _chart_matrices(measure: MeasureSpec, x, circle):
    """Unitary chart values for every simple factor from flat x and circle arrays"""
    matrices = []
    for layout in measure.factors:
        matrices.append(
            numeric_points(
                layout.rank,
                layout.word.letters,
                x[:, list(layout.x_indices)],
                circle[:, list(layout.w_indices)],
                circle[:, list(layout.z_indices)],
            )
        )
    phases = circle[:, list(measure.torus_indices)]
    return matrices, phases


def _evaluate(f: Integrand, measure: MeasureSpec, x, circle):
    matrices, phases = _chart_matrices(measure, x, circle)
    values = np.asarray(f(matrices, phases), dtype=complex)
    expected = (x.shape[0],)
    if values.ndim == 0:
        values = np.broadcast_to(values, expected)
    if values.shape != expected:
        raise DimensionMismatch(f"Integrand returned shape {values.shape}, expected {expected}")
    return values


def _monte_carlo_chunk(f, measure, seed_sequence, size):
    rng = np.random.default_rng(seed_sequence)
    two_e = 2.0 * np.asarray(measure.exponents, dtype=float)
    # inverse CDF of the density 2e x^(2e-1) on [0, 1]
    x = rng.random((size, measure.n_x)) ** (1.0 / two_e) if measure.n_x else np.zeros((size, 0))
    circle = np.exp(1j * TWO_PI * rng.random((size, measure.n_circle)))

    values = _evaluate(f, measure, x, circle)
    mean = values.mean()
    m2 = float(np.sum(np.abs(values - mean) ** 2))
    return size, mean, m2


def _combine(chunks):
    """Chan's pairwise merge of (count, mean, M2) triples, in chunk order"""
    while len(chunks) > 1:
        merged = []
        for k in range(0, len(chunks) - 1, 2):
            (na, ma, sa), (nb, mb, sb) = chunks[k], chunks[k + 1]
            n = na + nb
            delta = mb - ma
            merged.append((n, ma + delta * nb / n, sa + sb + abs(delta) ** 2 * na * nb / n))
        if len(chunks) % 2:
            merged.append(chunks[-1])
        chunks = merged
    return chunks[0]


def haar_monte_carlo(spec: GroupSpec, words, f: Integrand, samples: Optional[int] = None,
                     seed: Optional[int] = None, chunk_size: Optional[int] = None,
                     workers: Optional[int] = None) -> NumericResult:
    """
    Importance-sampled Monte Carlo estimate of the Haar integral of f.

    The run is split into fixed-size chunks; chunk k draws from child k of
    numpy.random.SeedSequence(seed), so the estimate depends only on
    (seed, samples, chunk_size) and not on the number of workers.
    """
    samples = int(samples if samples is not None else get_setting("monte_carlo", "samples", 1000000))
    seed = int(seed if seed is not None else get_setting("monte_carlo", "seed", 0))
    chunk_size = int(chunk_size or get_setting("monte_carlo", "chunk_size", 65536))
    workers = int(workers or get_setting("monte_carlo", "workers", 1))
    if samples < 1:
        raise DomainError("samples must be at least 1", field="samples")
    if chunk_size < 1 or workers < 1:
        raise DomainError("chunk_size and workers must be positive", field="chunk_size")

    _require_unitary_model(spec)
    measure = measure_spec(spec, words)

    sizes = [chunk_size] * (samples // chunk_size)
    if samples % chunk_size:
        sizes.append(samples % chunk_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(k):
        logger.debug(f"Monte Carlo chunk {k + 1}/{len(sizes)} ({sizes[k]} samples)")
        return _monte_carlo_chunk(f, measure, children[k], sizes[k])

    if workers == 1:
        chunks = [run(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run, range(len(sizes))))

    count, mean, m2 = _combine(chunks)
    variance = m2 / (count - 1) if count > 1 else 0.0
    std_error = math.sqrt(max(variance, 0.0) / count)

    logger.info(f"Monte Carlo on {spec}: {complex(mean)} +- {std_error} from {count} samples")
    return NumericResult(complex(mean), std_error, count, seed)


def _gauss_legendre_weighted(nodes, exponent):
    """Nodes and weights on [0,1] for the density 2e x^(2e-1)"""
    points, weights = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (points + 1.0)
    return t, 0.5 * weights * (2 * exponent) * t ** (2 * exponent - 1)


def _trapezoid_circle(nodes):
    return np.exp(1j * TWO_PI * np.arange(nodes) / nodes), np.full(nodes, 1.0 / nodes)


def quadrature_node_counts(measure: MeasureSpec, degree: int):
    """Gauss-Legendre counts per x-variable and trapezoid counts per circle variable"""
    x_counts = [math.ceil((degree + 2 * e) / 2) + 1 for e in measure.exponents]
    circle_counts = [degree + 1] * measure.n_circle
    return x_counts, circle_counts


def haar_quadrature(spec: GroupSpec, words, f: Integrand, degree_budget: Optional[int] = None,
                    expr_degree: Optional[int] = None, workers: Optional[int] = None) -> complex:
    """
    Tensor-product quadrature of the Haar integral, exact up to roundoff for
    polynomial integrands of total degree <= degree_budget.
    """
    if expr_degree is None:
        expr_degree = getattr(f, "degree", None)
    if degree_budget is None:
        if expr_degree is None:
            raise DomainError("A degree budget is required for black-box integrands", field="degree")
        degree_budget = expr_degree
    degree_budget = int(degree_budget)
    if degree_budget < 0:
        raise DomainError("degree budget must be nonnegative", field="degree")
    if expr_degree is not None and expr_degree > degree_budget:
        message = f"Degree budget {degree_budget} is below the integrand degree {expr_degree}"
        logger.warning(message)
        warnings.warn(message, BudgetTooSmall, stacklevel=2)

    _require_unitary_model(spec)
    measure = measure_spec(spec, words)
    x_counts, circle_counts = quadrature_node_counts(measure, degree_budget)

    rules = [_gauss_legendre_weighted(n, e) for n, e in zip(x_counts, measure.exponents)]
    rules += [_trapezoid_circle(n) for n in circle_counts]
    counts = tuple(x_counts + circle_counts)
    total = int(np.prod(counts)) if counts else 1
    chunk = int(get_setting("quadrature", "max_points_per_chunk", 65536))
    workers = int(workers or get_setting("monte_carlo", "workers", 1))

    def run(start):
        index = np.arange(start, min(start + chunk, total))
        grid = np.unravel_index(index, counts) if counts else ()
        weight = np.ones(len(index))
        x = np.zeros((len(index), measure.n_x))
        circle = np.ones((len(index), measure.n_circle), dtype=complex)
        for v, (nodes, weights) in enumerate(rules):
            weight = weight * weights[grid[v]]
            if v < measure.n_x:
                x[:, v] = nodes[grid[v]]
            else:
                circle[:, v - measure.n_x] = nodes[grid[v]]
        return np.sum(_evaluate(f, measure, x, circle) * weight)

    starts = range(0, total, chunk)
    if workers == 1:
        partial = [run(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(run, starts))

    value = complex(np.sum(np.asarray(partial, dtype=complex)))
    logger.info(f"Quadrature on {spec} with {total} nodes: {value}")
    return value


def euler_angle_matrices(phi, theta, psi) -> np.ndarray:
    """SU(2) elements in Euler angles, shape (S, 2, 2)"""
    half = 0.5 * theta
    cos_half, sin_half = np.cos(half), np.sin(half)
    plus = np.exp(0.5j * (phi + psi))
    minus = np.exp(0.5j * (phi - psi))
    U = np.empty(phi.shape + (2, 2), dtype=complex)
    U[..., 0, 0] = cos_half * plus
    U[..., 0, 1] = 1j * sin_half * minus
    U[..., 1, 0] = 1j * sin_half * np.conj(minus)
    U[..., 1, 1] = cos_half * np.conj(plus)
    return U


def su2_reference_integral(f: Callable[[np.ndarray], np.ndarray], node_counts: Optional[dict] = None) -> complex:
    """
    Classical Euler-angle formula: 1/(16 pi^2) times the integral of
    f(U(phi, theta, psi)) sin(theta) over [0,2pi] x [0,pi] x [-2pi,2pi].

    f maps an (S, 2, 2) array to a complex array of shape (S,).
    """
    counts = dict(get_setting("su2_reference", "nodes", {"phi": 32, "theta": 48, "psi": 32}))
    counts.update(node_counts or {})

    n_phi, n_theta, n_psi = int(counts["phi"]), int(counts["theta"]), int(counts["psi"])
    phi = TWO_PI * np.arange(n_phi) / n_phi
    psi = -TWO_PI + 2.0 * TWO_PI * np.arange(n_psi) / n_psi
    points, weights = np.polynomial.legendre.leggauss(n_theta)
    theta = 0.5 * np.pi * (points + 1.0)
    theta_weights = 0.5 * np.pi * weights * np.sin(theta)

    P, T, S = np.meshgrid(phi, theta, psi, indexing="ij")
    W = (TWO_PI / n_phi) * (2.0 * TWO_PI / n_psi) * theta_weights[None, :, None] * np.ones_like(P)

    values = np.asarray(f(euler_angle_matrices(P.ravel(), T.ravel(), S.ravel())), dtype=complex)
    return complex(np.sum(values * W.ravel()) / (16.0 * np.pi ** 2))


def su2_expression_function(expr: Expr) -> Callable[[np.ndarray], np.ndarray]:
    """Expression on SU(2) as a function of (S, 2, 2) matrices"""
    def function(matrices):
        return evaluate_numeric(expr, [matrices], np.zeros((matrices.shape[0], 0), dtype=complex))

    return function


def random_special_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(n): a U(n) sample rescaled by a root of its determinant"""
    U = unitary_group.rvs(n, random_state=rng) if n > 1 else np.eye(1, dtype=complex)
    return U / np.linalg.det(U) ** (1.0 / n)


def left_translate(f: Integrand, elements: Sequence[np.ndarray]) -> Integrand:
    """The integrand g -> f(h g) for fixed group elements h, one per simple factor"""
    def translated(matrices, phases):
        return f([np.matmul(h, m) for h, m in zip(elements, matrices)], phases)

    if hasattr(f, "degree"):
        translated.degree = f.degree
    return translated
