"""Numerical evaluation of graph periods over the Feynman simplex."""

from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import (
    CapacityError,
    DivergentPeriodError,
    InvalidArgumentError,
    NumericalFailureError,
    SingularPointError,
)
from .graph import Multigraph, edge_subset_rank
from .polynomial import ExactPolynomial, dual_polynomial_trees
from .power_counting import power_count
from .utils.logging import log_event

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

MIN_COMPONENT = 1e-300
SIMPLEX_TOLERANCE = 1e-9
MAX_FACE_EDGES = 16

_METHOD_ALIASES = {
    "gauss": "gauss-tensor",
    "gauss-tensor": "gauss-tensor",
    "mc": "monte-carlo",
    "monte-carlo": "monte-carlo",
}


def default_points_per_axis(free_variables: int) -> int:
    if free_variables <= 3:
        return 64
    if free_variables <= 5:
        return 24
    return 12


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: Literal["gauss-tensor", "monte-carlo"] = "gauss-tensor"
    points_per_axis: Optional[int] = None
    samples: int = 10_000_000
    rng_seed: int = 0
    workers: int = 1
    endpoint_grading: bool = True
    simplex_exponent: float = Field(default=1.0, gt=0.0, le=1.0)
    chunk_size: int = Field(default=1 << 16, gt=0)

    @field_validator("method", mode="before")
    @classmethod
    def _normalize_method(cls, value: object) -> str:
        normalized = str(value).strip().lower()
        if normalized not in _METHOD_ALIASES:
            raise ValueError("method must be one of gauss, gauss-tensor, mc, monte-carlo")
        return _METHOD_ALIASES[normalized]

    @field_validator("points_per_axis")
    @classmethod
    def _validate_points(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 2:
            raise ValueError("points_per_axis must be >= 2")
        return value

    @field_validator("samples")
    @classmethod
    def _validate_samples(cls, value: int) -> int:
        if value < 1000:
            raise ValueError("samples must be >= 1000")
        return value

    @field_validator("rng_seed")
    @classmethod
    def _validate_seed(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("rng_seed must fit in an unsigned 64-bit integer")
        return value

    @field_validator("workers")
    @classmethod
    def _validate_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be >= 1")
        return value

    def resolved_points(self, free_variables: int) -> int:
        return self.points_per_axis or default_points_per_axis(free_variables)

    def fingerprint_fields(self, free_variables: int) -> dict:
        if self.method == "gauss-tensor":
            return {
                "method": self.method,
                "points_per_axis": self.resolved_points(free_variables),
                "grading": self.endpoint_grading,
            }
        return {
            "method": self.method,
            "samples": self.samples,
            "seed": self.rng_seed,
            "workers": self.workers,
            "simplex_exponent": self.simplex_exponent,
        }


@dataclass(frozen=True)
class PeriodEstimate:
    value: float
    method: str
    evaluations: int
    std_error: Optional[float] = None
    richardson_delta: Optional[float] = None

    @property
    def error(self) -> float:
        if self.std_error is not None:
            return self.std_error
        return self.richardson_delta or 0.0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "evaluations": self.evaluations,
            "std_error": self.std_error,
            "richardson_delta": self.richardson_delta,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodEstimate":
        return cls(
            value=float(data["value"]),
            method=str(data["method"]),
            evaluations=int(data["evaluations"]),
            std_error=data.get("std_error"),
            richardson_delta=data.get("richardson_delta"),
        )


class PeriodIntegrand:
    """prod(alpha_e^(D/2-2)) / psi(alpha)^(D/2), vectorised over rows of alpha."""

    def __init__(self, psi: ExactPolynomial, dimension: int) -> None:
        self.psi = psi
        self.dimension = dimension
        self.measure_exponent = dimension // 2 - 2
        self.psi_exponent = dimension // 2

    @classmethod
    def for_graph(cls, g: Multigraph, dimension: int) -> "PeriodIntegrand":
        return cls(dual_polynomial_trees(g), dimension)

    @property
    def edge_count(self) -> int:
        return len(self.psi.variables)

    def __call__(self, alpha: np.ndarray) -> np.ndarray:
        psi_values = self.psi.evaluate(alpha)
        zero = psi_values == 0.0
        if np.any(zero):
            point = alpha[int(np.argmax(zero))]
            raise SingularPointError("dual graph polynomial vanishes", point=point)
        numerator = (
            np.prod(alpha**self.measure_exponent, axis=1)
            if self.measure_exponent
            else np.ones(alpha.shape[0])
        )
        return numerator / psi_values**self.psi_exponent


def _check_simplex_point(alpha: Sequence[float], edge_count: int) -> np.ndarray:
    point = np.asarray(alpha, dtype=np.float64)
    if point.shape != (edge_count,):
        raise InvalidArgumentError(
            "point has the wrong number of components", expected=edge_count, got=len(point)
        )
    if np.any(point <= 0.0) or abs(point.sum() - 1.0) > SIMPLEX_TOLERANCE:
        raise InvalidArgumentError(
            "point must lie strictly inside the simplex", point=[float(x) for x in point]
        )
    return point


def period_integrand(g: Multigraph, dim: int, alpha: Sequence[float]) -> float:
    integrand = PeriodIntegrand.for_graph(g, dim)
    point = _check_simplex_point(alpha, integrand.edge_count)
    return float(integrand(point[None, :])[0])


def unit_interval_rule(points: int, grading: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on (0, 1), optionally graded toward both ends."""
    x, w = np.polynomial.legendre.leggauss(points)
    t = 0.5 * (x + 1.0)
    weights = 0.5 * w
    if grading:
        weights = weights * 6.0 * t * (1.0 - t)
        t = t * t * (3.0 - 2.0 * t)
    return t, weights


def stick_breaking(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map (N, k) cube points to (N, k+1) simplex points and the Jacobian."""
    count, k = t.shape
    alpha = np.empty((count, k + 1))
    remaining = np.ones(count)
    jacobian = np.ones(count)
    for j in range(k):
        alpha[:, j] = t[:, j] * remaining
        jacobian *= (1.0 - t[:, j]) ** (k - 1 - j)
        remaining = remaining * (1.0 - t[:, j])
    alpha[:, k] = remaining
    return alpha, jacobian


def _checked(values: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(values)
    if np.any(bad):
        point = alpha[int(np.argmax(bad))]
        raise NumericalFailureError("non-finite integrand value", point=point)
    return values


def _chunks(total: int, size: int) -> List[Tuple[int, int]]:
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _map_ordered(function: Callable, items: Iterable, workers: int) -> list:
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


def _tensor_gauss(
    integrand: Integrand, edge_count: int, points: int, cfg: QuadratureConfig
) -> float:
    k = edge_count - 1
    if k == 0:
        return float(_checked(integrand(np.ones((1, 1))), np.ones((1, 1)))[0])
    nodes, weights = unit_interval_rule(points, cfg.endpoint_grading)
    shape = (points,) * k

    def partial(bounds: Tuple[int, int]) -> float:
        flat = np.arange(*bounds)
        index = np.stack(np.unravel_index(flat, shape), axis=1)
        alpha, jacobian = stick_breaking(nodes[index])
        values = _checked(integrand(alpha), alpha)
        return float(np.sum(np.prod(weights[index], axis=1) * jacobian * values))

    partials = _map_ordered(partial, _chunks(points**k, cfg.chunk_size), cfg.workers)
    return math.fsum(partials)


def _sample_simplex(
    rng: np.random.Generator, count: int, edge_count: int, exponent: float = 1.0
) -> np.ndarray:
    """Dirichlet(exponent) points on the simplex; exponent 1 gives the uniform distribution."""

    def draw(rows: int) -> np.ndarray:
        if exponent == 1.0:
            spacings = rng.exponential(size=(rows, edge_count))
        else:
            spacings = rng.standard_gamma(exponent, size=(rows, edge_count))
        return spacings / spacings.sum(axis=1, keepdims=True)

    alpha = draw(count)
    bad = np.any(alpha < MIN_COMPONENT, axis=1)
    while np.any(bad):
        alpha[bad] = draw(int(bad.sum()))
        bad = np.any(alpha < MIN_COMPONENT, axis=1)
    return alpha


def _log_dirichlet_density(alpha: np.ndarray, exponent: float) -> np.ndarray:
    edge_count = alpha.shape[1]
    norm = math.lgamma(edge_count * exponent) - edge_count * math.lgamma(exponent)
    if exponent == 1.0:
        return np.full(alpha.shape[0], norm)
    return norm + (exponent - 1.0) * np.sum(np.log(alpha), axis=1)


def _merge_moments(
    a: Tuple[int, float, float], b: Tuple[int, float, float]
) -> Tuple[int, float, float]:
    # pairwise update of (count, mean, M2)
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    if n_a == 0:
        return b
    if n_b == 0:
        return a
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta * delta * n_a * n_b / n
    return n, mean, m2


def _monte_carlo(
    integrand: Integrand, edge_count: int, cfg: QuadratureConfig
) -> Tuple[float, float]:
    """Mean of f / p over Dirichlet samples, p the sampling density on the simplex."""
    streams = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.workers)
    base, extra = divmod(cfg.samples, cfg.workers)
    quotas = [base + (1 if i < extra else 0) for i in range(cfg.workers)]
    exponent = cfg.simplex_exponent

    def run_stream(job: Tuple[np.random.SeedSequence, int]) -> Tuple[int, float, float]:
        seed, quota = job
        rng = np.random.default_rng(seed)
        moments: Tuple[int, float, float] = (0, 0.0, 0.0)
        for start, stop in _chunks(quota, cfg.chunk_size):
            alpha = _sample_simplex(rng, stop - start, edge_count, exponent)
            values = _checked(integrand(alpha), alpha)
            weighted = values * np.exp(-_log_dirichlet_density(alpha, exponent))
            mean = float(weighted.mean())
            m2 = float(np.sum((weighted - mean) ** 2))
            moments = _merge_moments(moments, (stop - start, mean, m2))
        return moments

    results = _map_ordered(run_stream, zip(streams, quotas), cfg.workers)
    total: Tuple[int, float, float] = (0, 0.0, 0.0)
    for moments in results:
        total = _merge_moments(total, moments)
    count, mean, m2 = total
    std_error = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    return mean, std_error


def variance_safe_exponent(g: Multigraph, dim: int) -> float:
    """Largest Dirichlet exponent (capped at 1, halved for margin) with finite sampling variance.

    Near the face where the edges S shrink like r, psi vanishes like r^m with
    m = rank(E) - rank(E \\ S); f^2 / p stays integrable iff the exponent is
    below (D - 2) - D m / |S|.
    """
    edges = g.edges
    count = len(edges)
    if count > MAX_FACE_EDGES:
        raise CapacityError(
            f"face analysis is limited to {MAX_FACE_EDGES} edges", edge_count=count
        )
    full_rank = edge_subset_rank(edges, range(count))
    bound = 2.0
    for size in range(1, count):
        for subset in itertools.combinations(range(count), size):
            chosen = set(subset)
            rest = [index for index in range(count) if index not in chosen]
            m = full_rank - edge_subset_rank(edges, rest)
            bound = min(bound, (dim - 2) - dim * m / size)
    if bound <= 0:
        raise DivergentPeriodError("the period integral diverges on a boundary face", bound=bound)
    return min(1.0, bound / 2)


def integrate_simplex(
    integrand: Integrand, edge_count: int, cfg: QuadratureConfig
) -> PeriodEstimate:
    """Integrate over {alpha_e > 0, sum alpha_e = 1} against prod d(alpha_e) delta(1 - sum)."""
    if edge_count < 1:
        raise InvalidArgumentError("need at least one integration variable")
    if cfg.method == "monte-carlo":
        value, std_error = _monte_carlo(integrand, edge_count, cfg)
        return PeriodEstimate(
            value=value, method=cfg.method, evaluations=cfg.samples, std_error=std_error
        )
    free = edge_count - 1
    points = cfg.resolved_points(free)
    coarse = max(1, points // 2)
    fine_value = _tensor_gauss(integrand, edge_count, points, cfg)
    coarse_value = _tensor_gauss(integrand, edge_count, coarse, cfg)
    return PeriodEstimate(
        value=fine_value,
        method=cfg.method,
        evaluations=points**free + coarse**free,
        richardson_delta=abs(fine_value - coarse_value),
    )


def evaluate_period(
    g: Multigraph, dim: int, cfg: Optional[QuadratureConfig] = None
) -> PeriodEstimate:
    cfg = cfg or QuadratureConfig()
    report = power_count(g, dim)
    if not report.eg_primitive:
        raise DivergentPeriodError(
            "period is not absolutely convergent for this graph",
            divergence_degree=report.divergence_degree,
            worst_subgraph=list(report.worst_subgraph.members) if report.worst_subgraph else None,
            worst_subgraph_degree=report.worst_subgraph_degree,
        )
    integrand = PeriodIntegrand.for_graph(g, dim)
    log_event(
        logger,
        logging.DEBUG,
        "quadrature_start",
        method=cfg.method,
        edges=g.edge_count,
        dimension=dim,
        workers=cfg.workers,
    )
    started = time.perf_counter()
    estimate = integrate_simplex(integrand, g.edge_count, cfg)
    log_event(
        logger,
        logging.INFO,
        "quadrature_done",
        method=estimate.method,
        value=estimate.value,
        error=estimate.error,
        evaluations=estimate.evaluations,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 2),
    )
    return estimate


def triangle_reference_integrand(lam: np.ndarray, kappa: np.ndarray) -> np.ndarray:
    """Triangle period at D=6 with a3 integrated out, a1 = lam*kappa and a2 = (1-lam)*kappa."""
    lam = np.asarray(lam, dtype=np.float64)
    kappa = np.asarray(kappa, dtype=np.float64)
    quadratic = lam * (1.0 - lam) * kappa**2 + kappa * (1.0 - kappa)
    return lam * (1.0 - lam) * kappa**3 * (1.0 - kappa) / quadratic**3


def triangle_reference_integral(samples: int) -> float:
    if samples < 1000:
        raise InvalidArgumentError("samples must be >= 1000", samples=samples)
    points = math.ceil(math.sqrt(samples))
    nodes, weights = unit_interval_rule(points, grading=True)
    lam, kappa = np.meshgrid(nodes, nodes, indexing="ij")
    values = triangle_reference_integrand(lam, kappa)
    return float(np.einsum("i,j,ij->", weights, weights, values))


def dirichlet_simplex_integral(exponents: Sequence[int]) -> Fraction:
    """Exact value of the simplex integral of prod(alpha_e^a_e)."""
    if not exponents or any(a < 0 for a in exponents):
        raise InvalidArgumentError("exponents must be non-negative and non-empty")
    numerator = math.prod(math.factorial(a) for a in exponents)
    return Fraction(numerator, math.factorial(sum(exponents) + len(exponents) - 1))
