import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from feynman_residue_lab.corpus import ZETA3
from feynman_residue_lab.errors import (
    DivergentPeriodError,
    InvalidArgumentError,
    SingularPointError,
)
from feynman_residue_lab.graph import banana, fish, triangle, wheel_with_three_spokes
from feynman_residue_lab.polynomial import ExactPolynomial
from feynman_residue_lab.quadrature import (
    PeriodEstimate,
    PeriodIntegrand,
    QuadratureConfig,
    default_points_per_axis,
    dirichlet_simplex_integral,
    evaluate_period,
    integrate_simplex,
    period_integrand,
    stick_breaking,
    triangle_reference_integral,
    triangle_reference_integrand,
    variance_safe_exponent,
)
from feynman_residue_lab.residue import residue_from_period


def _monomial(exponents):
    def integrand(alpha: np.ndarray) -> np.ndarray:
        return np.prod(alpha ** np.asarray(exponents, dtype=np.float64), axis=1)

    return integrand


def test_config_aliases_and_validation() -> None:
    assert QuadratureConfig(method="mc").method == "monte-carlo"
    assert QuadratureConfig(method="gauss").method == "gauss-tensor"
    with pytest.raises(ValidationError):
        QuadratureConfig(method="simpson")
    with pytest.raises(ValidationError):
        QuadratureConfig(samples=999)
    with pytest.raises(ValidationError):
        QuadratureConfig(simplex_exponent=0.0)
    with pytest.raises(ValidationError):
        QuadratureConfig(rng_seed=-1)


def test_default_points_shrink_with_dimension() -> None:
    assert default_points_per_axis(2) == 64
    assert default_points_per_axis(4) == 24
    assert default_points_per_axis(7) == 12
    assert QuadratureConfig(points_per_axis=10).resolved_points(2) == 10


def test_stick_breaking_lands_on_simplex() -> None:
    t = np.random.default_rng(1).random((50, 3))
    alpha, jacobian = stick_breaking(t)

    assert alpha.shape == (50, 4)
    assert np.allclose(alpha.sum(axis=1), 1.0)
    assert np.all(alpha > 0)
    assert np.allclose(jacobian, (1.0 - t[:, 0]) ** 2 * (1.0 - t[:, 1]))


def test_integrand_at_simplex_points() -> None:
    third = 1.0 / 3.0

    assert period_integrand(fish(), 4, [0.3, 0.7]) == pytest.approx(1.0)
    assert period_integrand(triangle(), 6, [third, third, third]) == pytest.approx(1.0)


def test_integrand_rejects_points_off_the_simplex() -> None:
    with pytest.raises(InvalidArgumentError):
        period_integrand(triangle(), 6, [0.5, 0.5, 0.0])
    with pytest.raises(InvalidArgumentError):
        period_integrand(triangle(), 6, [0.5, 0.5])
    with pytest.raises(InvalidArgumentError):
        period_integrand(fish(), 4, [0.6, 0.6])


def test_vanishing_polynomial_is_reported_with_the_point() -> None:
    integrand = PeriodIntegrand(ExactPolynomial.variable(("a1", "a2"), 0), 4)

    with pytest.raises(SingularPointError) as info:
        integrand(np.array([[0.5, 0.5], [0.0, 1.0]]))
    assert info.value.details["point"] == [0.0, 1.0]


def test_gauss_reproduces_dirichlet_integrals() -> None:
    cfg = QuadratureConfig(points_per_axis=16, endpoint_grading=False)
    for exponents in ([1, 2, 0], [0, 0, 0, 0], [3, 1], [1, 1, 1]):
        expected = dirichlet_simplex_integral(exponents)
        estimate = integrate_simplex(_monomial(exponents), len(exponents), cfg)
        assert estimate.value == pytest.approx(float(expected), rel=1e-12)


def test_dirichlet_oracle_values() -> None:
    assert dirichlet_simplex_integral([1, 1, 1]) == Fraction(1, 120)
    assert dirichlet_simplex_integral([0, 0]) == 1
    with pytest.raises(InvalidArgumentError):
        dirichlet_simplex_integral([])


def test_fish_period_is_one() -> None:
    estimate = evaluate_period(fish(), 4)

    assert estimate.method == "gauss-tensor"
    assert estimate.value == pytest.approx(1.0, abs=1e-12)
    assert estimate.richardson_delta is not None and estimate.richardson_delta < 1e-12


def test_triangle_period_in_six_dimensions() -> None:
    estimate = evaluate_period(triangle(), 6)

    assert estimate.value == pytest.approx(0.5, abs=1e-4)
    assert estimate.evaluations == 64**2 + 32**2


def test_triangle_reference_integrand() -> None:
    assert float(triangle_reference_integrand(0.5, 0.5)) == pytest.approx(0.512)
    assert triangle_reference_integral(10_000) == pytest.approx(0.5, abs=1e-3)
    with pytest.raises(InvalidArgumentError):
        triangle_reference_integral(10)


def test_divergent_graphs_are_refused() -> None:
    with pytest.raises(DivergentPeriodError):
        evaluate_period(banana(3), 4)
    with pytest.raises(DivergentPeriodError):
        evaluate_period(triangle(), 4)


def test_worker_count_does_not_change_gauss_result() -> None:
    single = QuadratureConfig(points_per_axis=20, chunk_size=50)
    pooled = QuadratureConfig(points_per_axis=20, chunk_size=50, workers=4)

    assert evaluate_period(triangle(), 6, single) == evaluate_period(triangle(), 6, pooled)


def test_monte_carlo_is_exact_for_constant_integrand() -> None:
    cfg = QuadratureConfig(method="mc", samples=5000, rng_seed=3)
    estimate = evaluate_period(fish(), 4, cfg)

    assert estimate.value == pytest.approx(1.0, abs=1e-12)
    assert estimate.std_error == pytest.approx(0.0, abs=1e-12)


def test_monte_carlo_is_reproducible() -> None:
    cfg = QuadratureConfig(method="mc", samples=20_000, rng_seed=42, workers=4, chunk_size=4096)
    first = evaluate_period(triangle(), 6, cfg)
    second = evaluate_period(triangle(), 6, cfg)
    other_seed = evaluate_period(triangle(), 6, cfg.model_copy(update={"rng_seed": 43}))

    assert first == second
    assert first.value != other_seed.value


def test_monte_carlo_with_dirichlet_sampling() -> None:
    exponent = variance_safe_exponent(triangle(), 6)
    cfg = QuadratureConfig(method="mc", samples=200_000, rng_seed=5, simplex_exponent=exponent)
    estimate = evaluate_period(triangle(), 6, cfg)

    assert exponent == 0.5
    assert estimate.std_error is not None
    assert abs(estimate.value - 0.5) < max(5 * estimate.std_error, 0.01)


def test_variance_safe_exponents() -> None:
    assert variance_safe_exponent(fish(), 4) == 1.0
    assert variance_safe_exponent(triangle(), 6) == 0.5
    assert variance_safe_exponent(wheel_with_three_spokes(), 4) == pytest.approx(0.2)
    with pytest.raises(DivergentPeriodError):
        variance_safe_exponent(triangle(), 4)


def test_estimate_round_trips_through_dict() -> None:
    estimate = PeriodEstimate(
        value=0.5, method="gauss-tensor", evaluations=10, richardson_delta=1e-9
    )

    assert PeriodEstimate.from_dict(estimate.to_dict()) == estimate
    assert estimate.error == 1e-9


@pytest.mark.slow
def test_wheel_with_three_spokes_is_six_zeta_three() -> None:
    cfg = QuadratureConfig(
        method="mc",
        samples=10_000_000,
        rng_seed=0,
        workers=8,
        simplex_exponent=variance_safe_exponent(wheel_with_three_spokes(), 4),
    )
    estimate = evaluate_period(wheel_with_three_spokes(), 4, cfg)
    residue = residue_from_period(wheel_with_three_spokes(), 4, estimate.value)

    assert estimate.std_error is not None
    assert abs(estimate.value - 6 * ZETA3) <= 3 * estimate.std_error
    assert estimate.value == pytest.approx(6 * ZETA3, rel=0.01)
    assert residue.numeric.real == pytest.approx(0.0, abs=1e-20)
    assert residue.numeric.imag == pytest.approx(3.6631e-6, rel=0.01)
