import logging
import math

import numpy as np
import pytest
from scipy.special import digamma, j1

from feynman_residue_lab.errors import InvalidArgumentError
from feynman_residue_lab.hadamard import (
    hadamard_f,
    hadamard_f_series,
    hadamard_F,
    hadamard_F_series,
)


def _F_oracle(z: float, terms: int = 40) -> float:  # noqa: N802
    total = 0.0
    for k in range(terms):
        weight = (-z / 4.0) ** k / (math.factorial(k) * math.factorial(k + 1))
        total += (digamma(k + 1) + digamma(k + 2)) * weight
    return -total / (4.0 * math.pi)


def test_values_at_the_origin() -> None:
    assert hadamard_f(0.0) == pytest.approx(1.0 / (16.0 * math.pi**2), rel=1e-15)
    expected = (2.0 * np.euler_gamma - 1.0) / (4.0 * math.pi)
    assert hadamard_F(0.0) == pytest.approx(expected, rel=1e-14)


def test_f_matches_bessel_function() -> None:
    assert hadamard_f(0.01) == pytest.approx(6.32466e-3, rel=1e-5)
    for z in (0.01, 0.5, 1.0, 4.0, 25.0):
        root = math.sqrt(z)
        expected = j1(root) / (8.0 * math.pi**2 * root)
        assert hadamard_f(z) == pytest.approx(expected, rel=1e-12)


def test_F_matches_digamma_oracle() -> None:  # noqa: N802
    for z in (0.01, 0.5, 1.0, 4.0):
        assert hadamard_F(z) == pytest.approx(_F_oracle(z), rel=1e-12)


def test_alternating_tail_bounds_the_error() -> None:
    for z in (0.25, 1.0):
        reference = hadamard_F(z)
        series = hadamard_F_series(z, terms=6)
        first_omitted = hadamard_F_series(z, terms=7).last_term
        assert series.next_term == first_omitted
        assert abs(reference - series.value) <= abs(first_omitted)


def test_partial_sums_are_recorded() -> None:
    series = hadamard_f_series(1.0, terms=5)

    assert len(series.partial_sums) == 5
    assert series.partial_sums[-1] == series.value
    assert series.partial_sums[0] == pytest.approx(1.0 / (16.0 * math.pi**2))


def test_truncation_is_flagged_and_logged(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="feynman_residue_lab.hadamard"):
        series = hadamard_f_series(400.0, terms=3)

    assert series.truncated
    assert any(getattr(record, "event", None) == "series_truncated" for record in caplog.records)
    assert not hadamard_f_series(0.5).truncated


def test_term_count_must_be_positive() -> None:
    with pytest.raises(InvalidArgumentError):
        hadamard_f_series(1.0, terms=0)


def test_exact_sums_are_not_flagged(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="feynman_residue_lab.hadamard"):
        f0 = hadamard_f_series(0.0, terms=1)
        big_f0 = hadamard_F_series(0.0, terms=1)

    assert not f0.truncated
    assert not big_f0.truncated
    assert f0.next_term == 0.0
    assert caplog.records == []
