"""Power series for the 4D Hadamard parametrix building blocks f and F."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from .errors import InvalidArgumentError
from .utils.logging import log_event

logger = logging.getLogger(__name__)

DEFAULT_TERMS = 60
RELATIVE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SeriesValue:
    value: float
    terms: int
    last_term: float
    next_term: float
    truncated: bool
    partial_sums: Tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "terms": self.terms,
            "last_term": self.last_term,
            "next_term": self.next_term,
            "truncated": self.truncated,
        }


def _bessel_terms(z: float) -> Iterator[Tuple[int, float]]:
    """(k, (-z/4)^k / (k! (k+1)!)) for k = 0, 1, ..."""
    term = 1.0
    k = 0
    while True:
        yield k, term
        k += 1
        term *= (-z / 4.0) / (k * (k + 1))


def _sum_series(
    name: str, z: float, terms: int, weighted: Iterator[float], scale: float
) -> SeriesValue:
    if terms < 1:
        raise InvalidArgumentError("terms must be >= 1", terms=terms)
    partial = []
    total = 0.0
    last = 0.0
    for _, value in zip(range(terms), weighted):
        last = scale * value
        total += last
        partial.append(total)
    # first omitted term; an exact zero means the sum is complete
    following = scale * next(weighted)
    truncated = abs(following) > RELATIVE_TOLERANCE * abs(total)
    if truncated:
        log_event(
            logger,
            logging.WARNING,
            "series_truncated",
            series=name,
            z=z,
            terms=terms,
            next_term=following,
            partial_sum=total,
        )
    return SeriesValue(
        value=total,
        terms=terms,
        last_term=last,
        next_term=following,
        truncated=truncated,
        partial_sums=tuple(partial),
    )


def hadamard_f_series(z: float, terms: int = DEFAULT_TERMS) -> SeriesValue:
    """f(z) = J1(sqrt z) / (8 pi^2 sqrt z), summed as its own power series."""
    weighted = (term for _, term in _bessel_terms(z))
    return _sum_series("f", z, terms, weighted, 1.0 / (16.0 * math.pi**2))


def _digamma_pairs() -> Iterator[float]:
    """psi(k+1) + psi(k+2) via psi(1) = -C and psi(k+1) = psi(k) + 1/k."""
    psi = -float(np.euler_gamma)
    k = 0
    while True:
        following = psi + 1.0 / (k + 1)
        yield psi + following
        psi = following
        k += 1


def hadamard_F_series(z: float, terms: int = DEFAULT_TERMS) -> SeriesValue:  # noqa: N802
    weighted = (
        pair * term for (_, term), pair in zip(_bessel_terms(z), _digamma_pairs())
    )
    return _sum_series("F", z, terms, weighted, -1.0 / (4.0 * math.pi))


def hadamard_f(z: float, terms: int = DEFAULT_TERMS) -> float:
    return hadamard_f_series(z, terms).value


def hadamard_F(z: float, terms: int = DEFAULT_TERMS) -> float:  # noqa: N802
    return hadamard_F_series(z, terms).value
