"""Known periods: a bundled table plus an optional user file in JSON-lines form."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.special import zeta

from .dsl import format_graph, parse_graph
from .errors import CorpusLoadError, FrlError
from .graph import (
    MAX_ISOMORPHISM_VERTICES,
    Multigraph,
    are_isomorphic,
    fish,
    triangle,
    wheel_with_three_spokes,
)
from .quadrature import PeriodEstimate, QuadratureConfig, evaluate_period, variance_safe_exponent
from .residue import KnownPeriod
from .utils.logging import log_event

logger = logging.getLogger(__name__)

ZETA3 = float(zeta(3, 1))


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: Multigraph
    dimension: int
    expected: float
    tolerance: float
    citation: str
    relative: bool = False
    method: str = "gauss"
    exact: Optional[KnownPeriod] = None

    @property
    def allowed_deviation(self) -> float:
        return self.tolerance * abs(self.expected) if self.relative else self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "graph": format_graph(self.graph),
            "dimension": self.dimension,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "relative": self.relative,
            "method": self.method,
            "citation": self.citation,
        }


BUNDLED_CORPUS = (
    CorpusEntry(
        name="fish",
        graph=fish(),
        dimension=4,
        expected=1.0,
        tolerance=1e-6,
        citation="one-loop fish: psi = a1 + a2 is 1 on the simplex",
        exact=KnownPeriod(Fraction(1)),
    ),
    CorpusEntry(
        name="triangle",
        graph=triangle(),
        dimension=6,
        expected=0.5,
        tolerance=1e-4,
        citation="one-loop triangle in six dimensions",
        exact=KnownPeriod(Fraction(1, 2)),
    ),
    CorpusEntry(
        name="wheel3",
        graph=wheel_with_three_spokes(),
        dimension=4,
        expected=6 * ZETA3,
        tolerance=0.01,
        relative=True,
        method="mc",
        citation="wheel with three spokes: 6 zeta(3)",
        exact=KnownPeriod(Fraction(6), tag="zeta3", value=ZETA3),
    ),
)


class _CorpusRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    graph: str
    dimension: int
    expected: float
    tolerance: float = Field(gt=0)
    relative: bool = False
    method: Literal["gauss", "mc"] = "gauss"
    citation: str = ""


def load_user_corpus(path: Path) -> List[CorpusEntry]:
    """Read a JSON-lines corpus; line 0 in a CorpusLoadError means the file itself."""
    try:
        lines = path.read_bytes().splitlines()
    except OSError as exc:
        raise CorpusLoadError(f"cannot read {path}: {exc.strerror or exc}", line=0) from exc
    entries = []
    for number, raw in enumerate(lines, start=1):
        try:
            line = raw.decode("utf-8").strip()
        except UnicodeDecodeError as exc:
            raise CorpusLoadError("invalid UTF-8", line=number) from exc
        if not line or line.startswith("#"):
            continue
        try:
            record = _CorpusRecord.model_validate(json.loads(line))
            graph = parse_graph(record.graph)
        except json.JSONDecodeError as exc:
            raise CorpusLoadError(f"invalid JSON: {exc.msg}", line=number) from exc
        except ValidationError as exc:
            raise CorpusLoadError(str(exc.errors()[0]["msg"]), line=number) from exc
        except FrlError as exc:
            raise CorpusLoadError(exc.message, line=number) from exc
        entries.append(
            CorpusEntry(
                name=record.name,
                graph=graph,
                dimension=record.dimension,
                expected=record.expected,
                tolerance=record.tolerance,
                relative=record.relative,
                method=record.method,
                citation=record.citation,
            )
        )
    return entries


def corpus_entries(user_corpus: Optional[Path] = None) -> List[CorpusEntry]:
    entries = list(BUNDLED_CORPUS)
    if user_corpus is not None:
        entries.extend(load_user_corpus(user_corpus))
    return entries


def lookup_known_period(
    g: Multigraph, dim: int, corpus: Optional[Sequence[CorpusEntry]] = None
) -> Optional[KnownPeriod]:
    if g.n_vertices > MAX_ISOMORPHISM_VERTICES:
        return None
    for entry in BUNDLED_CORPUS if corpus is None else corpus:
        if entry.exact is None or entry.dimension != dim:
            continue
        if entry.graph.edge_count == g.edge_count and are_isomorphic(entry.graph, g):
            return entry.exact
    return None


@dataclass(frozen=True)
class VerificationResult:
    entry: CorpusEntry
    estimate: PeriodEstimate
    deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.entry.name,
            "dimension": self.entry.dimension,
            "expected": self.entry.expected,
            "value": self.estimate.value,
            "error": self.estimate.error,
            "deviation": self.deviation,
            "allowed": self.entry.allowed_deviation,
            "method": self.estimate.method,
            "passed": self.passed,
        }


def verify_entry(entry: CorpusEntry, samples: int, seed: int, workers: int) -> VerificationResult:
    """Recompute one entry; Monte Carlo runs sample with a finite-variance Dirichlet exponent."""
    if entry.method == "mc":
        cfg = QuadratureConfig(
            method="mc",
            samples=samples,
            rng_seed=seed,
            workers=workers,
            simplex_exponent=variance_safe_exponent(entry.graph, entry.dimension),
        )
    else:
        cfg = QuadratureConfig(method="gauss", workers=workers)
    estimate = evaluate_period(entry.graph, entry.dimension, cfg)
    deviation = abs(estimate.value - entry.expected)
    passed = math.isfinite(deviation) and deviation <= entry.allowed_deviation
    log_event(
        logger,
        logging.INFO,
        "corpus_entry",
        entry=entry.name,
        value=estimate.value,
        deviation=deviation,
        passed=passed,
    )
    return VerificationResult(entry=entry, estimate=estimate, deviation=deviation, passed=passed)
