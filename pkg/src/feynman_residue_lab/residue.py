"""Exact residue constants: propagator normalisation, sphere volumes, period and banana residues."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from .errors import InvalidArgumentError, PreconditionError
from .graph import Multigraph, symmetry_factor
from .power_counting import check_dimension, power_count

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)

PERIOD_TAG = "P_Gamma"


@dataclass(frozen=True)
class ResidueValue:
    """i^i_power * rational_part * pi^pi_power * tag_value, with rational_part >= 0."""

    i_power: int
    rational_part: Fraction
    pi_power: int
    tag: Optional[str] = None
    tag_value: float = 1.0

    def __post_init__(self) -> None:
        rational = Fraction(self.rational_part)
        i_power = self.i_power
        if rational < 0:
            rational = -rational
            i_power += 2
        object.__setattr__(self, "rational_part", rational)
        object.__setattr__(self, "i_power", i_power % 4)
        if self.tag is None and self.tag_value != 1.0:
            raise InvalidArgumentError("an untagged residue must have tag_value 1")
        if not math.isfinite(self.tag_value):
            raise InvalidArgumentError("tag_value must be finite", tag=self.tag)

    @classmethod
    def rational(cls, value: Union[int, Fraction], pi_power: int = 0) -> "ResidueValue":
        return cls(i_power=0, rational_part=Fraction(value), pi_power=pi_power)

    @property
    def numeric(self) -> complex:
        magnitude = float(self.rational_part) * math.pi**self.pi_power * self.tag_value
        return _I_POWERS[self.i_power] * magnitude

    def __mul__(self, other: "ResidueValue") -> "ResidueValue":
        if self.tag and other.tag:
            tag: Optional[str] = f"{self.tag}*{other.tag}"
        else:
            tag = self.tag or other.tag
        return ResidueValue(
            i_power=self.i_power + other.i_power,
            rational_part=self.rational_part * other.rational_part,
            pi_power=self.pi_power + other.pi_power,
            tag=tag,
            tag_value=self.tag_value * other.tag_value,
        )

    def multiply(self, other: "ResidueValue") -> "ResidueValue":
        return self * other

    def scale(self, factor: Union[int, Fraction]) -> "ResidueValue":
        return ResidueValue(
            i_power=self.i_power,
            rational_part=self.rational_part * Fraction(factor),
            pi_power=self.pi_power,
            tag=self.tag,
            tag_value=self.tag_value,
        )

    def __pow__(self, exponent: int) -> "ResidueValue":
        if exponent < 0:
            raise InvalidArgumentError("negative powers are not supported", exponent=exponent)
        result = ResidueValue.rational(1)
        for _ in range(exponent):
            result = result * self
        return result

    def exact_equals(self, other: "ResidueValue") -> bool:
        """Compare exact parts, folding any tag value in as an exact binary fraction."""
        mine = self.rational_part * Fraction(self.tag_value)
        theirs = other.rational_part * Fraction(other.tag_value)
        if mine == 0 or theirs == 0:
            return mine == theirs
        return (
            self.i_power == other.i_power and self.pi_power == other.pi_power and mine == theirs
        )

    def render(self) -> str:
        rational = self.rational_part
        if rational == 0:
            return "0"
        numerator = []
        if rational.numerator != 1:
            numerator.append(str(rational.numerator))
        if self.i_power in (1, 3):
            numerator.append("i")
        if self.pi_power > 0:
            numerator.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        if self.tag:
            numerator.append(self.tag)
        denominator = []
        if rational.denominator != 1:
            denominator.append(str(rational.denominator))
        if self.pi_power < 0:
            denominator.append("pi" if self.pi_power == -1 else f"pi^{-self.pi_power}")
        sign = "-" if self.i_power in (2, 3) else ""
        text = sign + ("*".join(numerator) or "1")
        if denominator:
            joined = "*".join(denominator)
            text += f"/({joined})" if len(denominator) > 1 else f"/{joined}"
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i_power": self.i_power,
            "rational_part": str(self.rational_part),
            "pi_power": self.pi_power,
            "tag": self.tag,
            "tag_value": self.tag_value if self.tag else None,
            "numeric": self.numeric,
            "text": self.render(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResidueValue":
        return cls(
            i_power=int(data["i_power"]),
            rational_part=Fraction(data["rational_part"]),
            pi_power=int(data["pi_power"]),
            tag=data.get("tag"),
            tag_value=float(data["tag_value"]) if data.get("tag") else 1.0,
        )


@dataclass(frozen=True)
class DiffOpResidue:
    """coefficient * Box^box_power acting on the delta distribution."""

    coefficient: ResidueValue
    box_power: int

    def __post_init__(self) -> None:
        if self.box_power < 0:
            raise InvalidArgumentError("box_power must be non-negative", box_power=self.box_power)

    def to_dict(self) -> Dict[str, Any]:
        return {"coefficient": self.coefficient.to_dict(), "box_power": self.box_power}


@dataclass(frozen=True)
class KnownPeriod:
    """An exactly known period coefficient * value, e.g. 6 * zeta(3)."""

    coefficient: Fraction
    tag: Optional[str] = None
    value: float = 1.0

    @property
    def numeric(self) -> float:
        return float(self.coefficient) * self.value


def propagator_constant(dim: int) -> ResidueValue:
    """k_D = (-1)^(D/2-1) Gamma(D/2-1) / (4 pi^(D/2))."""
    check_dimension(dim)
    half = dim // 2
    sign = -1 if (half - 1) % 2 else 1
    return ResidueValue.rational(Fraction(sign * math.factorial(half - 2), 4), pi_power=-half)


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def sphere_volume(d: int) -> ResidueValue:
    """Volume of the unit sphere S^(d-1) in R^d."""
    if d < 1:
        raise InvalidArgumentError("sphere dimension must be >= 1", d=d)
    if d % 2 == 0:
        return ResidueValue.rational(Fraction(2, math.factorial(d // 2 - 1)), pi_power=d // 2)
    # Gamma(d/2) for odd d carries sqrt(pi), which cancels against pi^(d/2)
    return ResidueValue.rational(
        Fraction(2 ** ((d + 1) // 2), _double_factorial(d - 2)), pi_power=(d - 1) // 2
    )


def _as_known_period(period: Union[float, KnownPeriod]) -> KnownPeriod:
    if isinstance(period, KnownPeriod):
        return period
    value = float(period)
    if not math.isfinite(value):
        raise InvalidArgumentError("period must be finite", period=value)
    return KnownPeriod(coefficient=Fraction(1), tag=PERIOD_TAG, value=value)


def residue_from_period(
    g: Multigraph, dim: int, period: Union[float, KnownPeriod]
) -> ResidueValue:
    """c0 = 2 i^((2D-1)(|V|-1)) / (4 pi)^|E| * P."""
    report = power_count(g, dim)
    if not report.eg_primitive:
        raise PreconditionError(
            "graph is not EG-primitive; its residue depends on the extension",
            divergence_degree=report.divergence_degree,
        )
    known = _as_known_period(period)
    edges = g.edge_count
    return ResidueValue(
        i_power=(2 * dim - 1) * (g.n_vertices - 1),
        rational_part=Fraction(2, 4**edges) * known.coefficient,
        pi_power=-edges,
        tag=known.tag,
        tag_value=known.value if known.tag else 1.0,
    )


def banana_box_power(lines: int, dim: int) -> int:
    return (dim // 2 - 1) * lines - dim // 2


def banana_residue(lines: int, dim: int) -> DiffOpResidue:
    """Banana with `lines` parallel edges: k_D^lines * c_l * Box^l, l = (D/2 - 1) lines - D/2."""
    if lines < 2:
        raise InvalidArgumentError("a banana needs at least two lines", lines=lines)
    check_dimension(dim)
    box_power = banana_box_power(lines, dim)
    if box_power < 0:
        raise PreconditionError(
            "banana is superficially convergent; it has no residue", lines=lines, dimension=dim
        )
    half = dim // 2
    c_l = sphere_volume(dim).scale(
        Fraction(
            math.factorial(half - 1),
            4**box_power * math.factorial(box_power) * math.factorial(half + box_power - 1),
        )
    )
    minkowski_signs = ResidueValue(i_power=dim - 1, rational_part=Fraction(1), pi_power=0)
    coefficient = propagator_constant(dim) ** lines * minkowski_signs * c_l
    return DiffOpResidue(coefficient=coefficient, box_power=box_power)


def graph_weight(g: Multigraph, dim: int) -> ResidueValue:
    """k_D^|E| / Sym(g), the constant in front of u^g in the graph expansion."""
    return (propagator_constant(dim) ** g.edge_count).scale(Fraction(1, symmetry_factor(g)))
