"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import Any, Dict, Optional, Sequence

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4


class FrlError(Exception):
    """Base class; carries a machine-readable kind and the CLI exit code."""

    kind = "error"
    exit_code = EXIT_DOMAIN

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_payload(self) -> Dict[str, Any]:
        return {"kind": self.kind, "message": self.message, **self.details}


class InvalidArgumentError(FrlError):
    kind = "invalid-argument"


class CapacityError(FrlError):
    kind = "capacity"


class UnsupportedDimensionError(FrlError):
    kind = "unsupported-dimension"

    def __init__(self, dimension: int) -> None:
        super().__init__(
            f"dimension D={dimension} is not supported (need even D >= 4)",
            dimension=dimension,
        )


class NoSpanningTreeError(FrlError):
    kind = "no-spanning-tree"

    def __init__(self) -> None:
        super().__init__("no spanning tree: graph is disconnected")


class PreconditionError(FrlError):
    kind = "precondition"


class RequiresExtensionError(PreconditionError):
    kind = "requires-extension"


class DivergentPeriodError(FrlError):
    kind = "divergent-period"


class NumericalFailureError(FrlError):
    kind = "numerical-failure"
    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, point: Optional[Sequence[float]] = None) -> None:
        details: Dict[str, Any] = {}
        if point is not None:
            details["point"] = [float(x) for x in point]
        super().__init__(message, **details)
        self.point = point


class SingularPointError(NumericalFailureError):
    kind = "singular-point"


class GraphParseError(FrlError):
    kind = "parse"
    exit_code = EXIT_PARSE

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        details: Dict[str, Any] = {}
        if position is not None:
            details["position"] = position
        super().__init__(message, **details)
        self.position = position


class CorpusLoadError(FrlError):
    kind = "corpus-load"
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}", line=line)
        self.line = line
