"""Append-only JSON-lines cache of computed periods and residues."""

from __future__ import annotations

import fcntl
import hashlib
import json
import logging
import threading
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO, Any, Dict, Iterator, List, Optional

from .graph import Multigraph, canonical_form
from .quadrature import QuadratureConfig
from .utils.logging import log_event

logger = logging.getLogger(__name__)


@dataclass
class CacheEntry:
    key: str
    kind: str
    value: Dict[str, Any]
    created_at: float


def cache_key(g: Multigraph, dim: int, cfg: QuadratureConfig, kind: str = "period") -> str:
    """sha256 of the canonical graph, dimension and quadrature fingerprint; relabel-invariant."""
    canonical = canonical_form(g)
    payload = {
        "kind": kind,
        "graph": {"vertices": canonical.n_vertices, "upper": list(canonical.upper_triangle)},
        "dim": dim,
        **cfg.fingerprint_fields(max(g.edge_count - 1, 0)),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class PeriodCache:
    def __init__(self, path: Path) -> None:
        self._path = path
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._initialize()

    @property
    def path(self) -> Path:
        return self._path

    def _initialize(self) -> None:
        self._path.touch(exist_ok=True)

    @contextmanager
    def _locked(self, mode: str, lock_type: int) -> Iterator[IO[Any]]:
        encoding = None if "b" in mode else "utf-8"
        with self._lock, self._path.open(mode, encoding=encoding) as handle:
            fcntl.flock(handle.fileno(), lock_type)
            try:
                yield handle
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)

    def _read(self) -> List[CacheEntry]:
        records = []
        with self._locked("rb", fcntl.LOCK_SH) as handle:
            for number, raw in enumerate(handle, start=1):
                if not raw.strip():
                    continue
                try:
                    data = json.loads(raw.decode("utf-8"))
                    records.append(
                        CacheEntry(
                            key=str(data["key"]),
                            kind=str(data["kind"]),
                            value=dict(data["value"]),
                            created_at=float(data["created_at"]),
                        )
                    )
                except (KeyError, TypeError, ValueError):  # includes JSON and UTF-8 decode errors
                    log_event(
                        logger,
                        logging.WARNING,
                        "cache_corrupt_line",
                        path=str(self._path),
                        line=number,
                    )
        return records

    def entries(self) -> List[CacheEntry]:
        return self._read()

    def get(self, key: str) -> Optional[CacheEntry]:
        found = None
        for record in self._read():
            if record.key == key:
                found = record
        return found

    def put(self, key: str, kind: str, value: Dict[str, Any]) -> CacheEntry:
        record = CacheEntry(key=key, kind=kind, value=value, created_at=now_ts())
        with self._locked("a", fcntl.LOCK_EX) as handle:
            handle.write(json.dumps(asdict(record), sort_keys=True) + "\n")
            handle.flush()
        log_event(logger, logging.DEBUG, "cache_store", key=key, kind=kind)
        return record

    def clear(self) -> int:
        count = len(self._read())
        with self._locked("r+", fcntl.LOCK_EX) as handle:
            handle.truncate(0)
        return count


def now_ts() -> float:
    return time.time()
