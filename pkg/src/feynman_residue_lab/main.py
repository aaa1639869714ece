"""Command-line entrypoint: every subcommand prints one JSON document on stdout."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from . import __version__
from .codec import dumps
from .combinatorics import beta_expansion, coproduct, primitive_beta_value
from .config import Settings, load_settings
from .corpus import corpus_entries, lookup_known_period, verify_entry
from .dsl import format_graph, parse_graph, parse_monomial
from .errors import EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE, FrlError, PreconditionError
from .graph import Multigraph, canonical_form
from .polynomial import dual_polynomial_minor, dual_polynomial_trees, spanning_tree_count
from .power_counting import power_count
from .quadrature import PeriodEstimate, QuadratureConfig, evaluate_period, variance_safe_exponent
from .residue import banana_residue, residue_from_period
from .storage import PeriodCache, cache_key
from .utils.logging import configure_logging, log_event


def _simplex_exponent(text: str) -> str | float:
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frl", description="Feynman periods and Epstein-Glaser residues."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--method", choices=["gauss", "mc"], default=None)
    quad.add_argument("--points", type=int, default=None, help="Gauss points per axis")
    quad.add_argument("--no-grading", action="store_true", help="disable endpoint grading")
    quad.add_argument("--samples", type=int, default=None)
    quad.add_argument("--seed", type=int, default=None)
    quad.add_argument("--workers", type=int, default=None)
    quad.add_argument(
        "--simplex-exponent",
        type=_simplex_exponent,
        default=1.0,
        help="Dirichlet sampling exponent in (0, 1], or 'auto' for a finite-variance choice",
    )
    quad.add_argument("--cache-path", type=Path, default=None)
    quad.add_argument("--no-cache", action="store_true")

    classify = commands.add_parser("classify", help="power counting report")
    classify.add_argument("graph")
    classify.add_argument("--dim", type=int, required=True)

    poly = commands.add_parser("poly", help="dual graph polynomial")
    poly.add_argument("graph")
    poly.add_argument("--method", choices=["trees", "minor"], default="trees")
    poly.add_argument("--root", type=int, default=0, help="deleted vertex for --method minor")

    period = commands.add_parser("period", parents=[quad], help="numerical period")
    period.add_argument("graph")
    period.add_argument("--dim", type=int, required=True)

    residue = commands.add_parser("residue", parents=[quad], help="distributional residue")
    residue.add_argument("graph")
    residue.add_argument("--dim", type=int, required=True)

    banana = commands.add_parser("banana", help="closed-form banana residue")
    banana.add_argument("--edges", type=int, required=True)
    banana.add_argument("--dim", type=int, required=True)

    cop = commands.add_parser("coproduct", help="Wick-submonomial coproduct")
    cop.add_argument("monomial")

    beta = commands.add_parser("beta", parents=[quad], help="partition expansion of B")
    beta.add_argument("graph")
    beta.add_argument("--dim", type=int, required=True)
    beta.add_argument("--values", action="store_true", help="attach residues to primitive leaves")

    corpus = commands.add_parser("corpus", help="known periods")
    corpus.add_argument("--verify", action="store_true")
    corpus.add_argument("--samples", type=int, default=None)
    corpus.add_argument("--seed", type=int, default=None)
    corpus.add_argument("--workers", type=int, default=None)
    corpus.add_argument("--corpus-file", type=Path, default=None)

    cache = commands.add_parser("cache", help="inspect or clear the result cache")
    action = cache.add_mutually_exclusive_group(required=True)
    action.add_argument("--list", action="store_true")
    action.add_argument("--clear", action="store_true")
    cache.add_argument("--cache-path", type=Path, default=None)
    return parser


class CommandRunner:
    def __init__(self, settings: Settings, logger: logging.Logger, stdout: TextIO) -> None:
        self._settings = settings
        self._logger = logger
        self._stdout = stdout

    def run(self, args: argparse.Namespace) -> int:
        handler: Callable[[argparse.Namespace], Any] = getattr(self, f"_cmd_{args.command}")
        log_event(self._logger, logging.DEBUG, "command", command=args.command)
        result = handler(args)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        self._emit(result)
        return code

    def _emit(self, payload: Any) -> None:
        self._stdout.write(dumps(payload, indent=2) + "\n")

    def _quadrature_config(
        self, args: argparse.Namespace, g: Multigraph, dim: int
    ) -> QuadratureConfig:
        if args.simplex_exponent == "auto":
            exponent = variance_safe_exponent(g, dim)
        else:
            exponent = args.simplex_exponent
        return QuadratureConfig(
            method=args.method or self._settings.default_method,
            points_per_axis=args.points,
            samples=args.samples or self._settings.mc_samples,
            rng_seed=self._settings.seed if args.seed is None else args.seed,
            workers=args.workers or self._settings.workers,
            endpoint_grading=not args.no_grading,
            simplex_exponent=exponent,
        )

    def _cache(self, args: argparse.Namespace) -> PeriodCache:
        return PeriodCache(args.cache_path or self._settings.cache_path)

    def _period(self, args: argparse.Namespace, g: Multigraph, dim: int) -> PeriodEstimate:
        cfg = self._quadrature_config(args, g, dim)
        if args.no_cache:
            return evaluate_period(g, dim, cfg)
        cache = self._cache(args)
        key = cache_key(g, dim, cfg)
        entry = cache.get(key)
        if entry is not None:
            try:
                cached = PeriodEstimate.from_dict(entry.value)
            except (KeyError, TypeError, ValueError):
                log_event(
                    self._logger,
                    logging.WARNING,
                    "cache_corrupt_line",
                    path=str(cache.path),
                    key=key,
                )
            else:
                log_event(self._logger, logging.INFO, "cache_hit", key=key)
                return cached
        log_event(self._logger, logging.INFO, "cache_miss", key=key)
        estimate = evaluate_period(g, dim, cfg)
        cache.put(key, "period", estimate.to_dict())
        return estimate

    def _cmd_classify(self, args: argparse.Namespace) -> Dict[str, Any]:
        g = parse_graph(args.graph)
        return {"graph": format_graph(g), **power_count(g, args.dim).to_dict()}

    def _cmd_poly(self, args: argparse.Namespace) -> Dict[str, Any]:
        g = parse_graph(args.graph)
        if args.method == "minor":
            psi = dual_polynomial_minor(g, args.root)
        else:
            psi = dual_polynomial_trees(g)
        return {
            "graph": format_graph(g),
            "method": args.method,
            "variables": list(psi.variables),
            "polynomial": psi.render(),
            "terms": len(psi),
            "spanning_trees": spanning_tree_count(g),
        }

    def _cmd_period(self, args: argparse.Namespace) -> PeriodEstimate:
        g = parse_graph(args.graph)
        return self._period(args, g, args.dim)

    def _cmd_residue(self, args: argparse.Namespace) -> Dict[str, Any]:
        g = parse_graph(args.graph)
        known = lookup_known_period(g, args.dim)
        if known is not None:
            residue = residue_from_period(g, args.dim, known)
            return {"residue": residue, "period": None, "exact": True}
        report = power_count(g, args.dim)
        if not report.eg_primitive:
            raise PreconditionError(
                "graph is not EG-primitive; its residue depends on the extension",
                divergence_degree=report.divergence_degree,
            )
        estimate = self._period(args, g, args.dim)
        return {
            "residue": residue_from_period(g, args.dim, estimate.value),
            "period": estimate,
            "exact": False,
        }

    def _cmd_banana(self, args: argparse.Namespace) -> Dict[str, Any]:
        return banana_residue(args.edges, args.dim).to_dict()

    def _cmd_coproduct(self, args: argparse.Namespace) -> List[Dict[str, Any]]:
        return [term.to_dict() for term in coproduct(parse_monomial(args.monomial))]

    def _cmd_beta(self, args: argparse.Namespace) -> List[Dict[str, Any]]:
        g = parse_graph(args.graph)
        terms = beta_expansion(g, args.dim)
        rendered = [term.to_dict() for term in terms]
        if not args.values:
            return rendered
        values: Dict[Multigraph, Any] = {}
        for term, payload in zip(terms, rendered):
            leaf_values = []
            for block, status in zip(term.block_graphs, term.leaf_status):
                if status.value != "primitive-with-residue":
                    leaf_values.append(None)
                    continue
                canonical = canonical_form(block)
                if canonical not in values:
                    cfg = self._quadrature_config(args, block, args.dim)
                    values[canonical] = primitive_beta_value(block, args.dim, cfg)
                leaf_values.append(values[canonical])
            payload["leaf_values"] = leaf_values
        return rendered

    def _cmd_corpus(self, args: argparse.Namespace) -> Any:
        entries = corpus_entries(args.corpus_file or self._settings.corpus_path)
        if not args.verify:
            return [entry.to_dict() for entry in entries]
        results = [
            verify_entry(
                entry,
                samples=args.samples or self._settings.mc_samples,
                seed=self._settings.seed if args.seed is None else args.seed,
                workers=args.workers or self._settings.workers,
            )
            for entry in entries
        ]
        passed = all(result.passed for result in results)
        payload = {"passed": passed, "results": [result.to_dict() for result in results]}
        return payload, EXIT_OK if passed else EXIT_NUMERICAL

    def _cmd_cache(self, args: argparse.Namespace) -> Dict[str, Any]:
        cache = self._cache(args)
        if args.clear:
            return {"path": str(cache.path), "cleared": cache.clear()}
        return {
            "path": str(cache.path),
            "entries": [
                {"key": e.key, "kind": e.kind, "created_at": e.created_at, "value": e.value}
                for e in cache.entries()
            ],
        }


def _error(stdout: TextIO, payload: Dict[str, Any]) -> None:
    stdout.write(dumps({"error": payload}, indent=2) + "\n")


def run_command(
    argv: Sequence[str],
    settings: Optional[Settings] = None,
    stdout: Optional[TextIO] = None,
) -> int:
    stdout = stdout or sys.stdout
    logger = logging.getLogger("feynman_residue_lab")
    try:
        args = _build_parser().parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = settings or load_settings()
        return CommandRunner(settings, logger, stdout).run(args)
    except FrlError as exc:
        log_event(logger, logging.WARNING, "domain_error", kind=exc.kind, error=exc.message)
        _error(stdout, exc.to_payload())
        return exc.exit_code
    except ValidationError as exc:  # bad flag or environment value
        log_event(logger, logging.WARNING, "domain_error", kind="invalid-config", error=str(exc))
        _error(stdout, {"kind": "invalid-config", "message": str(exc)})
        return EXIT_PARSE


def main() -> None:
    settings = load_settings()
    configure_logging(settings.log_level, settings.log_dir)
    logger = logging.getLogger("feynman_residue_lab")
    log_event(logger, logging.DEBUG, "startup", version=__version__, cache=str(settings.cache_path))
    sys.exit(run_command(sys.argv[1:], settings=settings))
