"""
Command-line entry point.

    teps grid --n 100
    teps weights --points tet.txt --t 1
    teps certify --enclosures z10.txt --t 10
    teps certify --points moved.txt --design tet.txt --t 1
    teps wce --points design.txt --t 5 --s 1.5 --s 5.5
    teps approx --points design.txt --t 20 --L 10 --delta 0.5 --lambda-grid=-20:0.5:0.5
    teps find-design --t 4 --epsilon 0.1
    teps recheck --certificate cert.json

Artifacts go to --out (or stdout); summaries and diagnostics go to stderr.
Exit status is 0 on success, 2 when a certificate is refused and 1 on any
other error.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from collections.abc import Callable, Iterator, Sequence
from pathlib import Path
from typing import IO, NoReturn

import numpy as np
from pydantic import TypeAdapter

from .. import __version__
from ..approx.functions import TARGETS, add_noise
from ..approx.grids import equal_area_grid
from ..approx.regularization import (
    SOLVERS,
    RegularizationProblem,
    SweepRow,
    Target,
    evaluate_poly,
    lambda_sweep,
    parse_lambda_grid,
)
from ..certify.certificate import (
    certify_enclosures,
    certify_point_set,
    recheck_certificate,
    selection_epsilons,
)
from ..certify.records import EpsilonCertificate
from ..certify.rules import QuadratureRule, equal_weight_rule
from ..certify.weights import solve_weights, verify_rule
from ..search.design import SearchConfig, find_design, minimal_N_scan
from ..util.constants import config, err, logger
from ..util.exceptions import CertificateRefusedError, TepsError, UsageError
from ..util.print import (
    certificate_summary,
    dump_json,
    search_summary,
    validate_json,
    verification_summary,
    write_csv,
)
from ..wce.error import wce_rows
from .config import RunConfig
from .ingest import (
    ENCLOSURE_FORMATS,
    ingest_enclosures,
    read_points,
    read_samples,
    read_weights,
    write_points,
    write_values,
    write_weights,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUSED = 2

PATH_OPTIONS = ("points", "weights", "samples", "enclosures", "design", "certificate")
Handler = Callable[[argparse.Namespace, RunConfig], int]

########################################################
#              Helpers
########################################################


class _Parser(argparse.ArgumentParser):
    """Argument errors exit through UsageError so that status 2 stays reserved."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(err.USAGE_ERROR.format(error=message))


@contextlib.contextmanager
def _output(path: Path | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _summary(text: str) -> None:
    print(text, file=sys.stderr)


def _rule(args: argparse.Namespace) -> QuadratureRule:
    """Points with weights from --weights, or equal weights."""
    points = read_points(args.points)
    if args.weights is None:
        return equal_weight_rule(points, args.t)
    return QuadratureRule(points, read_weights(args.weights), args.t)


def _degree_from_count(n: int) -> int:
    t = math.isqrt(n) - 1
    if (t + 1) ** 2 != n:
        raise UsageError(
            err.USAGE_ERROR.format(error=f"N = {n} is not (t+1)²; pass --t explicitly")
        )
    return t


def _with_meta(certificate: EpsilonCertificate, run: RunConfig) -> EpsilonCertificate:
    return certificate.model_copy(update={"meta": {**certificate.meta, **run.metadata()}})


def _emit_certificate(certificate: EpsilonCertificate, run: RunConfig) -> None:
    with _output(run.out) as stream:
        stream.write(dump_json(_with_meta(certificate, run)) + "\n")
    _summary(certificate_summary(certificate))


########################################################
#              Subcommands
########################################################


def _grid(args: argparse.Namespace, run: RunConfig) -> int:
    points = equal_area_grid(args.n)
    with _output(run.out) as stream:
        write_points(stream, points, run.metadata())
    return EXIT_OK


def _weights(args: argparse.Namespace, run: RunConfig) -> int:
    points = read_points(args.points)
    solution = solve_weights(points, args.t)
    with _output(run.out) as stream:
        write_weights(stream, solution.weights, run.metadata())
    if np.all(solution.weights > 0.0):
        rule = QuadratureRule(points, solution.weights, args.t)
        _summary(verification_summary(verify_rule(rule)))
    else:
        logger.warning("Some solved weights are nonpositive; the points are no t_ε-design")
    return EXIT_OK


def _certify(args: argparse.Namespace, run: RunConfig) -> int:
    if (args.enclosures is None) == (args.points is None):
        raise UsageError(err.USAGE_ERROR.format(error="pass either --enclosures or --points"))
    try:
        if args.enclosures is not None:
            enclosures = ingest_enclosures(args.enclosures, args.format)
            t = args.t if args.t is not None else _degree_from_count(enclosures.n)
            certificate = certify_enclosures(enclosures, t, exact=args.exact)
            if args.trials:
                eps = selection_epsilons(enclosures, t, args.trials, run.seed)
                meta = {**certificate.meta, "selection_trials": args.trials}
                meta["selection_eps_max"] = float(eps.max())
                certificate = certificate.model_copy(update={"meta": meta})
        else:
            if args.design is None:
                raise UsageError(err.USAGE_ERROR.format(error="--points needs --design"))
            points, design = read_points(args.points), read_points(args.design)
            t = args.t if args.t is not None else _degree_from_count(points.n)
            certificate = certify_point_set(points, design, t)
    except CertificateRefusedError as e:
        _emit_certificate(e.certificate, run)
        return EXIT_REFUSED
    _emit_certificate(certificate, run)
    return EXIT_OK


def _wce(args: argparse.Namespace, run: RunConfig) -> int:
    rule = _rule(args)
    rows = wce_rows(rule, args.s or [1.5], args.ell_max)
    with _output(run.out) as stream:
        write_csv(
            stream,
            ("t", "n", "s", "e_closed", "e_series", "tail_bound"),
            ((r.t, r.n, r.s, r.e_closed, r.e_series, r.tail_bound) for r in rows),
            run.metadata(),
        )
    return EXIT_OK


def _restoration_lambda(args: argparse.Namespace, rows: list[SweepRow]) -> float:
    """--restoration-lambda, or the λ with the smallest uniform error."""
    if args.restoration_lambda is not None:
        return float(args.restoration_lambda)
    known = [row for row in rows if not math.isnan(row.uniform_err)]
    if not known:
        raise UsageError(
            err.USAGE_ERROR.format(error="--restoration-lambda is needed for sampled data")
        )
    return min(known, key=lambda row: row.uniform_err).lam


def _approx(args: argparse.Namespace, run: RunConfig) -> int:
    rule = _rule(args)
    L = args.t // 2 if args.L is None else args.L
    restoration = args.restoration_out
    if restoration is not None and not restoration.parent.resolve().is_dir():
        raise UsageError(
            err.USAGE_ERROR.format(error=f"--restoration-out: no directory {restoration.parent}")
        )
    if args.samples is not None:
        target: Target | None = None
        clean = read_samples(args.samples, rule.n)
    else:
        target = TARGETS[args.function]
        clean = target(rule.points)
    problem = RegularizationProblem(rule, add_noise(clean, args.delta, run.seed), L)
    grid = equal_area_grid(args.grid_size)
    rows = lambda_sweep(problem, parse_lambda_grid(args.lambda_grid), args.model, target, grid)
    meta = {**run.metadata(), "model": args.model, "delta": args.delta, "L": L}
    with _output(run.out) as stream:
        write_csv(
            stream,
            ("lambda", "uniform_err", "l2_err", "sparsity", "residual"),
            ((r.lam, r.uniform_err, r.l2_err, r.sparsity, r.residual) for r in rows),
            meta,
        )
    if restoration is not None:
        lam = _restoration_lambda(args, rows)
        coefficients = SOLVERS[args.model](problem, lam)
        with _output(restoration) as stream:
            write_values(stream, grid, evaluate_poly(coefficients, grid), {**meta, "lambda": lam})
        logger.info("Restoration at λ = %.3e written to %s", lam, restoration)
    return EXIT_OK


def _find_design(args: argparse.Namespace, run: RunConfig) -> int:
    cfg = SearchConfig(
        t=args.t,
        epsilon=args.epsilon,
        n=args.n,
        max_iter=args.max_iter,
        restarts=args.restarts,
        seed=run.seed,
    )
    if args.scan:
        scan = minimal_N_scan(args.t, args.epsilon, base=cfg)
        result = scan.result
        logger.info("Minimal N for t=%d, ε=%g: %d", args.t, args.epsilon, scan.n)
    else:
        result = find_design(cfg)
    with _output(run.out) as stream:
        write_points(stream, result.points, {**run.metadata(), "t": result.t, "n": result.n})
    if args.weights_out is not None:
        with _output(args.weights_out) as stream:
            write_weights(stream, result.weights, run.metadata())
    _summary(search_summary(result))
    return EXIT_OK


def _recheck(args: argparse.Namespace, run: RunConfig) -> int:
    stored = validate_json(
        Path(args.certificate).read_text(encoding="utf-8"), TypeAdapter(EpsilonCertificate)
    )
    try:
        certificate = recheck_certificate(stored)
    except CertificateRefusedError as e:
        _emit_certificate(e.certificate, run)
        return EXIT_REFUSED
    _emit_certificate(certificate, run)
    return EXIT_OK


########################################################
#              Parser
########################################################


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=int(config.DEFAULT_SEED))
    common.add_argument("--out", type=Path, default=None, help="artifact path (default stdout)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="teps", description="Spherical t_ε-design toolkit")
    parser.add_argument("--version", action="version", version=f"teps {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    common = _common()

    grid = sub.add_parser("grid", parents=[common], help="equal-area grid points")
    grid.add_argument("--n", type=int, required=True)
    grid.set_defaults(handler=_grid)

    weights = sub.add_parser("weights", parents=[common], help="solve Y(X)ᵀw = √4π e₁")
    weights.add_argument("--points", type=Path, required=True)
    weights.add_argument("--t", type=int, required=True)
    weights.set_defaults(handler=_weights)

    certify = sub.add_parser("certify", parents=[common], help="certify a t_ε-design")
    certify.add_argument("--enclosures", type=Path)
    certify.add_argument("--format", choices=sorted(ENCLOSURE_FORMATS), default="rect")
    certify.add_argument("--points", type=Path)
    certify.add_argument("--design", type=Path)
    certify.add_argument("--t", type=int)
    certify.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
    certify.add_argument("--trials", type=int, default=0, help="random selections to solve")
    certify.set_defaults(handler=_certify)

    wce = sub.add_parser("wce", parents=[common], help="worst-case errors E_s")
    wce.add_argument("--points", type=Path, required=True)
    wce.add_argument("--weights", type=Path)
    wce.add_argument("--t", type=int, default=0)
    wce.add_argument("--s", type=float, action="append")
    wce.add_argument("--ell-max", type=int, default=int(config.SERIES_ELL_MAX))
    wce.set_defaults(handler=_wce)

    approx = sub.add_parser("approx", parents=[common], help="regularized approximation sweep")
    approx.add_argument("--points", type=Path, required=True)
    approx.add_argument("--weights", type=Path)
    approx.add_argument("--t", type=int, required=True)
    approx.add_argument("--L", type=int, help="approximation degree (default t // 2)")
    approx.add_argument("--function", choices=sorted(TARGETS), default="franke+cap")
    approx.add_argument("--samples", type=Path, help="sample values at the points")
    approx.add_argument("--model", choices=("l1", "l2"), default="l1")
    approx.add_argument("--delta", type=float, default=0.0)
    approx.add_argument("--lambda-grid", default="-20:0.5:0.5")
    approx.add_argument("--grid-size", type=int, default=int(config.GRID_SIZE))
    approx.add_argument("--restoration-out", type=Path, help="grid values of p_{L,N}")
    approx.add_argument("--restoration-lambda", type=float)
    approx.set_defaults(handler=_approx)

    search = sub.add_parser("find-design", parents=[common], help="search for a t_ε-design")
    search.add_argument("--t", type=int, required=True)
    search.add_argument("--epsilon", type=float, default=0.0)
    search.add_argument("--n", type=int)
    search.add_argument("--scan", action="store_true", help="smallest N in the bracket")
    search.add_argument("--max-iter", type=int, default=int(config.SEARCH_MAX_ITER))
    search.add_argument("--restarts", type=int, default=int(config.SEARCH_RESTARTS))
    search.add_argument("--weights-out", type=Path)
    search.set_defaults(handler=_find_design)

    recheck = sub.add_parser("recheck", parents=[common], help="re-validate a certificate")
    recheck.add_argument("--certificate", type=Path, required=True)
    recheck.set_defaults(handler=_recheck)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    namespace = vars(args)
    inputs = {
        name: namespace[name] for name in PATH_OPTIONS if namespace.get(name) is not None
    }
    skip = {"handler", "subcommand", "seed", "out", *PATH_OPTIONS}
    options = {
        key: str(value) if isinstance(value, Path) else value
        for key, value in namespace.items()
        if key not in skip
    }
    return RunConfig(
        subcommand=args.subcommand, inputs=inputs, out=args.out, seed=args.seed, options=options
    )


########################################################
#              Entry point
########################################################


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        run = _run_config(args)
        run.validate()
        handler: Handler = args.handler
        return handler(args, run)
    except TepsError as e:
        logger.error("❌ %s", e.message)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["EXIT_ERROR", "EXIT_OK", "EXIT_REFUSED", "build_parser", "main"]
