import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from strongmax.main import StrongMaximalStudy
from strongmax.utils.asymptotics import geometric_lambdas
from strongmax.utils.defaults import DEFAULT_POINTS_PER_DECADE, MC_MIN_SAMPLES
from strongmax.utils.descriptors import FunctionDescriptor
from strongmax.utils.distribution import weak_phi_norm
from strongmax.utils.enums import Direction, Method, Variant
from strongmax.utils.exceptions import InvalidInputError, StrongMaxError
from strongmax.utils.log_polynomial import lemma21_polynomial, lemma21_volume
from strongmax.utils.oracle import equivalence_suite, mc_volume
from strongmax.utils.writers import dump_json, write_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TARGET_MISSED = 1
EXIT_INVALID = 2

DEFAULT_LAMBDA_MIN = 1e-10
DEFAULT_LAMBDA_MAX = 1e-4


@dataclass(frozen=True)
class RunConfig:
    """A validated description of one CLI run."""

    subcommand: str
    function: Optional[str] = None
    g_function: Optional[str] = None
    n: Optional[int] = None
    variant: Variant = Variant.UNCENTERED
    resolution: Optional[int] = None
    lambda_min: float = DEFAULT_LAMBDA_MIN
    lambda_max: float = DEFAULT_LAMBDA_MAX
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE
    output: Optional[Path] = None
    seed: int = 0
    method: Optional[Method] = None
    direction: Direction = Direction.TO_ZERO
    literal: bool = False
    max_gap: Optional[float] = None

    def __post_init__(self):
        if self.resolution is not None and self.resolution < 2:
            raise InvalidInputError(f"Resolution must be >= 2: {self.resolution}")
        if not 0 < self.lambda_min < self.lambda_max:
            raise InvalidInputError(
                f"Need 0 < lambda-min < lambda-max, got "
                f"{self.lambda_min!r}, {self.lambda_max!r}"
            )
        if self.points_per_decade < 1:
            raise InvalidInputError(
                f"Points per decade must be >= 1: {self.points_per_decade}"
            )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def _get(name, default=None):
            return getattr(args, name, default)

        method = _get("method")
        return cls(
            subcommand=args.command,
            function=_get("function"),
            g_function=_get("g_function"),
            n=_get("n"),
            variant=Variant(_get("variant", Variant.UNCENTERED.value)),
            resolution=_get("resolution"),
            lambda_min=_get("lambda_min", DEFAULT_LAMBDA_MIN),
            lambda_max=_get("lambda_max", DEFAULT_LAMBDA_MAX),
            points_per_decade=_get("points_per_decade", DEFAULT_POINTS_PER_DECADE),
            output=_get("output"),
            seed=_get("seed", 0),
            method=None if method is None else Method(method),
            direction=Direction(_get("direction", Direction.TO_ZERO.value)),
            literal=_get("literal_n1", False),
            max_gap=_get("max_gap"),
        )

    @property
    def lambdas(self) -> np.ndarray:
        return geometric_lambdas(
            self.lambda_min, self.lambda_max, self.points_per_decade
        )

    def load_descriptor(self, source: Optional[str]) -> Optional[FunctionDescriptor]:
        if source is None:
            return None
        descriptor = FunctionDescriptor.from_json(source, default_dim=self.n)
        if self.n is not None and descriptor.dim != self.n:
            raise InvalidInputError(
                f"--n {self.n} does not match the descriptor dimension "
                f"{descriptor.dim}"
            )
        return descriptor

    def create_study(self) -> StrongMaximalStudy:
        return StrongMaximalStudy(
            self.load_descriptor(self.function),
            variant=self.variant,
            g=self.load_descriptor(self.g_function),
            resolution=self.resolution,
            literal=self.literal,
        )


def cmd_lemma_volume(args: argparse.Namespace) -> int:
    volume = lemma21_volume(args.n, args.R, args.r, args.c)
    polynomial = lemma21_polynomial(args.n, args.R + args.r)
    result = {
        "n": args.n,
        "R": args.R,
        "r": args.r,
        "c": args.c,
        "closed_form": volume,
        "coefficients": list(polynomial.coefficients),
        "normalized": [str(b) for b in polynomial.normalized],
        "constant": polynomial.constant,
    }
    if args.mc_samples:
        estimate = mc_volume(
            args.n, args.R, args.r, args.c, samples=args.mc_samples, seed=args.seed
        )
        result.update(
            mc_estimate=estimate.estimate,
            mc_stderr=estimate.stderr,
            mc_samples=estimate.samples,
            seed=estimate.seed,
        )
    dump_json(result, sys.stdout)
    return EXIT_OK


def cmd_limit_scan(config: RunConfig) -> int:
    study = config.create_study()
    summary = study.scan(config.lambdas, config.method, config.direction)
    scan = summary.scan
    if config.output is not None:
        write_csv(
            config.output,
            ("lambda", "measure", "weighted", "u", "method"),
            zip(
                scan.lambdas,
                scan.measures,
                scan.weighted,
                scan.u,
                [scan.method] * len(scan),
            ),
        )
    dump_json(summary.to_dict(), sys.stdout)
    gap = summary.relative_gap
    if config.max_gap is not None and gap is not None and gap > config.max_gap:
        logger.warning("Relative gap %.4g exceeds %.4g", gap, config.max_gap)
        return EXIT_TARGET_MISSED
    return EXIT_OK


def cmd_certify(config: RunConfig) -> int:
    study = config.create_study()
    certificate = study.certify(config.lambdas, config.method)
    dump_json(certificate.to_dict(), sys.stdout)
    return EXIT_OK if certificate.passed else EXIT_TARGET_MISSED


def cmd_maximal(config: RunConfig) -> int:
    study = config.create_study()
    field = study.maximal_field()
    if config.output is not None:
        centers = [axis.ravel() for axis in field.mesh()]
        columns = [f"x{k}" for k in range(field.dim)] + ["value", "method"]
        rows = (
            [*(c[i] for c in centers), value, Method.GRID.value]
            for i, value in enumerate(field.flat_values)
        )
        write_csv(config.output, columns, rows)
    dump_json(
        {
            "cells": list(field.cells),
            "max": float(field.values.max()),
            "bilinear": study.bilinear,
            "variant": config.variant.value,
            "method": Method.GRID.value,
        },
        sys.stdout,
    )
    return EXIT_OK


def cmd_distribution(config: RunConfig) -> int:
    study = config.create_study()
    curve = study.distribution(config.lambdas, config.method)
    if config.output is not None:
        uncertainty = (
            curve.uncertainty
            if curve.uncertainty is not None
            else np.full(len(curve), np.nan)
        )
        write_csv(
            config.output,
            ("lambda", "measure", "weighted", "uncertainty", "method"),
            zip(
                curve.lambdas,
                curve.measures,
                curve.weighted,
                uncertainty,
                curve.methods,
            ),
        )
    value, level = weak_phi_norm(curve)
    dump_json(
        {
            "weak_phi_norm": value,
            "lambda": level,
            "points": len(curve),
            "method": curve.methods[0],
        },
        sys.stdout,
    )
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    passed, failed = equivalence_suite(args.trials, seed=args.seed)
    dump_json({"passed": passed, "failed": failed, "trials": args.trials}, sys.stdout)
    return EXIT_OK if failed == 0 else EXIT_TARGET_MISSED


EXPERIMENTS = {
    "limit-scan": cmd_limit_scan,
    "certify": cmd_certify,
    "maximal": cmd_maximal,
    "distribution": cmd_distribution,
}


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    experiment = argparse.ArgumentParser(add_help=False)
    experiment.add_argument(
        "--function", required=True, help="descriptor JSON file or inline JSON"
    )
    experiment.add_argument(
        "--g-function", help="second descriptor, selects the bilinear operator"
    )
    experiment.add_argument(
        "--n", type=int, help="dimension (defaults to the descriptor's)"
    )
    experiment.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.UNCENTERED.value,
    )
    experiment.add_argument("--resolution", type=int, help="cells per axis")
    experiment.add_argument("--lambda-min", type=float, default=DEFAULT_LAMBDA_MIN)
    experiment.add_argument("--lambda-max", type=float, default=DEFAULT_LAMBDA_MAX)
    experiment.add_argument(
        "--points-per-decade", type=int, default=DEFAULT_POINTS_PER_DECADE
    )
    experiment.add_argument("--method", choices=[m.value for m in Method])
    experiment.add_argument("--output", type=Path, help="CSV destination")
    experiment.add_argument(
        "--literal-n1",
        action="store_true",
        help="literal n = 1 convention for phi and the weak weight",
    )

    parser = argparse.ArgumentParser(
        prog="strongmax",
        description="Limiting weak-type experiments for strong maximal operators.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    lemma = subparsers.add_parser(
        "lemma-volume", parents=[common], help="closed-form hyperbolic region volume"
    )
    lemma.add_argument("--n", type=int, required=True)
    lemma.add_argument("--R", type=float, required=True)
    lemma.add_argument("--r", type=float, required=True)
    lemma.add_argument("--c", type=float, required=True)
    lemma.add_argument(
        "--mc-samples",
        type=int,
        default=0,
        help=f"Monte Carlo cross-check (>= {MC_MIN_SAMPLES} samples)",
    )
    lemma.add_argument("--seed", type=int, default=0)

    scan = subparsers.add_parser(
        "limit-scan", parents=[common, experiment], help="weighted level-set scan"
    )
    scan.add_argument(
        "--direction", choices=[d.value for d in Direction], default="zero"
    )
    scan.add_argument(
        "--max-gap", type=float, help="exit 1 when the relative gap exceeds this"
    )

    subparsers.add_parser(
        "certify", parents=[common, experiment], help="operator norm lower bound"
    )
    subparsers.add_parser(
        "maximal", parents=[common, experiment], help="maximal function field"
    )
    subparsers.add_parser(
        "distribution", parents=[common, experiment], help="distribution curve"
    )

    oracle = subparsers.add_parser(
        "oracle-check", parents=[common], help="fast vs brute-force equivalence"
    )
    oracle.add_argument("--trials", type=int, default=20)
    oracle.add_argument("--seed", type=int, default=0)
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    try:
        if args.command == "lemma-volume":
            return cmd_lemma_volume(args)
        if args.command == "oracle-check":
            return cmd_oracle_check(args)
        return EXPERIMENTS[args.command](RunConfig.from_args(args))
    except StrongMaxError as error:
        print(f"strongmax: error: {error}", file=sys.stderr)
        return EXIT_INVALID
