"""
Command-line front end.

    python src/main.py certify --p1 1/2,1/3 --p2 1/2,1/4
    python src/main.py certify --third --p1 1/3,1/4 --p2 1/3,1/5
    python src/main.py oracle --p1 1/2,1/3,1/4 --p2 1/2,1/3,1/4 --jobs 4
    python src/main.py audit --p1 1/2,1/2,1/2 --p2 1/2,1/2,1/2 --family1 a.json --family2 b.json
    python src/main.py chain --p1 3/5,1/3 --p2 3/5,1/3 --family1 a.json --family2 b.json
    python src/main.py probe single --p 3/5,3/5,3/5
    python src/main.py examples

JSON goes to standard output (or --output); logs go to stderr.
Exit codes: 0 verified, 1 verified false / infeasible, 2 usage or precondition.
"""

import argparse
import logging
import sys
from typing import Optional

import pydantic

from config import ConfigManager
from core.exceptions import CertificateError, ExtremalError, PreconditionError, ValidationError
from core.schema import RunConfig
from services import VerificationService
from utils.utils import parse_rational_list, write_json

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2


def _handle_service_error(e: Exception) -> int:
    """Convert toolkit exceptions to exit codes"""
    if isinstance(e, (ValidationError, PreconditionError)):
        logger.error(str(e))
        return EXIT_USAGE
    elif isinstance(e, CertificateError):
        logger.error(str(e))
        return EXIT_FALSE
    elif isinstance(e, pydantic.ValidationError):
        logger.error(f"invalid arguments: {e}")
        return EXIT_USAGE
    else:
        logger.error(f"unexpected failure: {e}")
        return EXIT_USAGE


def build_parser(config: ConfigManager) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p1", help="probability vector, e.g. 1/2,1/3,1/4")
    common.add_argument("--p2", help="second probability vector (defaults to --p1)")
    common.add_argument("--n", type=int, help="ground set size; a one-entry vector is repeated n times")
    common.add_argument("--jobs", type=int, default=config.get_jobs())
    common.add_argument("--seed", type=int, default=config.get_seed())
    common.add_argument("--tolerance", type=float, default=config.get_tolerance())
    common.add_argument("--allow-large", action="store_true", help="lift the oracle cap from n = 5 to n = 6")
    common.add_argument("--output", help="write the JSON report here instead of standard output")
    common.add_argument("--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="extremal", description="Certificates and oracles for cross-intersecting families")
    sub = ap.add_subparsers(dest="command", required=True)

    certify = sub.add_parser("certify", parents=[common], help="verify the closed-form dual certificate")
    certify.add_argument("--third", action="store_true", help="use the eps1 = eps2 = sqrt(p1p2)/2 certificate")
    certify.add_argument("--eps2", help="rational eps2, or 'auto' for the small-eps2 search")

    sub.add_parser("oracle", parents=[common], help="exhaustive maximum over up-set pairs")

    audit = sub.add_parser("audit", parents=[common], help="weak duality audit of a family pair")
    audit.add_argument("--family1", required=True)
    audit.add_argument("--family2", required=True)
    audit.add_argument("--eps2")

    chain = sub.add_parser("chain", parents=[common], help="p1 > 1/2 reduction chain for a family pair")
    chain.add_argument("--family1", required=True)
    chain.add_argument("--family2", required=True)

    probe = sub.add_parser("probe", parents=[common], help="conjecture probes (report only)")
    probe.add_argument("probe", choices=["weak", "stability", "single"])
    probe.add_argument("--p", dest="p_single", help="probability vector for the single-family probe")
    probe.add_argument("--eps", help="comma-separated eps grid for the stability probe")

    sub.add_parser("examples", parents=[common], help="check the exceptional example pairs")
    return ap


def to_run_config(args: argparse.Namespace) -> RunConfig:
    """Parse every rational up front so bad vectors fail before any computation."""
    p1 = getattr(args, "p_single", None) or args.p1
    return RunConfig(
        command=args.command,
        probe=getattr(args, "probe", None),
        n=args.n,
        pv1=parse_rational_list(p1) if p1 else None,
        pv2=parse_rational_list(args.p2) if args.p2 else None,
        family1_path=getattr(args, "family1", None),
        family2_path=getattr(args, "family2", None),
        eps2=getattr(args, "eps2", None),
        third=getattr(args, "third", False),
        allow_large=args.allow_large,
        eps_grid=parse_rational_list(args.eps) if getattr(args, "eps", None) else [],
        tolerance=args.tolerance,
        jobs=max(1, args.jobs),
        seed=args.seed,
        output=args.output,
    )


def main(argv: Optional[list[str]] = None) -> int:
    config = ConfigManager()
    args = build_parser(config).parse_args(argv)
    level = logging.DEBUG if args.verbose or config.get_debug_mode() else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logger.debug(f"environment={config.get_environment()} command={args.command}")

    try:
        run_config = to_run_config(args)
        code, report = VerificationService().dispatch(run_config)
    except (ExtremalError, pydantic.ValidationError) as e:
        return _handle_service_error(e)

    text = write_json(report.model_dump(), run_config.output)
    if run_config.output is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
