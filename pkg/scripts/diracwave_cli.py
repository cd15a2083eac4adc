#!/usr/bin/env python3
"""
scripts/diracwave_cli.py — Batch front end for the damped wave solvers.

Usage:
    python scripts/diracwave_cli.py spectrum --model interval --pq 1/2 --alpha 2 --im-max 7
    python scripts/diracwave_cli.py verify --pq 1/3 --alpha 1 --trunc 200
    python scripts/diracwave_cli.py basis --pq 1/2 --alpha 1 --out basis.json
    python scripts/diracwave_cli.py graph-spectrum --model star --n 3 --alpha 3 --im-max 2.5
    python scripts/diracwave_cli.py green --pq 1/3 --alpha 1 --lambda 0.5+0.5i --grid 5 --format csv

Complex literals are written "re+imi" ("2", "-1.5", "3i", "1-0.5i"); a value
starting with "-" must be attached with "=", e.g. --alpha=-i.

Exit status:
    0  success (a false Riesz verdict is a valid result)
    1  usage or configuration error
    2  solver or quadrature failure
    3  identity violation
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import EXIT_OK, EXIT_USAGE, DomainError, SpectralError, exit_code_for  # noqa: E402
from src.core.models import ModelKind, OutputFormat  # noqa: E402
from src.services.config_parser import LiteralParser  # noqa: E402
from src.services.orchestrator import RunConfig, SpectralOrchestrator  # noqa: E402
from src.services.serializer import ReportSerializer  # noqa: E402

logger = logging.getLogger("diracwave")

_literals = LiteralParser()


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise DomainError (exit 1) instead of exiting with status 2."""

    def error(self, message):
        raise DomainError(message)


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--model", choices=[m.value for m in ModelKind], default="interval")
    sp.add_argument("--pq", type=_literals.parse_fraction, help="rational placement a = pπ/q, as P/Q")
    sp.add_argument("--a", type=float, help="real placement a ∈ (0, π)")
    sp.add_argument("--n", type=int, help="edge count of the star graph")
    sp.add_argument("--alpha", type=_literals.parse_complex, default=0j, help="damping, e.g. 1+2i")
    sp.add_argument("--im-max", type=float, default=20.0, help="window half-height (default: 20)")
    sp.add_argument("--re-max", type=float, default=None, help="window half-width (default: auto)")
    sp.add_argument("--trunc", type=int, default=64, help="truncation N (default: 64)")
    sp.add_argument("--format", choices=[f.value for f in OutputFormat], default="json")
    sp.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    sp.add_argument("--tol", type=float, default=None, help="absolute verdict tolerance")
    sp.add_argument("--verbose", action="store_true", help="enable debug logging")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(
        prog="diracwave",
        description="Spectra and trace identities of the wave equation with Dirac damping.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (
        ("spectrum", "eigenvalue table sorted by Im λ"),
        ("verify", "trace report and Riesz verdict"),
        ("basis", "Gram ladder, coverage deficit and biorthogonality residual"),
        ("graph-spectrum", "eigenvalues of the star graph (needs --model star)"),
    ):
        _common(sub.add_parser(name, help=text))
    green = sub.add_parser("green", help="Green kernel on a grid of [0, π]² (CSV or JSON)")
    _common(green)
    green.add_argument("--lambda", dest="lam", type=_literals.parse_complex, required=True)
    green.add_argument("--grid", type=int, default=9, help="points per axis (default: 9)")
    return ap


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        model=ModelKind(args.model),
        pq=args.pq,
        a=args.a,
        n=args.n,
        alpha=args.alpha,
        im_max=args.im_max,
        re_max=args.re_max,
        truncation=args.trunc,
        lam=getattr(args, "lam", None),
        grid=getattr(args, "grid", 9),
        output_format=OutputFormat(args.format),
        output_path=args.out,
        tol=args.tol,
        verbose=args.verbose,
    )


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except DomainError as exc:
        print(f"diracwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = _config(args)
        result = SpectralOrchestrator(config).run(args.command)
    except SpectralError as exc:
        code = exit_code_for(exc)
        logger.error("%s failed: %s", args.command, exc)
        print(f"diracwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code

    serializer = ReportSerializer()
    if config.output_path is not None:
        path = serializer.write(result, config.output_format, config.output_path)
        logger.info("Wrote %s", path)
    else:
        sys.stdout.write(serializer.render(result, config.output_format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
