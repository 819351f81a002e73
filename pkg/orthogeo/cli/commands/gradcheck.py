"""``orthogeo gradcheck`` — the finite-difference oracle suite."""

from __future__ import annotations

import argparse

from orthogeo.core.config import settings
from orthogeo.services.analysis import gradient_oracles


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--probes", type=int, default=20, help="coordinates probed per check")
    parser.add_argument("--h", type=float, default=1e-6, help="central-difference step")
    parser.add_argument("--tolerance", type=float, default=settings.GRADCHECK_TOLERANCE)


def run(args: argparse.Namespace) -> int:
    table = gradient_oracles(seed=args.seed, probes=args.probes, h=args.h, tolerance=args.tolerance)
    print(table.to_string(index=False))

    worst = table.loc[table["max_error"].idxmax()]
    print(f"max relative error {worst['max_error']:.3e} ({worst['check']} at {worst['worst']})")
    if not table["passed"].all():
        print(f"FAILED: tolerance {args.tolerance:.1e} exceeded")
        return 1
    return 0
