from __future__ import annotations

import argparse
from pathlib import Path

from cw2lab.domain.models import COMMANDS


def _int_list(raw: str) -> list[int]:
    try:
        return [int(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from exc


def _float_list(raw: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    """Flags default to None so that only explicitly passed values override the config file."""
    parser = argparse.ArgumentParser(
        prog="cw2lab",
        description="Exact finite-N checks of the two-group Curie-Weiss limit laws.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n-schedule", dest="n_schedule", type=_int_list, help="e.g. 500,1000,2000,4000")
    parser.add_argument("--alpha1", type=float)
    parser.add_argument("--alpha2", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--betas", type=_float_list, help="inverse temperatures for solve-m")
    parser.add_argument("--kmax", dest="k_max", type=int)
    parser.add_argument("--lmax", dest="l_max", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--output", help="output file, '-' for stdout")
    parser.add_argument("--config", type=Path, help="JSON config file; flags override it")
    parser.add_argument("--epsilon", type=float, help="LLN ball radius")
    parser.add_argument("--n-draws", dest="n_draws", type=int)
    parser.add_argument("--sweeps", type=int)
    parser.add_argument("--burn-in", dest="burn_in", type=int)
    parser.add_argument("--thin", type=int)
    parser.add_argument("--log-level", dest="log_level")
    return parser
