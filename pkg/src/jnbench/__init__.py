"""Exact-arithmetic workbench for fractal tower constructions and
John-Nirenberg type oscillation functionals.

The package builds truncated self-similar "tower" functions in closed form,
evaluates oscillation sums and length-capped moduli exactly at any depth,
searches for extremal partitions, and replays a registry of pass/fail
verification claims (see jnbench.claims).
"""

from .claims import ClaimReport, run_all, run_claim, write_csv
from .geometry import Coord, Interval
from .towers import FAMILIES, Schedule, TowerSet, build
from .xreal import ExtReal

__version__ = "0.1.0"

__all__ = [
    "ClaimReport", "Coord", "ExtReal", "FAMILIES", "Interval", "Schedule",
    "TowerSet", "build", "run_all", "run_claim", "write_csv", "__version__",
]
