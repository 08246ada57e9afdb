"""Exact pair counting and spectral certificates for diameter-1 point sets.

Subpackage map: geometry (points, metrics, text formats), generators
(extremal families), counting (brute/grid engines), pipeline (hull ->
boxes -> matrix -> spectra chain), graphs (box-graph profiling), lens
(two-annuli intersection), experiments (sweeps, fits, annealing), cli.
"""

from .counting import PairCounts, count_pairs_brute, count_pairs_grid, count_pairs_metric
from .generators import GeneratorSpec, make
from .geometry import FiniteMetric, PointSet, distance, normalize_to_unit_diameter
from .pipeline import BoundReport, bound_report

__version__ = "0.1.0"

__all__ = [
    "PairCounts",
    "count_pairs_brute",
    "count_pairs_grid",
    "count_pairs_metric",
    "GeneratorSpec",
    "make",
    "FiniteMetric",
    "PointSet",
    "distance",
    "normalize_to_unit_diameter",
    "BoundReport",
    "bound_report",
    "__version__",
]
