"""Finite higher-rank graphs, cylinder measures on their infinite path
spaces, and finite-depth Cuntz-Krieger representation checks."""

try:
    from ._kgr import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _kgr import *  # noqa: F401,F403  (build-tree layout)

__all__ = [
    "Graph",
    "Measure",
    "KgrError",
    "load_graph",
    "load_graph_json",
    "load_measure",
    "load_measure_json",
    "hellinger",
    "validate",
    "ck_verify",
    "monic_check",
    "monic_check_interval",
    "disjointness",
    "commutant",
    "equivalence",
    "universal_check",
]
