"""Exact linearity-testing laboratory over F2."""

from .gf2 import F2Matrix, F2Vector, IncrementalBasis, express_in_span, rank
from .boolfn import (
    FourierProfile,
    LinearFn,
    QuadraticFn,
    TruthTable,
    agreement,
    derivative,
    distance_to_linear,
    evaluate,
    fourier_profile,
    moment_vector,
    parse_function,
    sample_linear,
    sample_quadratic,
    walsh_spectrum,
)
from .engine import (
    ACCEPT,
    REJECT,
    Inner,
    Leaf,
    RandomizedTest,
    TestTree,
    acceptance_exact,
    acceptance_monte_carlo,
    blr_instance,
    complete_graph_instance,
    dumps,
    load_document,
    run_tree,
    sample_instance,
)
from .analysis import analyze_tree, forced_value, quadratic_rank
from .bounds import phi, psi, theorem_bound
from .search import frontier, search_optimal

__version__ = "0.1.0"
