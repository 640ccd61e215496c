"""QAOA for weighted MAX k-CUT with binary and one-hot encodings."""
from .cut import CutResult, brute_force, cut_value, random_baseline, reference_ratio
from .graph import Graph, barbell, gen_barabasi_albert, gen_erdos_renyi, read_graph, total_weight, write_graph
from .hamiltonian import DiagonalHamiltonian, Encoding, EncodingScheme, build_phase_diagonal, make_scheme
from .qaoa import GridConfig, QaoaProblem, QaoaRun, QaoaSchedule, interpolate, run_qaoa

__all__ = [
    "CutResult", "brute_force", "cut_value", "random_baseline", "reference_ratio",
    "Graph", "barbell", "gen_barabasi_albert", "gen_erdos_renyi", "read_graph", "total_weight", "write_graph",
    "DiagonalHamiltonian", "Encoding", "EncodingScheme", "build_phase_diagonal", "make_scheme",
    "GridConfig", "QaoaProblem", "QaoaRun", "QaoaSchedule", "interpolate", "run_qaoa",
]
__version__ = "0.1.0"
