"""Box-ball systems of type A_n^(1) through rigged configurations and tau functions."""

from importlib.metadata import PackageNotFoundError, version

from .bbs import evolution_pattern, evolve_Tl
from .crystal import Path, combinatorial_R, make_element, path_from_words, r_matrix
from .kkr import kkr_from_path, kkr_to_path, unrestricted_from_path
from .rigged import RiggedConfiguration
from .scattering import SolitonSpec, kkr_vertex, nsoliton_tau, scattering_data, solve_ivp
from .tau import reconstruct_path, rho_table, tau_table, verify_triple
from .verification import SuiteOptions, run_suite

try:
    __version__ = version("boxball-tau")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "Path",
    "RiggedConfiguration",
    "SolitonSpec",
    "SuiteOptions",
    "__version__",
    "combinatorial_R",
    "evolution_pattern",
    "evolve_Tl",
    "kkr_from_path",
    "kkr_to_path",
    "kkr_vertex",
    "make_element",
    "nsoliton_tau",
    "path_from_words",
    "r_matrix",
    "reconstruct_path",
    "rho_table",
    "run_suite",
    "scattering_data",
    "solve_ivp",
    "tau_table",
    "unrestricted_from_path",
    "verify_triple",
]
