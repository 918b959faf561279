"""Treewidth and trelliswidth of linear codes, with brute-force oracles."""

from .codes import (
    GhwProfile, LinearCode, UProfile, code_from_generator, dim_shortened, ghw_bruteforce,
    ghw_rm, load_code, reed_muller, reed_solomon, u_profile_bruteforce,
)
from .field_linalg import Matrix, PrimeField, rank, rref
from .treedecomp import (
    CubicTree, constraint_complexity, cubic_tree_enumerate, edge_separator_vstar,
    jordan_separator, treewidth_exhaustive, width_report,
)
from .trellis import (
    CoordinateOrder, TrellisProfile, rm_standard_profile, sigma_rm, tau_mds, tau_rm,
    trellis_profile, trelliswidth_exhaustive,
)
from .verify import VerificationReport

__all__ = [
    "CoordinateOrder", "CubicTree", "GhwProfile", "LinearCode", "Matrix", "PrimeField",
    "TrellisProfile", "UProfile", "VerificationReport", "code_from_generator",
    "constraint_complexity", "cubic_tree_enumerate", "dim_shortened", "edge_separator_vstar",
    "ghw_bruteforce", "ghw_rm", "jordan_separator", "load_code", "rank", "reed_muller",
    "reed_solomon", "rm_standard_profile", "rref", "sigma_rm", "tau_mds", "tau_rm",
    "trellis_profile", "trelliswidth_exhaustive", "treewidth_exhaustive",
    "u_profile_bruteforce", "width_report",
]
