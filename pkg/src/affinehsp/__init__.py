"""Exact simulation of Fourier sampling for hidden subgroups of affine and q-hedral groups."""

from __future__ import annotations

from .distributions import OutcomeDistribution, total_variation
from .groups import (GroupElement, GroupSpec, HiddenOracle, PromiseViolation, SubgroupDesc,
                     all_subgroups, make_subgroup_oracle)
from .kernels import backend as kernel_backend
from .reconstruction import (ReconstructionResult, determine_subgroup_order,
                             info_reconstruct_subgroup, solve_hcp_affine, solve_hsp_qhedral)

__version__ = "0.1.0"

__all__ = [
    "GroupElement", "GroupSpec", "HiddenOracle", "OutcomeDistribution", "PromiseViolation",
    "ReconstructionResult", "SubgroupDesc", "all_subgroups", "determine_subgroup_order",
    "info_reconstruct_subgroup", "kernel_backend", "make_subgroup_oracle", "solve_hcp_affine",
    "solve_hsp_qhedral", "total_variation", "__version__",
]
