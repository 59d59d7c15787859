"""Finite lattices, linear lattices of GF(q)^n and subspace codes built on them."""
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    LatticeCodesError,
    MembershipError,
    NotALatticeError,
    NotAPosetError,
    PartitionError,
    PreconditionError,
    RankError,
    ShapeError,
)
from .gfcore import FieldSpec, SubspaceRepr, field_spec, rref, span, subspace_intersect, subspace_sum
from .lattice_core import FiniteLattice, boolean_lattice, chain, diamond, from_covers, m3, n5
from .lattice_props import (
    PropertyReport,
    Witness,
    find_M3,
    find_N5,
    is_atomistic,
    is_distributive,
    is_geometric,
    is_modular,
    is_semimodular,
    is_uniquely_atomistic,
    unique_decomposition,
    verify_witness,
)
from .linear_lattice import ProjectiveSpaceLattice, build_projective_lattice, subspace_distance
from .subspace_codes import (
    PartitionCodeSpec,
    SubspaceCode,
    build_partition_code,
    canonical_complement,
    search_complement,
    verify_complement,
    verify_linear,
)
from .theorem_lab import enumerate_sublattices, run_theorem_suite

__version__ = "0.1.0"
