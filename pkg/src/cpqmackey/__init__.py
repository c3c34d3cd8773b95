"""Exact computations with C_pq Mackey functors and RO(C_pq)-graded cohomology of a point."""

from .catalog import catalog, parse_name
from .cohomology import (
    DependsOnChoice,
    Determined,
    FixedDims,
    NotTabulated,
    NotTabulatedError,
    ParityError,
    VirtualRep,
    cohomology_orbit,
    cohomology_point,
    cohomology_sphere,
    fixed_dims,
    level_groups,
    lewis_table,
    parse_rep,
    recurrence_check,
)
from .freeness import (
    Cell,
    CellComplex,
    FreenessViolation,
    check_even_type,
    free_decomposition,
    generator_table,
    grassmannian_complex,
    ll,
    projective_space_complex,
    verify_vanishing,
)
from .groups import FGAbelianGroup, GroupHom
from .homological import ext1, hom_mackey, resolution
from .mackey import MackeyFunctor, MackeyHom, SubgroupLattice, validate

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "CellComplex",
    "DependsOnChoice",
    "Determined",
    "FGAbelianGroup",
    "FixedDims",
    "FreenessViolation",
    "GroupHom",
    "MackeyFunctor",
    "MackeyHom",
    "NotTabulated",
    "NotTabulatedError",
    "ParityError",
    "SubgroupLattice",
    "VirtualRep",
    "catalog",
    "check_even_type",
    "cohomology_orbit",
    "cohomology_point",
    "cohomology_sphere",
    "ext1",
    "fixed_dims",
    "free_decomposition",
    "generator_table",
    "grassmannian_complex",
    "hom_mackey",
    "level_groups",
    "lewis_table",
    "ll",
    "parse_name",
    "parse_rep",
    "projective_space_complex",
    "recurrence_check",
    "resolution",
    "validate",
    "verify_vanishing",
]
