"""voxring: homology, cohomology generators and the cup-product ring of
3D binary pictures via cubical complexes and algebraic-topological models
over Z/2."""

from .atmodel import (ATModel, Cocycle, SpanningForest, boundary_atmodel,
                      build_spanning_forest, cocycle_value, extend_atmodel,
                      face_reduction, incremental_atmodel, subdivide_cell,
                      verify_atmodel)
from .chains import Chain, GradedChainComplex, boundary_chain, chain_add, scalar_product
from .cubical import (AbstractCubicalComplex, CubicalComplex, ElementaryCube,
                      boundary_subcomplex, check_square_order,
                      complex_from_voxels, cube_facets, cube_vertices)
from .cup import (CupMatrix, SimplicialComplex, cup_equivalence_2d,
                  cup_product, cup_product_cubical, cup_product_matrix,
                  cup_product_simplicial, cup_rank_crosscheck,
                  discriminate_by_rank, triangulate)
from .errors import IntegrityError, ParseError, PreconditionError, UsageError
from .oracle import betti_numbers
from .picture import (Picture3D, VoxelCycle, complement_picture,
                      cycle_to_voxels, foreground_components, parse_picture,
                      serialize_picture)
from .pipeline import AnalysisReport, analyze_picture

__version__ = "0.1.0"

__all__ = [
    "ATModel", "AbstractCubicalComplex", "AnalysisReport", "Chain", "Cocycle",
    "CubicalComplex", "CupMatrix", "ElementaryCube", "GradedChainComplex",
    "IntegrityError", "ParseError", "Picture3D", "PreconditionError",
    "SimplicialComplex", "SpanningForest", "UsageError", "VoxelCycle",
    "analyze_picture", "betti_numbers", "boundary_atmodel", "boundary_chain",
    "boundary_subcomplex", "build_spanning_forest", "chain_add",
    "check_square_order", "cocycle_value", "complement_picture",
    "complex_from_voxels", "cube_facets", "cube_vertices",
    "cup_equivalence_2d", "cup_product", "cup_product_cubical",
    "cup_product_matrix", "cup_product_simplicial", "cup_rank_crosscheck",
    "cycle_to_voxels", "discriminate_by_rank", "extend_atmodel", "face_reduction",
    "foreground_components", "incremental_atmodel", "parse_picture",
    "scalar_product", "serialize_picture", "subdivide_cell", "triangulate",
    "verify_atmodel",
]
