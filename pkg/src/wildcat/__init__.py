"""Stokes combinatorics, fission-space dimension calculus, and numeric
moment-map realizations for wild character varieties."""

from .cartan import (
    CartanError,
    LeviDatum,
    Root,
    RootDatum,
    build_abstract,
    build_gl,
    full_levi,
    levi_of_vanishing,
    torus_levi,
)
from .irregular import (
    CurvePoint,
    IrregularCurve,
    IrregularType,
    centralizer,
    centralizer_chain,
    degree,
    irregular_type,
    levels,
    pair_root,
    scale_degrees,
    tame_type,
)
from .stokes import (
    StokesReport,
    rays_of_linear_type,
    singular_directions,
    stokes_budget,
)
from .fission import (
    ColouredGraph,
    ConjClass,
    Group,
    LeafReport,
    SpaceError,
    SpaceExpr,
    class_space,
    coloured_graph,
    double,
    fission_space,
    fuse,
    glue,
    graph_blocks,
    hom_stokes,
    nesting_decomposition,
    point_class,
    reduce_graph_blocks,
    reduce_space,
    regular_gl_class,
    semisimple_gl_class_dim,
    space_A,
    wild_leaf_dim,
)
from .deform import (
    AdmissibilityReport,
    CurveFamily,
    Event,
    check_admissible,
    curve_family,
    wall_events,
)
from .matrix_real import (
    BlockStructure,
    FissionPoint,
    GStarPoint,
    MatrixError,
    VerifyReport,
    act,
    big_cell_factor,
    covering_maps,
    moment_map,
    opp_intersection_local_dim,
    opp_intersection_test,
    sample_fission_point,
    sample_gstar_point,
    ul_factor,
    verify_suite,
)
from .report import TOOL_VERSION as __version__

__all__ = [name for name in dir() if not name.startswith("_")]
