"""Bound quivers, trivial extensions, multi-layer quivers and translation windows."""

from .algebra import (
    BoundQuiver,
    DimensionTable,
    LinearCombination,
    PathAlgebra,
    bound_path_basis,
    combination,
    dimension_table,
    is_n_properly_graded,
    maximal_bound_paths,
    normalize_relations,
    quadratic_closure_check,
    quadratic_dual,
)
from .constructions import (
    MultiLayerQuiver,
    ReturningArrowQuiver,
    component_phi,
    double_returning_quiver,
    embed_multilayer,
    multilayer_quiver,
    returning_arrow_quiver,
    section_five_window,
    zq_first_window,
    zq_second_window,
)
from .dsl import QuiverDocument, load_fixture, parse, serialize
from .errors import QuiverLabError
from .geometry import (
    HammockReport,
    SliceViolation,
    TauSlice,
    hammock,
    is_complete_tau_slice,
    mutate,
    mutation_path,
    reduce_depth,
    tau_vv_inverse,
    verify_translation_axioms,
)
from .homological import (
    QuiverRepresentation,
    almost_koszul_check,
    graded_resolution,
    projective,
    simple,
    syzygy,
    type_classifier,
)
from .presentations import (
    assemble_module,
    bimodule_D,
    bimodule_U,
    bimodule_U_hat,
    bimodule_U_tilde,
    matrix_presentation,
    split_module,
    tensor_presentation,
    verify_matrix_iso,
)
from .quiver import Arrow, Grading, Path, Quiver, Walk, depth, nicely_graded, reindex, validate, walk_grade
from .window import TranslationWindow
