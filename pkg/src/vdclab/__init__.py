"""vdclab: finite augmented virtual double categories, with bounded
brute-force verification of universal properties (restrictions, loose
composites, extensions, colimit conditions, density, equivalence) and a
small CLI for running check suites."""

from .core import (AvdcHandle, AvdFunctor, Bounds, BoundaryError, CellRecord,
                   CheckReport, CompositionError, ForeignCellError, LooseArrow,
                   LoosePath, ObjectRef, TightArrow, TightTransformation,
                   ValidationError, paste_cells, thin_functor, validate_avdc,
                   validate_functor, validate_transformation)
from .presented import (FiniteCategory, MonoidalCategoryTable, QuantaleTable,
                        discrete_category, dump_presentation,
                        load_presentation, parse_presentation,
                        preorder_category, quantale_avdc, rel_avdc,
                        shape_avdc, small_rel_universe, two_element_quantale,
                        vw_avdc)
from .universal import (find_extension, find_loose_composite,
                        find_restriction, is_cartesian, is_cocartesian,
                        is_split)
from .constructions import (ColoredSet, EnrichedCategory, MonoidRecord,
                            BimoduleRecord, MatrixRecord, classifier_bijection,
                            classifier_category, diminish, diminish_inclusion,
                            embed, enriched_to_monoid, full_sub, mat,
                            mod_construction, monoid_to_enriched, nerve,
                            preobjects, prof, slice_avdc, transpose_mod)
from .colimits import (DiagramModule, Modulation, TightCocone, build_colimit,
                       canonical_presentation, check_condition,
                       check_strong_unital, enumerate_cocones,
                       enumerate_modules, induced_cocone, is_versatile_colimit,
                       restrict_module, validate_cocone)
from .density import (canonical_cocone_density, check_invariance_finality,
                      connected_components, is_atomic, is_dense,
                      is_equivalence, is_final, is_pulling_admissible,
                      is_simply_connected, iso_fibrant, maximal_objects,
                      pulling_sides, under_category)
from .cli import (SuiteConfig, emit_report, parse_suite, run_suite)

__all__ = [
    # core
    "AvdcHandle", "AvdFunctor", "Bounds", "BoundaryError", "CellRecord",
    "CheckReport", "CompositionError", "ForeignCellError", "LooseArrow",
    "LoosePath", "ObjectRef", "TightArrow", "TightTransformation",
    "ValidationError", "paste_cells", "thin_functor", "validate_avdc",
    "validate_functor", "validate_transformation",
    # presented
    "FiniteCategory", "MonoidalCategoryTable", "QuantaleTable",
    "discrete_category", "dump_presentation", "load_presentation",
    "parse_presentation", "preorder_category", "quantale_avdc", "rel_avdc",
    "shape_avdc", "small_rel_universe", "two_element_quantale", "vw_avdc",
    # universal
    "find_extension", "find_loose_composite", "find_restriction",
    "is_cartesian", "is_cocartesian", "is_split",
    # constructions
    "ColoredSet", "EnrichedCategory", "MonoidRecord", "BimoduleRecord",
    "MatrixRecord", "classifier_bijection", "classifier_category", "diminish",
    "diminish_inclusion", "embed", "enriched_to_monoid", "full_sub", "mat",
    "mod_construction", "monoid_to_enriched", "nerve", "preobjects", "prof",
    "slice_avdc", "transpose_mod",
    # colimits
    "DiagramModule", "Modulation", "TightCocone", "build_colimit",
    "canonical_presentation", "check_condition", "check_strong_unital",
    "enumerate_cocones", "enumerate_modules", "induced_cocone",
    "is_versatile_colimit", "restrict_module", "validate_cocone",
    # density
    "canonical_cocone_density", "check_invariance_finality",
    "connected_components", "is_atomic", "is_dense", "is_equivalence",
    "is_final", "is_pulling_admissible", "is_simply_connected", "iso_fibrant",
    "maximal_objects", "pulling_sides", "under_category",
    # cli
    "SuiteConfig", "emit_report", "parse_suite", "run_suite",
]

__version__ = "0.1.0"
