"""Width trees: labelled ditrees recording multiple c-bridge decompositions of
knots and tangles, with exact invariants, a min flow / max cut lower bound on
net extent, and realization as combinatorial tangle blueprints."""

from .core import (
    CanonicalForm,
    Classification,
    Ditree,
    LabelFunction,
    SourceSinkSummary,
    WidthTree,
    canonical_form,
    classify,
    equivalent,
    is_coherent_path,
    is_product_edge,
    sources_sinks,
    validate,
    width_tree,
)
from .errors import WidthTreeError
from .flows import (
    AugmentedDitree,
    BoundCertificate,
    Flow,
    StrongCut,
    augment,
    cut_size,
    cut_value,
    extend_labels,
    lower_bound,
    make_flow,
    max_cut_bruteforce,
    min_flow_max_cut,
    synthesize_equality_labelling,
)
from .harness import EnumerationSpec, family
from .invariants import (
    InvariantReport,
    amalgamate_leaf,
    full_amalgamation,
    gabai_candidate,
    mu_transform,
    net_extent,
    net_extent_by_vertex_sums,
    topological_flags,
    trunk,
    width,
)
from .tangle import (
    CTrivialTangleData,
    DecompositionBlueprint,
    Trivialpod,
    assemble,
    associate,
    count_components,
    knotify,
    realize,
)
from .io import parse_width_tree, serialize_width_tree

__version__ = "0.1.0"
