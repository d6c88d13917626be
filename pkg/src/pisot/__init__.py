"""Common dynamics of two Pisot substitutions sharing an incidence matrix."""

from ._kernels import BACKEND
from .balanced import (
    BalancedBlock,
    BlockMorphism,
    IntersectionReport,
    Status,
    aligned_letter_check,
    common_points,
    decompose_minimal,
    intersection_morphism,
    is_balanced,
    is_minimal,
    seed_balanced_prefix,
)
from .fractal import (
    GifsSystem,
    PointCloud,
    RasterImage,
    SteppedLine,
    gifs_cloud,
    gifs_system,
    interior_heuristic,
    rauzy_cloud,
    render_ppm,
    stepped_line,
)
from .spectral import (
    Classification,
    PerronData,
    char_poly,
    classify,
    perron_data,
    project_stable,
    stable_action,
)
from .words import (
    FixedPointStream,
    Substitution,
    ValidationError,
    abelianize,
    apply,
    incidence_matrix,
    is_primitive,
    periodic_point,
    prefix_suffix_automaton,
    strong_coincidence,
)
from .cli import parse_substitution
