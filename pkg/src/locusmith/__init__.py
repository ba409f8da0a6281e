"""Second-order geometry of regular and corank-1 surfaces and 3-manifolds from their 2-jets."""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticCubic,
    OrbitLabel,
    asymptotic_cubic,
    classify_orbit,
    classify_surface_jet,
    equivalence_check,
    eta_at_infinity,
    is_asymptotic,
    projection_asymptotic_correspondence,
)
from .errors import *  # noqa: F401,F403
from .forms import FirstForm, SecondForm, UnitTangentSet, evaluate_II, first_form, second_form, unit_tangent_set
from .jet import (
    MongeJet,
    NormalDirection,
    ProjectiveDirection,
    make_jet,
    rank_with_tolerance,
)
from .loci import (
    GridSpec,
    LocusInvariants,
    LocusSample,
    H_in_Ep,
    classify_locus,
    locus_frame,
    mean_curvature,
    sample_locus,
)
from .manifest import dump_jet, load_jet, load_manifest, parse_manifest
from .sections import (
    FamilySpec,
    normal_section,
    project_along,
    projection_first_form,
    section_family_classifier,
    verify_diagram,
)
