"""Exhaustive verification of hyperplane-family characterisations of the
parabolic quadric Q(2n, q) in PG(2n, q)."""

__version__ = "0.1.0"

from .field import FieldSpec, field_make, field_of_order, kernel_basis, rank, solve
from .space import CodimTwoFlat, ProjectiveSpace, gaussian_binomial
from .quadrics import (
    QuadraticForm, SectionClass, classify_section, fit_quadric, nucleus, perp,
    point_set, size_cone_over, size_parabolic, size_pm, size_tangent_section,
    standard_elliptic, standard_hyperbolic, standard_parabolic,
)
from .families import (
    ColouringReport, CounterexampleAlert, HyperplaneFamily, SpectrumReport, Verdict,
    check_condition_I, check_condition_II, codim2_black_spectrum, colour_points,
    family_from_classification, odd_q_spectrum, theorem_conclusion_check,
    verify_counting_identities,
)
from .constructions import (
    Hyperoval, exhaustive_switch_search, hyperoval_regular, hyperoval_translation,
    nucleus_line_switch, solids_disjoint_from, verify_quasi_quadric,
)

__all__ = [
    "CodimTwoFlat", "ColouringReport", "CounterexampleAlert", "FieldSpec", "Hyperoval",
    "HyperplaneFamily", "ProjectiveSpace", "QuadraticForm", "SectionClass", "SpectrumReport",
    "Verdict", "check_condition_I", "check_condition_II", "classify_section",
    "codim2_black_spectrum", "colour_points", "exhaustive_switch_search",
    "family_from_classification", "field_make", "field_of_order", "fit_quadric",
    "gaussian_binomial", "hyperoval_regular", "hyperoval_translation", "kernel_basis",
    "nucleus", "nucleus_line_switch", "odd_q_spectrum", "perp", "point_set", "rank",
    "size_cone_over", "size_parabolic", "size_pm", "size_tangent_section", "solids_disjoint_from",
    "solve", "standard_elliptic", "standard_hyperbolic", "standard_parabolic",
    "theorem_conclusion_check", "verify_counting_identities", "verify_quasi_quadric",
]
