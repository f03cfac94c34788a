"""Orthogonally a-Jensen mappings on finite Hilbert C*-modules.

The package builds block matrix C*-algebras and free modules over them,
samples orthogonal vector pairs, checks the Jensen functional equation and
the identities it implies, and extracts the additive + quadratic + constant
decomposition with a certified property report.
"""
from .algebra import (
    AlgebraElement,
    AlgebraShape,
    Coefficient,
    add,
    adjoint,
    cstar_norm,
    element_from_obj,
    invert,
    is_self_adjoint,
    mul,
    neg,
    residual,
    scale,
    spectrum_bounds,
    sub,
    unit,
    validate_coefficient,
    zero,
)
from .errors import (
    CstarJensenError,
    DomainError,
    InvalidMode,
    InvalidSampler,
    IoError,
    NearSingular,
    NotSelfAdjoint,
    OrderViolation,
    PairConditionViolated,
    PairNotValidated,
    ParseError,
    ShapeError,
    SpaceMismatch,
    ValidationError,
)
from .harness import (
    CampaignReport,
    Scenario,
    emit_report,
    load_scenario,
    run_suite,
    scenario_from_obj,
)
from .hilbert import (
    ModuleSpace,
    ModuleVector,
    OrthoSampler,
    act,
    disjoint_support_sampler,
    explicit_sampler,
    inner_product,
    is_orthogonal,
    module_norm,
    orthogonal_pairs,
    pair_image_sampler,
    sample_orthogonal_pair,
    sample_vector,
    vec_add,
    vec_neg,
    vec_residual,
    vec_scale,
    vec_sub,
    vector_from_obj,
)
from .identities import (
    CHECK_IDS,
    Decomposition,
    IdentityResidual,
    check_orthogonal_jensen,
    check_scalar_affine_reduction,
    decompose,
    extract_additive_part,
    extract_quadratic_form,
    odd_even_split,
    pair_expansion_check,
    scaling_identity_suite,
    uniqueness_check,
)
from .mappings import (
    AdditivePair,
    KernelSolution,
    Mapping,
    adjoint_map,
    check_unitary_equivalence,
    compose_jensen,
    inclusion_pair,
    interleave_pair,
    kernel_constraint_residual,
    linear_map,
    mapping_from_obj,
    mapping_to_obj,
    morphism_shift_pair,
    pair_condition_residuals,
    perturb,
    quad_form,
    solve_abiadditive_kernel,
    validate_pair,
    zero_linear,
)

__version__ = "0.1.0"

__all__ = [
    "AdditivePair",
    "AlgebraElement",
    "AlgebraShape",
    "CHECK_IDS",
    "CampaignReport",
    "Coefficient",
    "CstarJensenError",
    "Decomposition",
    "DomainError",
    "IdentityResidual",
    "InvalidMode",
    "InvalidSampler",
    "IoError",
    "KernelSolution",
    "Mapping",
    "ModuleSpace",
    "ModuleVector",
    "NearSingular",
    "NotSelfAdjoint",
    "OrderViolation",
    "OrthoSampler",
    "PairConditionViolated",
    "PairNotValidated",
    "ParseError",
    "Scenario",
    "ShapeError",
    "SpaceMismatch",
    "ValidationError",
    "act",
    "add",
    "adjoint",
    "adjoint_map",
    "check_orthogonal_jensen",
    "check_scalar_affine_reduction",
    "check_unitary_equivalence",
    "compose_jensen",
    "cstar_norm",
    "decompose",
    "disjoint_support_sampler",
    "element_from_obj",
    "emit_report",
    "explicit_sampler",
    "extract_additive_part",
    "extract_quadratic_form",
    "inclusion_pair",
    "inner_product",
    "interleave_pair",
    "invert",
    "is_orthogonal",
    "is_self_adjoint",
    "kernel_constraint_residual",
    "linear_map",
    "load_scenario",
    "mapping_from_obj",
    "mapping_to_obj",
    "module_norm",
    "morphism_shift_pair",
    "mul",
    "neg",
    "odd_even_split",
    "orthogonal_pairs",
    "pair_condition_residuals",
    "pair_expansion_check",
    "pair_image_sampler",
    "perturb",
    "quad_form",
    "residual",
    "run_suite",
    "sample_orthogonal_pair",
    "sample_vector",
    "scale",
    "scaling_identity_suite",
    "scenario_from_obj",
    "solve_abiadditive_kernel",
    "spectrum_bounds",
    "sub",
    "uniqueness_check",
    "unit",
    "validate_coefficient",
    "validate_pair",
    "vec_add",
    "vec_neg",
    "vec_residual",
    "vec_scale",
    "vec_sub",
    "vector_from_obj",
    "zero",
    "zero_linear",
]
