"""Energy flow on Grassmannians of a symplectic vector space."""

from ._symflow import (
    Subspace,
    SymflowError,
    all_signatures,
    classify,
    construct_subspace_of_type,
    energy,
    energy_bounds,
    flow,
    hessian_report,
    is_J_compatible,
    isotropic_kernel,
    j_compatible_darboux,
    kahler_spectrum,
    max_complex_subspace,
    projection_distance,
    relative_darboux_basis,
    riemannian_gradient,
    run_suite,
    stabilizer_dimension,
    stabilizer_dimension_oracle,
    suite_names,
    symmetry_generator,
    symplectic_complement,
    worked_example_family,
)

__all__ = [
    "Subspace",
    "SymflowError",
    "all_signatures",
    "classify",
    "construct_subspace_of_type",
    "energy",
    "energy_bounds",
    "flow",
    "hessian_report",
    "is_J_compatible",
    "isotropic_kernel",
    "j_compatible_darboux",
    "kahler_spectrum",
    "max_complex_subspace",
    "projection_distance",
    "relative_darboux_basis",
    "riemannian_gradient",
    "run_suite",
    "stabilizer_dimension",
    "stabilizer_dimension_oracle",
    "suite_names",
    "symmetry_generator",
    "symplectic_complement",
    "worked_example_family",
]
