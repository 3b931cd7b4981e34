"""Python bindings for the ddr quad-rot solver."""

from ._core import (
    Mesh,
    SolveError,
    check_commutation,
    check_exactness,
    convergence_study,
    estimate_stability,
    format_csv,
    format_rates,
    load_mesh,
    local_dof_counts,
    parse_mesh,
    regular_polygon,
    solve_benchmark,
    space_dim,
    structured_mesh,
)

__all__ = [
    "Mesh",
    "SolveError",
    "check_commutation",
    "check_exactness",
    "convergence_study",
    "estimate_stability",
    "format_csv",
    "format_rates",
    "load_mesh",
    "local_dof_counts",
    "parse_mesh",
    "regular_polygon",
    "solve_benchmark",
    "space_dim",
    "structured_mesh",
]
