"""Python access to the rsfem solver core."""

from ._core import (
    Error,
    assemble,
    cq_weights,
    datum_coefficient,
    eigenvalues,
    format_report,
    limit_alpha1,
    limit_alpha1_from_below,
    mesh_info,
    modal_factor,
    run_experiment,
    scalar_recurrence,
)

__all__ = [
    "Error",
    "assemble",
    "cq_weights",
    "datum_coefficient",
    "eigenvalues",
    "format_report",
    "limit_alpha1",
    "limit_alpha1_from_below",
    "mesh_info",
    "modal_factor",
    "run_experiment",
    "scalar_recurrence",
]
