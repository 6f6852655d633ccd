"""Orbital angular momentum pair simulator."""

from ._core import (
    BeamParams,
    GridSpec,
    HologramSpec,
    TwoPhotonState,
    analyzer_projector,
    angular_spectrum,
    apply_first_order,
    coincidence_prob,
    conservation_matrix,
    efficiency_budget,
    eval_lg,
    extract_order,
    find_singularities,
    inner_product,
    make_spdc_state,
    make_uniform_spdc_state,
    mixture_coincidence_prob,
    oam_spectrum,
    poisson_counts,
    singularity_locus,
    transmittance,
    visibility,
)

__all__ = [
    "BeamParams",
    "GridSpec",
    "HologramSpec",
    "TwoPhotonState",
    "analyzer_projector",
    "angular_spectrum",
    "apply_first_order",
    "coincidence_prob",
    "conservation_matrix",
    "efficiency_budget",
    "eval_lg",
    "extract_order",
    "find_singularities",
    "inner_product",
    "make_spdc_state",
    "make_uniform_spdc_state",
    "mixture_coincidence_prob",
    "oam_spectrum",
    "poisson_counts",
    "singularity_locus",
    "transmittance",
    "visibility",
]
