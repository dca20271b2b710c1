"""Resonant transmission and Goos-Hanchen shifts in a two-prism FTIR structure
with graphene sheets or thin metal films on the prism faces."""

from .core import (
    CONSTANTS,
    WaveKinematics,
    admittances,
    critical_angle,
    kinematics,
    media_admittances,
)
from .ghshift import BeamSpec, GHResult, divergence, gh_beam, gh_stationary, peak_width
from .materials import (
    DrudeParams,
    GrapheneParams,
    drude_epsilon,
    equivalent_epsilon,
    graphene_sigma_full,
    graphene_sigma_intra,
)
from .scatter import (
    LayerStack,
    ScatterResult,
    Sheet,
    Slab,
    closed_form_t,
    dispersion_residual,
    find_reflection_minimum,
    find_resonance,
    gap_field,
    sheet_gap_stack,
    stack_t_of_ky,
    stack_transfer,
)

__version__ = "0.1.0"
