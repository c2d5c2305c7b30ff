from .grid import Grid, SpectralField
from .operators import (
    FieldNorms,
    ball_truncate,
    convection,
    dealias,
    derive,
    friedrichs_project,
    gaussian_blob,
    grad_linf_norm,
    heat_propagate,
    inner,
    l2_norm,
    leray_project,
    linf_norm,
    lp_norm,
    magnitude,
    multiply,
    norms,
    physical_components,
    to_physical,
    to_spectral,
    without_mean,
)
