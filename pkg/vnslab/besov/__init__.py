from .dyadic import (
    DyadicSpectrum,
    besov_norm,
    chemin_lerner_norm,
    dyadic_decompose,
    dyadic_pieces,
    heat_characterization_norm,
    heat_series,
    heat_times,
    lebesgue_time_norm,
    sobolev_norm,
    time_weights,
)
from .inequalities import (
    InterpolationReport,
    embedding_ratio,
    gradient_theta,
    interpolation_check,
    l2_theta,
    maxreg_ratio,
    product_ratio,
)
from .lorentz import ReArrangement, lorentz_norm, rearrange, rearranged_norm
