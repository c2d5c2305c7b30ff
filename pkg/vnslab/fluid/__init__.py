from .solver import (
    CFL_LIMIT,
    SCHEMES,
    FluidState,
    predictor,
    pressure_solve,
    rhs,
    step,
    stokes_residual,
    taylor_green,
    taylor_green_pressure,
    truncate,
    with_derivatives,
)
from .duhamel import DuhamelNorms, DuhamelSplit, duhamel_split
