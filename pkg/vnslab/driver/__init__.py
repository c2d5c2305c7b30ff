from .coupled import RunResult, continuation_guard, coupled_step, record, run
from .initial import initial_velocity, random_solenoidal, velocity_norm
from .picard import PicardResult, picard_local_solve, step_conditions
from .state import InitialReport, RunState, grid_from_config, initialize
from .twin import TwinResult, check_same_particles, stability_gap, twin_run
