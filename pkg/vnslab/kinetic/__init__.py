from .deposition import (
    BoundCheck,
    MomentFields,
    MonitorReport,
    brinkman_force,
    deposit,
    moment_bound_monitor,
    relative_kinetic_energy,
)
from .kernel import CicStencil, cic_stencil
from .particles import (
    MIN_PARTICLES,
    ParticleEnsemble,
    advance,
    flow_jacobian_probe,
    sample_initial,
)
from .profiles import InitialProfile, ball_volume, minimum_image, moment_constant, profile_from_config
from .snapshot import (
    read_particles_binary,
    read_particles_ndjson,
    write_particles_binary,
    write_particles_ndjson,
)
