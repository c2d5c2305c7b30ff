from .decay import (
    DecayFit,
    LyapunovVerdict,
    asymptotic_exponent,
    decay_fit,
    envelope_rate,
    lyapunov_check,
    lyapunov_envelope,
)
from .energy import ENERGY_FIELDS, EnergyRecord, energy_functionals, weighted_dissipation, weighted_energy
from .lipschitz import LipschitzChainReport, lipschitz_chain_report, loglip_modulus, loglip_norm
from .monokinetic import (
    AsymptoticDensity,
    MonokineticMetrics,
    asymptotic_density,
    exact_w1,
    monokinetic_metrics,
)
from .output import read_series, records_column, to_plain, write_series, write_summary
