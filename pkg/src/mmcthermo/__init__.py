"""Thermodynamic accounting for a minimal two-reservoir molecular communication channel."""

__version__ = "0.1.0"

from .channel import (
    ChannelParams,
    capacity,
    mutual_information,
    mutual_information_small_c,
    output_weight,
    transition_prob,
)
from .core_math import (
    DomainError,
    binary_entropy,
    binary_entropy_small,
    jensen_gap,
    partial_entropy,
)
from .efficiency import (
    MatchReport,
    SweepRow,
    ZeroInformationError,
    energy_per_nat,
    sweep_g_over_i,
    usable_molecules,
    verify_monotonicity,
    verify_theorem1,
)
from .simulate import (
    DiscreteReservoirState,
    SimulationRecord,
    empirical_mutual_information,
    simulate_channel,
)
from .thermo import (
    EnergyContext,
    ReservoirPlan,
    chemical_potential,
    creation_energy_closed,
    creation_energy_quasistatic,
    landauer_energy,
    molecules_moved,
)
