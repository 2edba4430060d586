"""Tunneling times for the 1D rectangular barrier.

Closed-form group delays, dwell time, and self-interference delay for the
standard one-way and symmetric two-packet colliding configurations, with
wave-packet synthesis experiments confirming that the symmetric-collision
group delay locates the scattered packets' centers of mass.
"""

from .errors import ConsistencyError, DomainError, NonConvergenceError
from .kinematics import (
    BarrierSpec,
    Kinematics,
    NormalizationMode,
    barrier_from_dimensionless,
    derive_barrier,
    kinematics,
    kinematics_from_dimensionless,
    normalize_time,
)
from .numerics import Tolerance, differentiate, integrate, refine_peak, unwrap_phase
from .scattering import (
    ChannelAmplitudes,
    ScanReport,
    Side,
    SignBranch,
    SuperposedAmplitude,
    TimeBundle,
    antisymmetric_phase_time,
    dwell_time_closed,
    dwell_time_numeric,
    interior_wave,
    phi_phase,
    reflection_amplitude,
    self_interference_time,
    solve_stationary,
    standard_phase_time,
    superluminal_scan,
    superpose_scattered,
    symmetric_phase_time,
    theta_phase,
    time_bundle,
    transmission_amplitude,
    transmission_magnitude,
    transmission_phase,
    variational_check,
)
from .wavepacket import (
    ArrivalEstimate,
    FieldSnapshot,
    MomentumDistribution,
    PacketSpec,
    Region,
    SpatialGrid,
    Symmetrization,
    build_distribution,
    centroid,
    compare_fields,
    extract_delay,
    measure_collision_delay,
    reconstruct_scattered,
    synthesize_field,
    td_propagate,
)

__version__ = "0.1.0"
