"""Closed-form amplitudes, phases, and transit times for the rectangular barrier.

Covers the one-way (standard) transmission magnitude/phase and its group
delay, the symmetric two-packet collision amplitudes R +/- T with their
unimodular phase, the symmetric group delay, the dwell time (closed form and
quadrature), the self-interference delay, a continuity-condition linear solve
that reproduces the closed forms independently, an energy-derivative
(variational) identity check, and the transmission-vs-speed parameter scan.

Below the barrier (0 < n < 1) alpha = rho*L is real; above it (n > 1) alpha
is purely imaginary and every even-in-alpha expression stays real.  Results
computed through complex arithmetic are checked for a negligible imaginary
part before the real part is returned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, NonConvergenceError
from .kinematics import BarrierSpec, Kinematics, kinematics, kinematics_from_dimensionless
from .numerics import Tolerance, coshm1, integrate, sinh2c_m1, sinhc, tanhc, unwrap_phase

__all__ = [
    "Side",
    "SignBranch",
    "ChannelAmplitudes",
    "SuperposedAmplitude",
    "TimeBundle",
    "ScanRow",
    "ScanReport",
    "VariationalReport",
    "theta_phase",
    "transmission_magnitude",
    "transmission_phase",
    "standard_phase_time",
    "standard_phase_time_numeric",
    "solve_stationary",
    "reflection_amplitude",
    "transmission_amplitude",
    "superpose_scattered",
    "phi_phase",
    "symmetric_phase_time",
    "phase_time_numeric",
    "antisymmetric_phase_time",
    "dwell_time_closed",
    "self_interference_time",
    "time_bundle",
    "interior_wave",
    "dwell_time_numeric",
    "variational_check",
    "stationary_field",
    "symmetrized_field",
    "superluminal_scan",
    "default_scan_grid",
    "DEFAULT_SCAN_WL",
]

_IM_TOL = 1e-10  # relative imaginary-part budget for even-in-alpha results


class Side(Enum):
    LEFT = "left-incident"
    RIGHT = "right-incident"


class SignBranch(Enum):
    PLUS = +1    # symmetrized (boson) superposition
    MINUS = -1   # antisymmetrized (fermion) superposition


@dataclass(frozen=True)
class ChannelAmplitudes:
    """Reflection/transmission amplitudes and interior coefficients for one side.

    The interior wave is gamma*exp(-rho*x) + beta*exp(+rho*x) for left
    incidence and gamma*exp(+rho*x) + beta*exp(-rho*x) for right incidence.
    """

    R: complex
    T: complex
    gamma: complex
    beta: complex
    side: Side


@dataclass(frozen=True)
class SuperposedAmplitude:
    """Unimodular scattered amplitude S = R +/- T and its phase.

    S equals exp(-i*(k*L - phi)) with phi the stored continuous phase.
    """

    sign: SignBranch
    S: complex
    phi: float


@dataclass(frozen=True)
class TimeBundle:
    """The four transit times, in absolute units."""

    t_T: float        # one-way (standard) group delay
    t_T_phi: float    # symmetric-collision group delay
    t_D_phi: float    # dwell time, symmetric collision
    t_I_phi: float    # self-interference delay


@dataclass(frozen=True)
class ScanRow:
    n: float
    wl: float
    T2: float
    t_ratio: float      # t_T_phi / tau_k
    flag_T: bool        # |T|^2 > 1/2
    flag_fast: bool     # t_T_phi < tau_k
    flag_joint: bool


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    joint_empty_in_tunneling: bool
    onset_n: float | None   # smallest n with both flags, None if none


@dataclass(frozen=True)
class VariationalReport:
    """Both sides of the energy-derivative identity for the symmetric phase.

    group_delay_fd is d(phi)/dE by central differences; dwell_from_boundary
    comes from the boundary Wronskian-like expression, interference_term from
    -sin(phi)*m/k^2.  residual is their relative mismatch.
    """

    group_delay_fd: float
    dwell_from_boundary: float
    interference_term: float
    residual: float
    dE: float
    group_delay_closed: float
    dwell_closed: float
    interference_closed: float


def _as_real(z: complex, what: str) -> float:
    scale = max(abs(z.real), 1e-300)
    if abs(z.imag) > _IM_TOL * scale:
        raise ConsistencyError(f"{what}: unexpected imaginary part {z.imag:.3e} (re={z.real:.3e})")
    return z.real


def _require_tunneling(kin: Kinematics, what: str) -> float:
    """Return the real evanescent wavenumber, valid only for 0 < n < 1."""
    if not (0.0 < kin.n < 1.0):
        raise DomainError(f"{what} requires 0 < n < 1, got n={kin.n}")
    return kin.rho.real


# ---------------------------------------------------------------------------
# One-way transmission


def theta_phase(kin: Kinematics) -> float:
    """Interface phase theta in (0, pi): the angle of (2k^2-w^2, 2k*rho).

    tan(theta) = 2k*rho/(2k^2-w^2); the branch is fixed so that
    theta = 2*arctan(rho/k) holds identically.
    """
    rho = _require_tunneling(kin, "theta_phase")
    k, w = kin.k, kin.w
    return math.atan2(2.0 * k * rho, 2.0 * k * k - w * w)


def transmission_magnitude(kin: Kinematics) -> float:
    """|T| in (0, 1]; real for all n > 0 (sin form above the barrier)."""
    s = sinhc(kin.alpha)
    s2 = _as_real(s * s, "transmission_magnitude sinhc^2")
    q = kin.w * kin.w * kin.L / (2.0 * kin.k)
    return 1.0 / math.sqrt(1.0 + q * q * s2)


def transmission_phase(kin: Kinematics, tanh_double_arg: bool = False) -> float:
    """One-way transmitted phase Theta(k, L), continuous in k on (0, w).

    Implemented with tanh(rho*L); the tanh(2*rho*L) variant is kept behind
    tanh_double_arg for comparison only -- it is inconsistent with the group
    delay d(Theta)/dk and fails the derivative cross-check.
    """
    if tanh_double_arg:
        t = 2.0 * kin.L * tanhc(2.0 * kin.alpha)
    else:
        t = kin.L * tanhc(kin.alpha)
    t = _as_real(t, "transmission_phase tanh ratio")
    k, w = kin.k, kin.w
    return math.atan2((2.0 * k * k - w * w) * t, 2.0 * k)


def standard_phase_time(kin: Kinematics) -> float:
    """One-way group delay t_T = (m/k) dTheta/dk, in absolute time units.

    Evaluated in a form regular at the barrier top (n = 1) and continued to
    n > 1 through imaginary alpha.
    """
    n, wl = kin.n, kin.wl
    a = kin.alpha
    s1 = sinhc(a)
    num = sinh2c_m1(a) + (1.0 + 2.0 * n) / (wl * wl)
    den = 4.0 * n / (wl * wl) + s1 * s1
    return 2.0 * kin.tau_k * _as_real(num / den, "standard_phase_time")


def standard_phase_time_numeric(
    kin: Kinematics, h_rel: float = 1e-6, tanh_double_arg: bool = False
) -> float:
    """(m/k) dTheta/dk by Richardson-extrapolated central differences."""
    def theta_at(k: float) -> float:
        return transmission_phase(kin.with_k(k), tanh_double_arg=tanh_double_arg)

    return kin.m / kin.k * _phase_derivative(theta_at, kin.k, h_rel * kin.k)


# ---------------------------------------------------------------------------
# Continuity-condition solve (independent of the closed forms)


def solve_stationary(b: BarrierSpec, k: float, side: Side = Side.LEFT) -> ChannelAmplitudes:
    """Solve the interface-matching linear system for one incidence side.

    The four continuity conditions (wave and derivative at both barrier
    faces) are eliminated starting from the transmitted side with a
    provisional unit transmitted amplitude, which keeps exponentially small
    amplitudes at full relative precision.  No closed-form amplitude enters.
    """
    kin = kinematics(b, k)
    if kin.n == 1.0:
        raise DomainError("solve_stationary requires n != 1 (rho = 0 is degenerate)")
    rho, L = kin.rho, b.L
    ik = 1j * k
    e_half = cmath.exp(ik * L / 2.0)       # plane-wave phase at the transmit face
    e_a = cmath.exp(rho * L)
    # Interior coefficients for a unit transmitted wave, expressed as their
    # values at the transmit face (decaying piece) and entry face (growing).
    g_small = e_half * (rho - ik) / (2.0 * rho)   # gamma * e^{-rho L/2}
    b_large = e_half * (rho + ik) / (2.0 * rho)   # beta  * e^{+rho L/2}
    # Interior wave and derivative at the entry face of each configuration.
    phi2 = g_small * e_a + b_large / e_a
    if side is Side.LEFT:
        # entry face x = -L/2: incident A e^{ikx} + reflected B e^{-ikx}
        dphi2 = rho * (-g_small * e_a + b_large / e_a)
        A = 0.5 * (phi2 + dphi2 / ik) * e_half
        B = 0.5 * (phi2 - dphi2 / ik) / e_half
    else:
        # entry face x = +L/2: incident A e^{-ikx} + reflected B e^{ikx}
        dphi2 = rho * (g_small * e_a - b_large / e_a)
        A = 0.5 * (phi2 - dphi2 / ik) * e_half
        B = 0.5 * (phi2 + dphi2 / ik) / e_half
    if A == 0:
        raise ConsistencyError(
            f"singular continuity system at k={k}, L={L} (vanishing incident amplitude)"
        )
    half = cmath.exp(rho * L / 2.0)
    return ChannelAmplitudes(
        R=B / A,
        T=1.0 / A,
        gamma=g_small * half / A,
        beta=b_large / half / A,
        side=side,
    )


def reflection_amplitude(kin: Kinematics) -> complex:
    """Closed-form reflection amplitude for the symmetric-collision solution."""
    rho = _require_tunneling(kin, "reflection_amplitude")
    th = theta_phase(kin)
    a = rho * kin.L
    # exp[i theta](1 - e^{2 rho L}) / (1 - e^{2 rho L} e^{2 i theta}),
    # scaled by e^{-rho L} top and bottom to stay bounded.
    num = cmath.exp(1j * th) * (math.exp(-a) - math.exp(a))
    den = math.exp(-a) - math.exp(a) * cmath.exp(2j * th)
    return cmath.exp(-1j * kin.k * kin.L) * num / den


def transmission_amplitude(kin: Kinematics) -> complex:
    """Closed-form transmission amplitude for the symmetric-collision solution."""
    rho = _require_tunneling(kin, "transmission_amplitude")
    th = theta_phase(kin)
    a = rho * kin.L
    num = 1.0 - cmath.exp(2j * th)
    den = math.exp(-a) - math.exp(a) * cmath.exp(2j * th)
    return cmath.exp(-1j * kin.k * kin.L) * num / den


# ---------------------------------------------------------------------------
# Symmetric-collision superposition


def superpose_scattered(kin: Kinematics, sign: SignBranch) -> SuperposedAmplitude:
    """Unimodular scattered amplitude S = R +/- T with its extracted phase."""
    _require_tunneling(kin, "superpose_scattered")
    R = reflection_amplitude(kin)
    T = transmission_amplitude(kin)
    S = R + T if sign is SignBranch.PLUS else R - T
    phi = cmath.phase(S * cmath.exp(1j * kin.k * kin.L))
    return SuperposedAmplitude(sign=sign, S=S, phi=phi)


def phi_phase(kin: Kinematics, sign: SignBranch) -> float:
    """Scattered-superposition phase phi_+/- in (-pi, 0), continuous in k.

    phi = -arctan{2 k rho sinh(rho L) / [(k^2 - rho^2) cosh(rho L) +/- w^2]}
    with the two-argument arctangent fixing the branch.
    """
    rho = _require_tunneling(kin, "phi_phase")
    k, w = kin.k, kin.w
    a = rho * kin.L
    num = 2.0 * k * rho * math.sinh(a)
    den = (k * k - rho * rho) * math.cosh(a) + sign.value * w * w
    return -math.atan2(num, den)


def symmetric_phase_time(kin: Kinematics) -> float:
    """Symmetric-collision group delay t_{T,phi} = (m/k) dphi_+/dk.

    Regular at n = 1 (value 2*tau_k) and continued to n > 1.
    """
    n = kin.n
    s1 = sinhc(kin.alpha)
    den = 2.0 * n + coshm1(kin.alpha)
    return 2.0 * kin.tau_k * _as_real((n + s1) / den, "symmetric_phase_time")


def dwell_time_closed(kin: Kinematics) -> float:
    """Dwell time of the symmetric collision, closed form."""
    n = kin.n
    s1 = sinhc(kin.alpha)
    den = 2.0 * n + coshm1(kin.alpha)
    return 2.0 * kin.tau_k * n * _as_real((1.0 + s1) / den, "dwell_time_closed")


def self_interference_time(kin: Kinematics) -> float:
    """Delay from the momentary overlap of incident and reflected waves.

    Closed form 2*tau_k*(1-n)*sinhc(alpha)/(2n - 1 + cosh(alpha)); it equals
    -(m/k^2) sin(phi_+) numerically (phi_+ < 0 below the barrier).
    """
    n = kin.n
    s1 = sinhc(kin.alpha)
    den = 2.0 * n + coshm1(kin.alpha)
    return 2.0 * kin.tau_k * (1.0 - n) * _as_real(s1 / den, "self_interference_time")


def time_bundle(kin: Kinematics) -> TimeBundle:
    """All four transit times; enforces t_{T,phi} = t_{D,phi} + t_{I,phi}."""
    bundle = TimeBundle(
        t_T=standard_phase_time(kin),
        t_T_phi=symmetric_phase_time(kin),
        t_D_phi=dwell_time_closed(kin),
        t_I_phi=self_interference_time(kin),
    )
    residual = abs(bundle.t_T_phi - (bundle.t_D_phi + bundle.t_I_phi))
    if residual > 1e-12 * abs(bundle.t_T_phi):
        raise ConsistencyError(
            f"group delay/dwell decomposition violated: residual {residual:.3e} at n={kin.n}"
        )
    return bundle


# ---------------------------------------------------------------------------
# Numeric phase times (finite differences on the unwrapped phases)


def _phase_derivative(phase_at, k: float, h: float) -> float:
    """d(phase)/dk with one Richardson level and a step-halving guard.

    Samples are unwrapped in k order before differencing so arctangent
    branch cuts cannot corrupt the estimate.
    """
    def richardson(step: float) -> float:
        ks = (k - step, k - 0.5 * step, k + 0.5 * step, k + step)
        p = unwrap_phase([phase_at(kk) for kk in ks])
        d1 = (p[3] - p[0]) / (2.0 * step)
        d2 = (p[2] - p[1]) / step
        return (4.0 * d2 - d1) / 3.0

    d_h = richardson(h)
    d_h2 = richardson(0.5 * h)
    scale = max(abs(d_h2), 1e-300)
    if abs(d_h - d_h2) > 1e-6 * scale:
        raise NonConvergenceError(
            f"phase derivative did not converge at k={k}: step-halving moved "
            f"{abs(d_h - d_h2) / scale:.3e} relative",
            best_estimate=d_h2,
            achieved=abs(d_h - d_h2) / scale,
        )
    return d_h2


def phase_time_numeric(kin: Kinematics, sign: SignBranch, h_rel: float = 1e-6) -> float:
    """(m/k) dphi_+//dk by finite differences on the unwrapped phase."""
    def phi_at(k: float) -> float:
        return phi_phase(kin.with_k(k), sign)

    return kin.m / kin.k * _phase_derivative(phi_at, kin.k, h_rel * kin.k)


def antisymmetric_phase_time(kin: Kinematics) -> float:
    """Group delay of the antisymmetrized (fermion) superposition.

    No closed form is implemented; the unwrapped minus-branch phase is
    differentiated numerically with Richardson extrapolation.
    """
    return phase_time_numeric(kin, SignBranch.MINUS)


# ---------------------------------------------------------------------------
# Interior wave, dwell quadrature, variational identity


def interior_wave(
    amps_left: ChannelAmplitudes,
    amps_right: ChannelAmplitudes,
    kin: Kinematics,
    x,
):
    """Symmetric-collision interior wave (phi2_L + phi2_R)/sqrt(2) at x.

    Proportional to cosh(rho*x); x (scalar or array) must lie inside the
    barrier.
    """
    if amps_left.side is not Side.LEFT or amps_right.side is not Side.RIGHT:
        raise DomainError("interior_wave expects (left-incident, right-incident) amplitudes")
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > kin.L / 2.0 * (1.0 + 1e-12)):
        raise DomainError("interior_wave: position outside the barrier")
    rho = kin.rho
    left = amps_left.gamma * np.exp(-rho * xs) + amps_left.beta * np.exp(rho * xs)
    right = amps_right.gamma * np.exp(rho * xs) + amps_right.beta * np.exp(-rho * xs)
    out = (left + right) / math.sqrt(2.0)
    return out if out.ndim else complex(out)


def dwell_time_numeric(kin: Kinematics, tol: Tolerance = Tolerance()) -> float:
    """Dwell time (m/k) * integral of |interior wave|^2 across the barrier."""
    _require_tunneling(kin, "dwell_time_numeric")
    b = BarrierSpec(kin.w**2 / (2 * kin.m), kin.L, kin.m, kin.w)
    amps_l = solve_stationary(b, kin.k, Side.LEFT)
    amps_r = solve_stationary(b, kin.k, Side.RIGHT)

    def density(x: float) -> float:
        return abs(interior_wave(amps_l, amps_r, kin, x)) ** 2

    value, _ = integrate(density, -kin.L / 2.0, kin.L / 2.0, tol)
    return kin.m / kin.k * value


def _boundary_wave(kin0: Kinematics, E: float, x: float, face: int):
    """Exterior symmetric-collision wave and its x-derivative near one face.

    face = -1 for x = -L/2, +1 for x = +L/2.  The incident amplitude carries
    the 1/sqrt(2) of the two-packet symmetrization, matching the interior
    normalization used for the dwell time.
    """
    m, L = kin0.m, kin0.L
    k = math.sqrt(2.0 * m * E)
    kin = kin0.with_k(k)
    phi = phi_phase(kin, SignBranch.PLUS)
    s = 1j * k * (-1.0 if face > 0 else 1.0)
    inc = cmath.exp(s * x)
    ref = cmath.exp(-s * x) * cmath.exp(1j * (phi - k * L))
    rt2 = math.sqrt(2.0)
    psi = (inc + ref) / rt2
    dpsi = (s * inc - s * ref) / rt2
    return psi, dpsi


def variational_check(kin: Kinematics, dE: float | None = None) -> VariationalReport:
    """Check the energy-derivative identity tying group delay to dwell time.

    Central finite differences in E on the boundary waves evaluate
    d(phi)/dE and the boundary expression whose value is 2m * (dwell
    integral); the identity d(phi)/dE = (m/k)*integral - sin(phi)*m/k^2 is
    then tested.  The residual is O(dE^2).
    """
    _require_tunneling(kin, "variational_check")
    E = kin.energy
    step = dE if dE is not None else 1e-5 * E
    if not (0.0 < step < E):
        raise DomainError(f"dE must lie in (0, E); got {step} with E={E}")
    m, k, L = kin.m, kin.k, kin.L

    def phi_at_E(En: float) -> float:
        return phi_phase(kin.with_k(math.sqrt(2.0 * m * En)), SignBranch.PLUS)

    dphi_dE = (phi_at_E(E + step) - phi_at_E(E - step)) / (2.0 * step)

    def wronskian(x: float, face: int) -> complex:
        psi_p, dpsi_p = _boundary_wave(kin, E + step, x, face)
        psi_m, dpsi_m = _boundary_wave(kin, E - step, x, face)
        psi, dpsi = _boundary_wave(kin, E, x, face)
        dpsi_dE = (psi_p - psi_m) / (2.0 * step)
        ddpsi_dxdE = (dpsi_p - dpsi_m) / (2.0 * step)
        return dpsi_dE * dpsi.conjugate() - psi.conjugate() * ddpsi_dxdE

    boundary = wronskian(L / 2.0, +1) - wronskian(-L / 2.0, -1)
    dwell_boundary = boundary.real / (2.0 * k)
    interference = -math.sin(phi_at_E(E)) * m / (k * k)
    rhs = dwell_boundary + interference
    residual = abs(dphi_dE - rhs) / max(abs(dphi_dE), 1e-300)
    return VariationalReport(
        group_delay_fd=dphi_dE,
        dwell_from_boundary=dwell_boundary,
        interference_term=interference,
        residual=residual,
        dE=step,
        group_delay_closed=symmetric_phase_time(kin),
        dwell_closed=dwell_time_closed(kin),
        interference_closed=self_interference_time(kin),
    )


# ---------------------------------------------------------------------------
# Piecewise stationary fields


def stationary_field(amps: ChannelAmplitudes, kin: Kinematics, x):
    """Piecewise stationary solution for one incidence side at positions x."""
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    out = np.empty(xs.shape, dtype=complex)
    half = kin.L / 2.0
    k, rho = kin.k, kin.rho
    inside = np.abs(xs) <= half
    if amps.side is Side.LEFT:
        before, after = xs < -half, xs > half
        out[before] = np.exp(1j * k * xs[before]) + amps.R * np.exp(-1j * k * xs[before])
        out[inside] = amps.gamma * np.exp(-rho * xs[inside]) + amps.beta * np.exp(rho * xs[inside])
        out[after] = amps.T * np.exp(1j * k * xs[after])
    else:
        before, after = xs > half, xs < -half
        out[before] = np.exp(-1j * k * xs[before]) + amps.R * np.exp(1j * k * xs[before])
        out[inside] = amps.gamma * np.exp(rho * xs[inside]) + amps.beta * np.exp(-rho * xs[inside])
        out[after] = amps.T * np.exp(-1j * k * xs[after])
    return complex(out[0]) if scalar else out


def symmetrized_field(b: BarrierSpec, k: float, sign: SignBranch, x):
    """(Anti)symmetrized stationary field phi_L(x) +/- phi_R(x)."""
    kin = kinematics(b, k)
    left = stationary_field(solve_stationary(b, k, Side.LEFT), kin, x)
    right = stationary_field(solve_stationary(b, k, Side.RIGHT), kin, x)
    return left + right if sign is SignBranch.PLUS else left - right


# ---------------------------------------------------------------------------
# Transmission-vs-speed scan

DEFAULT_SCAN_WL = (math.pi, 2.0 * math.pi, 4.0 * math.pi)

# Exact resonances (alpha = 2*pi*i*m) make t_T_phi/tau_k equal 1 up to
# rounding; the strict "faster than classical" flag keeps a small margin so
# float ties do not register as acceleration.
_FAST_MARGIN = 1e-9


def default_scan_grid() -> np.ndarray:
    """Default n grid: fine below the barrier, quarter steps above it."""
    below = np.arange(2, 20) * 0.05          # 0.10 .. 0.95
    above = np.arange(5, 21) * 0.25          # 1.25 .. 5.00
    return np.concatenate([below, above])


def superluminal_scan(wl: float, n_grid: Sequence[float]) -> ScanReport:
    """Flag |T|^2 > 1/2 and t_{T,phi} < tau_k across an n grid at fixed wL.

    Under tunneling (n < 1) the two conditions are mutually exclusive; a
    joint hit there indicates an internal error.  Above the barrier the
    report records where both hold and the smallest such n.
    """
    rows = []
    for n in n_grid:
        if not (n > 0.0):
            raise DomainError(f"scan grid entries must be positive, got {n}")
        kin = kinematics_from_dimensionless(float(n), wl)
        t2 = transmission_magnitude(kin) ** 2
        ratio = symmetric_phase_time(kin) / kin.tau_k
        flag_t = t2 > 0.5
        flag_fast = ratio < 1.0 - _FAST_MARGIN
        joint = flag_t and flag_fast
        if joint and n < 1.0:
            raise ConsistencyError(
                f"tunneling point n={n}, wL={wl} flagged both transmitting and fast"
            )
        rows.append(ScanRow(float(n), wl, t2, ratio, flag_t, flag_fast, joint))
    joint_ns = [r.n for r in rows if r.flag_joint]
    return ScanReport(
        rows=tuple(rows),
        joint_empty_in_tunneling=not any(r.flag_joint and r.n < 1.0 for r in rows),
        onset_n=min(joint_ns) if joint_ns else None,
    )
