import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunneltimes import scattering as sc
from tunneltimes.errors import ConsistencyError, DomainError
from tunneltimes.kinematics import (
    barrier_from_dimensionless,
    kinematics,
    kinematics_from_dimensionless,
)
from tunneltimes.numerics import unwrap_phase

from oracles import FROZEN

WL = 4.0 * math.pi

tunneling_points = given(
    n=st.floats(0.02, 0.98),
    wl=st.floats(0.5, 2.0 * math.pi),
)


def kin_at(n, wl=WL):
    return kinematics_from_dimensionless(n, wl)


# ---------------------------------------------------------------------------
# interface phase theta


def test_theta_at_half_is_right_angle():
    assert sc.theta_phase(kin_at(0.5)) == pytest.approx(math.pi / 2.0, rel=1e-15)


def test_theta_limits():
    assert sc.theta_phase(kin_at(1.0 - 1e-12)) == pytest.approx(0.0, abs=1e-5)
    assert sc.theta_phase(kin_at(1e-12)) == pytest.approx(math.pi, abs=1e-5)
    assert 0.0 < sc.theta_phase(kin_at(1e-12)) < math.pi


@tunneling_points
@settings(max_examples=80, deadline=None)
def test_theta_equals_double_half_angle(n, wl):
    kin = kin_at(n, wl)
    expected = 2.0 * math.atan2(kin.rho.real, kin.k)
    assert sc.theta_phase(kin) == pytest.approx(expected, rel=1e-13)


def test_theta_requires_tunneling():
    with pytest.raises(DomainError):
        sc.theta_phase(kin_at(1.5))


# ---------------------------------------------------------------------------
# one-way transmission


def test_transmission_magnitude_near_zero_length():
    assert sc.transmission_magnitude(kin_at(0.5, 1e-12)) == pytest.approx(1.0, abs=1e-12)


def test_transmission_magnitude_reference_value():
    value = sc.transmission_magnitude(kin_at(0.5))
    assert value == pytest.approx(FROZEN["t_abs_half_4pi"], rel=1e-12)


def test_transmission_magnitude_opaque_monotone():
    values = [sc.transmission_magnitude(kin_at(0.5, wl)) for wl in np.linspace(1.0, 40.0, 30)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] > 0.0


def test_transmission_magnitude_above_barrier_resonance():
    # alpha = 2*pi*i at n = 1.25, wL = 4*pi: full transmission
    assert sc.transmission_magnitude(kin_at(1.25)) == pytest.approx(1.0, abs=1e-12)


def test_transmission_phase_zero_cases():
    assert sc.transmission_phase(kin_at(0.5)) == pytest.approx(0.0, abs=1e-12)
    assert sc.transmission_phase(kin_at(0.3, 1e-12)) == pytest.approx(0.0, abs=1e-10)


def test_transmission_phase_continuous_in_k():
    phases = [sc.transmission_phase(kin_at(float(n))) for n in np.linspace(0.01, 0.99, 400)]
    assert np.array_equal(unwrap_phase(phases), np.asarray(phases))


# ---------------------------------------------------------------------------
# one-way group delay


def test_standard_phase_time_reference_values():
    kin = kin_at(0.5)
    assert sc.standard_phase_time(kin) / kin.tau_k == pytest.approx(FROZEN["t_T_half_4pi"], rel=1e-12)
    kin = kin_at(0.5, math.pi)
    assert sc.standard_phase_time(kin) / kin.tau_k == pytest.approx(FROZEN["t_T_half_pi"], rel=1e-12)


def test_standard_phase_time_hartman_saturation():
    kin = kin_at(0.5, 16.0 * math.pi)
    saturated = 2.0 * kin.m / (kin.k * kin.rho.real)
    assert sc.standard_phase_time(kin) == pytest.approx(saturated, rel=1e-4)


def test_standard_phase_time_smooth_through_barrier_top():
    reference = sc.standard_phase_time(kin_at(1.0)) / kin_at(1.0).tau_k
    for n in (1.0 - 1e-9, 1.0 + 1e-9):
        kin = kin_at(n)
        assert sc.standard_phase_time(kin) / kin.tau_k == pytest.approx(reference, rel=1e-6)


def test_standard_phase_time_matches_derivative():
    for n in (0.15, 0.5, 0.85):
        kin = kin_at(n)
        closed = sc.standard_phase_time(kin)
        assert sc.standard_phase_time_numeric(kin) == pytest.approx(closed, rel=1e-8)


def test_double_argument_variant_breaks_consistency():
    # tanh(2 rho L) in the transmitted phase contradicts its own k-derivative
    # (visible away from the opaque regime where tanh saturates)
    kin = kin_at(0.75, math.pi)
    closed = sc.standard_phase_time(kin)
    variant = sc.standard_phase_time_numeric(kin, tanh_double_arg=True)
    assert abs(variant - closed) / abs(closed) > 1e-3
    assert sc.standard_phase_time_numeric(kin) == pytest.approx(closed, rel=1e-8)


# ---------------------------------------------------------------------------
# continuity-condition solve vs closed forms


@tunneling_points
@settings(max_examples=60, deadline=None)
def test_solve_unitarity_and_side_symmetry(n, wl):
    b = barrier_from_dimensionless(wl)
    k = math.sqrt(n) * b.w
    left = sc.solve_stationary(b, k, sc.Side.LEFT)
    right = sc.solve_stationary(b, k, sc.Side.RIGHT)
    assert abs(left.R) ** 2 + abs(left.T) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert left.R == pytest.approx(right.R, rel=1e-12)
    assert left.T == pytest.approx(right.T, rel=1e-12)


@tunneling_points
@settings(max_examples=60, deadline=None)
def test_solve_matches_closed_amplitudes(n, wl):
    b = barrier_from_dimensionless(wl)
    kin = kin_at(n, wl)
    amps = sc.solve_stationary(b, kin.k)
    assert amps.R == pytest.approx(sc.reflection_amplitude(kin), rel=1e-10)
    assert amps.T == pytest.approx(sc.transmission_amplitude(kin), rel=1e-10)


def test_solve_matches_transmission_magnitude_when_opaque():
    b = barrier_from_dimensionless(WL)
    kin = kin_at(0.5)
    amps = sc.solve_stationary(b, kin.k)
    assert abs(amps.T) == pytest.approx(sc.transmission_magnitude(kin), rel=1e-10)


def test_solve_above_barrier_unitarity():
    b = barrier_from_dimensionless(2.0 * math.pi)
    amps = sc.solve_stationary(b, 1.3 * b.w)
    assert abs(amps.R) ** 2 + abs(amps.T) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_solve_rejects_barrier_top():
    b = barrier_from_dimensionless(WL)
    with pytest.raises(DomainError):
        sc.solve_stationary(b, b.w)


def test_closed_amplitudes_limits():
    kin = kin_at(0.4, 1e-10)
    assert abs(sc.reflection_amplitude(kin)) == pytest.approx(0.0, abs=1e-9)
    assert sc.transmission_amplitude(kin) == pytest.approx(1.0 + 0.0j, abs=1e-9)
    kin = kin_at(0.5, 24.0 * math.pi)
    assert abs(sc.reflection_amplitude(kin)) == pytest.approx(1.0, abs=1e-12)
    assert abs(sc.transmission_amplitude(kin)) < 1e-10


# ---------------------------------------------------------------------------
# symmetric superposition


@tunneling_points
@settings(max_examples=80, deadline=None)
def test_superposition_unimodular(n, wl):
    kin = kin_at(n, wl)
    for sign in (sc.SignBranch.PLUS, sc.SignBranch.MINUS):
        sup = sc.superpose_scattered(kin, sign)
        assert abs(sup.S) == pytest.approx(1.0, abs=1e-12)


def test_superposition_reduces_to_identity_at_zero_length():
    sup = sc.superpose_scattered(kin_at(0.5, 1e-10), sc.SignBranch.PLUS)
    assert sup.S == pytest.approx(1.0 + 0.0j, abs=1e-9)
    assert sup.phi == pytest.approx(0.0, abs=1e-9)


def test_superposition_matches_interface_phase_form():
    # S = e^{-ikL} (e^{rho L} +/- e^{i theta}) / (1 +/- e^{rho L} e^{i theta}).
    # Algebra: R - T carries an extra global factor -1 relative to the minus
    # form written this way; a global phase is irrelevant to |S| and to the
    # group delay, so the minus branch is compared up to that sign.
    rng = np.random.default_rng(7)
    for _ in range(50):
        n, wl = rng.uniform(0.05, 0.95), rng.uniform(0.5, 2.0 * math.pi)
        kin = kin_at(n, wl)
        th = sc.theta_phase(kin)
        e_a = math.exp(kin.alpha.real)
        for sign, s in ((sc.SignBranch.PLUS, 1.0), (sc.SignBranch.MINUS, -1.0)):
            expected = cmath.exp(-1j * kin.k * kin.L) * (
                (e_a + s * cmath.exp(1j * th)) / (1.0 + s * e_a * cmath.exp(1j * th))
            )
            got = sc.superpose_scattered(kin, sign).S
            if sign is sc.SignBranch.MINUS:
                expected = -expected
            assert got == pytest.approx(expected, rel=1e-12)


def test_phi_phase_reference_value():
    assert sc.phi_phase(kin_at(0.5), sc.SignBranch.PLUS) == pytest.approx(
        FROZEN["phi_plus_half_4pi"], rel=1e-12
    )


def test_phi_phase_matches_superposition_argument():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n, wl = rng.uniform(0.05, 0.95), rng.uniform(0.5, 2.0 * math.pi)
        kin = kin_at(n, wl)
        for sign in (sc.SignBranch.PLUS, sc.SignBranch.MINUS):
            closed = sc.phi_phase(kin, sign)
            extracted = sc.superpose_scattered(kin, sign).phi
            delta = (closed - extracted) % (2.0 * math.pi)
            assert min(delta, 2.0 * math.pi - delta) < 1e-10


def test_phi_plus_sweep_has_no_branch_jump():
    ns = np.linspace(0.05, 0.95, 800)
    phases = [sc.phi_phase(kin_at(float(n)), sc.SignBranch.PLUS) for n in ns]
    assert np.array_equal(unwrap_phase(phases), np.asarray(phases))


# ---------------------------------------------------------------------------
# symmetric-collision times


def test_symmetric_phase_time_reference_value():
    kin = kin_at(0.5)
    assert sc.symmetric_phase_time(kin) / kin.tau_k == pytest.approx(
        FROZEN["t_T_phi_half_4pi"], rel=1e-12
    )


def test_symmetric_phase_time_barrier_top_limit():
    kin = kin_at(1.0 - 1e-6)
    assert sc.symmetric_phase_time(kin) / kin.tau_k == pytest.approx(
        FROZEN["t_T_phi_near_top"], rel=1e-12
    )
    kin = kin_at(1.0)
    assert sc.symmetric_phase_time(kin) / kin.tau_k == pytest.approx(2.0, rel=1e-14)


def test_symmetric_phase_time_short_barrier_limit():
    kin = kin_at(0.5, 1e-4)
    expected = kin.m * kin.L * (kin.w**2 + kin.k**2) / kin.k**3
    assert sc.symmetric_phase_time(kin) == pytest.approx(expected, rel=1e-7)


def test_symmetric_phase_time_matches_derivative():
    for n in (0.15, 0.5, 0.85):
        kin = kin_at(n)
        closed = sc.symmetric_phase_time(kin)
        numeric = sc.phase_time_numeric(kin, sc.SignBranch.PLUS)
        assert numeric == pytest.approx(closed, rel=1e-8)


def test_dwell_time_reference_and_limits():
    kin = kin_at(0.5)
    assert sc.dwell_time_closed(kin) / kin.tau_k == pytest.approx(FROZEN["t_D_phi_half_4pi"], rel=1e-12)
    kin = kin_at(1.0 - 1e-9)
    assert sc.dwell_time_closed(kin) / kin.tau_k == pytest.approx(2.0, rel=1e-6)
    kin = kin_at(0.5, 16.0 * math.pi)
    opaque = 2.0 * kin.m * kin.k / (kin.w**2 * kin.rho.real)
    assert sc.dwell_time_closed(kin) == pytest.approx(opaque, rel=1e-4)


def test_self_interference_reference_and_limits():
    kin = kin_at(0.5)
    assert sc.self_interference_time(kin) / kin.tau_k == pytest.approx(
        FROZEN["t_I_phi_half_4pi"], rel=1e-12
    )
    assert sc.self_interference_time(kin_at(1.0)) == 0.0
    kin = kin_at(0.5, 16.0 * math.pi)
    opaque = 2.0 * kin.m * kin.rho.real / (kin.k * kin.w**2)
    assert sc.self_interference_time(kin) == pytest.approx(opaque, rel=1e-4)


@tunneling_points
@settings(max_examples=80, deadline=None)
def test_self_interference_equals_phase_sine(n, wl):
    kin = kin_at(n, wl)
    phi = sc.phi_phase(kin, sc.SignBranch.PLUS)
    expected = -kin.m * math.sin(phi) / kin.k**2
    assert sc.self_interference_time(kin) == pytest.approx(expected, rel=1e-11)


def test_time_bundle_reference_row():
    kin = kin_at(0.5)
    bundle = sc.time_bundle(kin)
    assert bundle.t_D_phi + bundle.t_I_phi == pytest.approx(bundle.t_T_phi, rel=1e-13)
    assert bundle.t_T / kin.tau_k == pytest.approx(FROZEN["t_T_half_4pi"], rel=1e-12)


@tunneling_points
@settings(max_examples=80, deadline=None)
def test_decomposition_identity(n, wl):
    kin = kin_at(n, wl)
    bundle = sc.time_bundle(kin)
    residual = abs(bundle.t_T_phi - bundle.t_D_phi - bundle.t_I_phi)
    assert residual <= 1e-12 * bundle.t_T_phi
    assert min(bundle.t_T, bundle.t_T_phi, bundle.t_D_phi, bundle.t_I_phi) > 0.0


def test_time_bundle_limits_at_barrier_top():
    kin = kin_at(1.0 - 1e-9)
    bundle = sc.time_bundle(kin)
    assert bundle.t_T_phi / kin.tau_k == pytest.approx(2.0, rel=1e-6)
    assert bundle.t_D_phi / kin.tau_k == pytest.approx(2.0, rel=1e-6)
    assert bundle.t_I_phi / kin.tau_k == pytest.approx(0.0, abs=1e-6)


# ---------------------------------------------------------------------------
# interior wave and dwell quadrature


def _amps_both(n, wl=WL):
    b = barrier_from_dimensionless(wl)
    k = math.sqrt(n) * b.w
    return (
        sc.solve_stationary(b, k, sc.Side.LEFT),
        sc.solve_stationary(b, k, sc.Side.RIGHT),
        kinematics(b, k),
    )


def test_interior_wave_even_and_cosh_shaped():
    left, right, kin = _amps_both(0.5)
    xs = np.linspace(-kin.L / 2.0, kin.L / 2.0, 33)
    values = sc.interior_wave(left, right, kin, xs)
    assert np.allclose(values, values[::-1], rtol=1e-12, atol=1e-300)
    ratio = values / np.cosh(kin.rho.real * xs)
    assert np.allclose(ratio, ratio[0], rtol=1e-12)


def test_interior_wave_center_value():
    left, right, kin = _amps_both(0.5)
    coeff = abs(left.beta + left.gamma) ** 2
    assert abs(sc.interior_wave(left, right, kin, 0.0)) ** 2 == pytest.approx(2.0 * coeff, rel=1e-12)
    assert coeff == pytest.approx(FROZEN["interior_coeff_half_4pi"], rel=1e-10)


def test_interior_wave_rejects_outside_positions():
    left, right, kin = _amps_both(0.5)
    with pytest.raises(DomainError):
        sc.interior_wave(left, right, kin, kin.L)


@tunneling_points
@settings(max_examples=40, deadline=None)
def test_interior_coefficient_identity(n, wl):
    b = barrier_from_dimensionless(wl)
    kin = kin_at(n, wl)
    amps = sc.solve_stationary(b, kin.k)
    expected = 2.0 * n / (2.0 * n - 1.0 + math.cosh(kin.alpha.real))
    assert abs(amps.beta + amps.gamma) ** 2 == pytest.approx(expected, rel=1e-10)


def test_dwell_quadrature_matches_closed_form():
    kin = kin_at(0.5)
    assert sc.dwell_time_numeric(kin) == pytest.approx(sc.dwell_time_closed(kin), rel=1e-8)
    rng = np.random.default_rng(5)
    for _ in range(10):
        kin = kin_at(rng.uniform(0.05, 0.95), rng.uniform(0.5, 2.0 * math.pi))
        assert sc.dwell_time_numeric(kin) == pytest.approx(sc.dwell_time_closed(kin), rel=1e-8)


def test_interior_integral_antiderivative_cross_check():
    # integral of cosh^2(rho x) over the barrier equals (sinh(alpha) + alpha)/(2 rho)
    from tunneltimes.numerics import integrate

    kin = kin_at(0.37, 5.0)
    rho = kin.rho.real
    value, _ = integrate(lambda x: math.cosh(rho * x) ** 2, -kin.L / 2.0, kin.L / 2.0)
    expected = (math.sinh(kin.alpha.real) + kin.alpha.real) / (2.0 * rho)
    assert value == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------------------
# variational identity


def test_variational_residual_small_at_default_step():
    report = sc.variational_check(kin_at(0.5))
    assert report.residual < 1e-6
    assert report.dE == pytest.approx(1e-5 * kin_at(0.5).energy)


def test_variational_second_order_in_energy_step():
    kin = kin_at(0.5)
    coarse = sc.variational_check(kin, dE=4e-3 * kin.energy).residual
    fine = sc.variational_check(kin, dE=2e-3 * kin.energy).residual
    assert 3.5 < coarse / fine < 4.5


def test_variational_ties_to_closed_forms():
    report = sc.variational_check(kin_at(0.5))
    assert report.group_delay_fd == pytest.approx(report.group_delay_closed, rel=1e-8)
    assert report.dwell_from_boundary == pytest.approx(report.dwell_closed, rel=1e-6)
    assert report.interference_term == pytest.approx(report.interference_closed, rel=1e-10)


def test_variational_rejects_bad_step():
    kin = kin_at(0.5)
    with pytest.raises(DomainError):
        sc.variational_check(kin, dE=2.0 * kin.energy)


# ---------------------------------------------------------------------------
# antisymmetric branch


def test_antisymmetric_phase_time_regression_pin():
    kin = kin_at(0.5)
    assert sc.antisymmetric_phase_time(kin) / kin.tau_k == pytest.approx(
        FROZEN["t_minus_half_4pi"], rel=1e-7
    )


def test_numeric_differentiator_validated_on_plus_branch():
    for n, wl in ((0.3, 2.0 * math.pi), (0.7, WL)):
        kin = kin_at(n, wl)
        assert sc.phase_time_numeric(kin, sc.SignBranch.PLUS) == pytest.approx(
            sc.symmetric_phase_time(kin), rel=1e-6
        )


# ---------------------------------------------------------------------------
# piecewise fields and parity


def test_field_side_mirror_symmetry():
    b = barrier_from_dimensionless(WL)
    kin = kin_at(0.4)
    left = sc.solve_stationary(b, kin.k, sc.Side.LEFT)
    right = sc.solve_stationary(b, kin.k, sc.Side.RIGHT)
    xs = np.linspace(-10.0, 10.0, 81)
    left_field = sc.stationary_field(left, kin, xs)
    right_field = sc.stationary_field(right, kin, -xs)
    assert np.allclose(left_field, right_field, rtol=1e-10, atol=1e-14)


def test_symmetrized_field_parity():
    b = barrier_from_dimensionless(WL)
    xs = np.linspace(-9.0, 9.0, 61)
    for n in (0.3, 0.5, 0.8):
        k = math.sqrt(n) * b.w
        plus = sc.symmetrized_field(b, k, sc.SignBranch.PLUS, xs)
        minus = sc.symmetrized_field(b, k, sc.SignBranch.MINUS, xs)
        scale = np.max(np.abs(plus))
        assert np.max(np.abs(plus - plus[::-1])) < 1e-10 * scale
        assert np.max(np.abs(minus + minus[::-1])) < 1e-10 * scale


# ---------------------------------------------------------------------------
# transmission-vs-speed scan


def test_scan_reference_row():
    report = sc.superluminal_scan(WL, [0.5])
    row = report.rows[0]
    assert row.T2 == pytest.approx(FROZEN["t_abs_half_4pi"] ** 2, rel=1e-10)
    assert not row.flag_T
    assert row.flag_fast  # tunneling group delay is below tau_k here
    assert not row.flag_joint


def test_scan_tunneling_region_is_clean():
    for wl in sc.DEFAULT_SCAN_WL:
        report = sc.superluminal_scan(wl, sc.default_scan_grid())
        assert report.joint_empty_in_tunneling


def test_scan_joint_onset_beyond_two():
    onsets = []
    for wl in sc.DEFAULT_SCAN_WL:
        report = sc.superluminal_scan(wl, sc.default_scan_grid())
        if report.onset_n is not None:
            onsets.append(report.onset_n)
    assert onsets, "expected a joint region above the barrier"
    assert min(onsets) > 2.0


def test_scan_rejects_nonpositive_grid():
    with pytest.raises(DomainError):
        sc.superluminal_scan(WL, [0.5, -0.1])
