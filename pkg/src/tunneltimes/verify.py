"""Registered cross-check suite behind the `verify` CLI command.

Each check pits two independent routes against each other (closed form vs
linear solve, quadrature vs antiderivative, finite differences vs analytic
derivative) and reports the worst deviation against its required tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import scattering as sc
from .kinematics import barrier_from_dimensionless, kinematics, kinematics_from_dimensionless

__all__ = ["CheckResult", "run_all_checks", "CHECK_NAMES"]

_GRID_N = np.arange(1, 100) * 0.01          # 0.01 .. 0.99
_GRID_WL = (2.0 * math.pi, 4.0 * math.pi, 8.0 * math.pi)
_SOLVE_GRID_N = np.arange(1, 20) * 0.05     # coarser grid for solve-backed checks


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    achieved: float
    required: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name}: achieved {self.achieved:.3e}"
            f" (required < {self.required:.1e}) {self.detail}"
        )


def _check(name, achieved, required, detail=""):
    return CheckResult(name, achieved < required, float(achieved), required, detail)


def _unitarity_closed() -> CheckResult:
    worst = 0.0
    for wl in _GRID_WL:
        for n in _GRID_N:
            kin = kinematics_from_dimensionless(float(n), wl)
            r = sc.reflection_amplitude(kin)
            t = sc.transmission_amplitude(kin)
            worst = max(worst, abs(abs(r) ** 2 + abs(t) ** 2 - 1.0))
    return _check("unitarity (closed forms)", worst, 1e-12)


def _unitarity_solve() -> CheckResult:
    worst = 0.0
    for wl in _GRID_WL:
        b = barrier_from_dimensionless(wl)
        for n in _SOLVE_GRID_N:
            k = math.sqrt(float(n)) * b.w
            for side in (sc.Side.LEFT, sc.Side.RIGHT):
                amps = sc.solve_stationary(b, k, side)
                worst = max(worst, abs(abs(amps.R) ** 2 + abs(amps.T) ** 2 - 1.0))
    return _check("unitarity (continuity solve)", worst, 1e-12)


def _unimodularity() -> CheckResult:
    worst = 0.0
    for wl in _GRID_WL:
        for n in _GRID_N:
            kin = kinematics_from_dimensionless(float(n), wl)
            for sign in (sc.SignBranch.PLUS, sc.SignBranch.MINUS):
                s = sc.superpose_scattered(kin, sign)
                worst = max(worst, abs(abs(s.S) - 1.0))
    return _check("unimodularity |R +/- T| = 1", worst, 1e-12)


def _decomposition() -> CheckResult:
    worst = 0.0
    for wl in _GRID_WL:
        for n in _GRID_N:
            kin = kinematics_from_dimensionless(float(n), wl)
            bundle = sc.time_bundle(kin)
            resid = abs(bundle.t_T_phi - bundle.t_D_phi - bundle.t_I_phi) / bundle.t_T_phi
            worst = max(worst, resid)
    return _check("dwell + interference = group delay", worst, 1e-12)


def _derivative_consistency() -> CheckResult:
    worst = 0.0
    for wl in _GRID_WL:
        for n in _GRID_N:
            kin = kinematics_from_dimensionless(float(n), wl)
            t_sym = sc.symmetric_phase_time(kin)
            worst = max(worst, abs(sc.phase_time_numeric(kin, sc.SignBranch.PLUS) - t_sym) / t_sym)
            t_std = sc.standard_phase_time(kin)
            worst = max(worst, abs(sc.standard_phase_time_numeric(kin) - t_std) / abs(t_std))
    return _check("closed-form vs numeric group delays", worst, 1e-6)


def _dwell_quadrature(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        n = rng.uniform(0.02, 0.98)
        wl = rng.uniform(0.5, 2.0 * math.pi)
        kin = kinematics_from_dimensionless(n, wl)
        closed = sc.dwell_time_closed(kin)
        worst = max(worst, abs(sc.dwell_time_numeric(kin) - closed) / closed)
    return _check("dwell quadrature vs closed form", worst, 1e-8)


def _interior_coefficient(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        n = rng.uniform(0.02, 0.98)
        wl = rng.uniform(0.5, 2.0 * math.pi)
        b = barrier_from_dimensionless(wl)
        kin = kinematics_from_dimensionless(n, wl)
        amps = sc.solve_stationary(b, kin.k)
        expected = 2.0 * n / (2.0 * n - 1.0 + math.cosh(kin.alpha.real))
        worst = max(worst, abs(abs(amps.beta + amps.gamma) ** 2 - expected) / expected)
    return _check("interior coefficient identity", worst, 1e-10)


def _variational() -> CheckResult:
    worst = 0.0
    for n in (0.25, 0.5, 0.75):
        for wl in (2.0 * math.pi, 4.0 * math.pi):
            worst = max(worst, sc.variational_check(kinematics_from_dimensionless(n, wl)).residual)
    return _check("energy-derivative (variational) identity", worst, 1e-6)


def _parity() -> CheckResult:
    xs = np.linspace(-12.0, 12.0, 41)
    worst = 0.0
    for n in (0.3, 0.5, 0.8):
        b = barrier_from_dimensionless(4.0 * math.pi)
        k = math.sqrt(n) * b.w
        plus = sc.symmetrized_field(b, k, sc.SignBranch.PLUS, xs)
        minus = sc.symmetrized_field(b, k, sc.SignBranch.MINUS, xs)
        scale = float(np.max(np.abs(plus)))
        worst = max(worst, float(np.max(np.abs(plus - plus[::-1]))) / scale)
        worst = max(worst, float(np.max(np.abs(minus + minus[::-1]))) / scale)
    return _check("field parity under x -> -x", worst, 1e-10)


def _hartman() -> CheckResult:
    kin = kinematics_from_dimensionless(0.5, 16.0 * math.pi)
    saturated = 2.0 * kin.m / (kin.k * kin.rho.real)
    t_std = sc.standard_phase_time(kin)
    t_sym = sc.symmetric_phase_time(kin)
    worst = max(
        abs(t_std - saturated) / saturated,
        abs(t_sym - saturated) / saturated,
        abs(t_std - t_sym) / t_sym,
    )
    return _check("opaque-barrier delay saturation", worst, 1e-3)


def _scan_clean() -> CheckResult:
    joint_below_1 = 0
    for wl in sc.DEFAULT_SCAN_WL:
        report = sc.superluminal_scan(wl, sc.default_scan_grid())
        if not report.joint_empty_in_tunneling:
            joint_below_1 += 1
    return _check("no fast transmitting point under tunneling", float(joint_below_1), 0.5)


CHECK_NAMES = (
    "unitarity (closed forms)",
    "unitarity (continuity solve)",
    "unimodularity |R +/- T| = 1",
    "dwell + interference = group delay",
    "closed-form vs numeric group delays",
    "dwell quadrature vs closed form",
    "interior coefficient identity",
    "energy-derivative (variational) identity",
    "field parity under x -> -x",
    "opaque-barrier delay saturation",
    "no fast transmitting point under tunneling",
)


def run_all_checks(seed: int = 20260809) -> list[CheckResult]:
    """Run the registered suite; deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    return [
        _unitarity_closed(),
        _unitarity_solve(),
        _unimodularity(),
        _decomposition(),
        _derivative_consistency(),
        _dwell_quadrature(rng),
        _interior_coefficient(rng),
        _variational(),
        _parity(),
        _hartman(),
        _scan_clean(),
    ]
