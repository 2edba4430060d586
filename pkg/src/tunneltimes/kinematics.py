"""Barrier parameterization and per-wavenumber derived quantities.

Units: hbar = 1 throughout.  The barrier strength is w = sqrt(2 m V0); the
dimensionless energy is n = k^2/w^2, and the evanescent wavenumber is
rho = sqrt(w^2 - k^2), continued to +i*sqrt(k^2 - w^2) above the barrier.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

__all__ = [
    "BarrierSpec",
    "Kinematics",
    "NormalizationMode",
    "derive_barrier",
    "barrier_from_dimensionless",
    "kinematics",
    "kinematics_from_dimensionless",
    "normalize_time",
]


def _branch_sqrt(u: float) -> complex:
    """sqrt with Re >= 0; negative real arguments map to +i*sqrt(|u|)."""
    if u >= 0.0:
        return complex(math.sqrt(u), 0.0)
    return complex(0.0, math.sqrt(-u))


@dataclass(frozen=True)
class BarrierSpec:
    """Rectangular barrier of height V0 on [-L/2, L/2] for a particle of mass m."""

    V0: float
    L: float
    m: float
    w: float  # derived strength sqrt(2 m V0), inverse length

    @property
    def wl(self) -> float:
        """Dimensionless opacity scale w*L."""
        return self.w * self.L


@dataclass(frozen=True)
class Kinematics:
    """Derived quantities for one incident wavenumber against one barrier."""

    k: float
    n: float            # k^2 / w^2
    rho: complex        # sqrt(w^2 - k^2), Re >= 0; purely imaginary above barrier
    alpha: complex      # rho * L
    tau_k: float        # classical traversal time m L / k
    tau_w: float        # barrier time m L / w
    w: float
    L: float
    m: float

    @property
    def wl(self) -> float:
        return self.w * self.L

    @property
    def energy(self) -> float:
        return self.k * self.k / (2.0 * self.m)

    def with_k(self, k: float) -> "Kinematics":
        """Same barrier, different incident wavenumber."""
        return kinematics(BarrierSpec(self.w**2 / (2 * self.m), self.L, self.m, self.w), k)


class NormalizationMode(Enum):
    ABSOLUTE = "absolute"
    BY_TAU_K = "by_tau_k"
    BY_TAU_W = "by_tau_w"


def derive_barrier(V0: float, L: float, m: float) -> BarrierSpec:
    """Build a BarrierSpec, deriving the strength w = sqrt(2 m V0)."""
    for name, value in (("V0", V0), ("L", L), ("m", m)):
        if not (value > 0.0) or not math.isfinite(value):
            raise DomainError(f"{name} must be strictly positive and finite, got {value!r}")
    return BarrierSpec(V0=V0, L=L, m=m, w=math.sqrt(2.0 * m * V0))


def barrier_from_dimensionless(wl: float, w: float = 1.0, m: float = 1.0) -> BarrierSpec:
    """Barrier specified by the dimensionless product w*L (canonical w = m = 1)."""
    if not (wl > 0.0) or not math.isfinite(wl):
        raise DomainError(f"wl must be strictly positive and finite, got {wl!r}")
    if not (w > 0.0) or not (m > 0.0):
        raise DomainError("w and m must be strictly positive")
    return BarrierSpec(V0=w * w / (2.0 * m), L=wl / w, m=m, w=w)


def kinematics(b: BarrierSpec, k: float) -> Kinematics:
    """Per-k derived quantities against barrier b.

    k == w is representable: rho and alpha come out exactly zero.  The
    radicand is computed as (w-k)(w+k) to avoid cancellation near k = w.
    """
    if not (k > 0.0) or not math.isfinite(k):
        raise DomainError(f"k must be strictly positive and finite, got {k!r}")
    n = (k / b.w) ** 2
    rho = _branch_sqrt((b.w - k) * (b.w + k))
    return Kinematics(
        k=k,
        n=n,
        rho=rho,
        alpha=rho * b.L,
        tau_k=b.m * b.L / k,
        tau_w=b.m * b.L / b.w,
        w=b.w,
        L=b.L,
        m=b.m,
    )


def kinematics_from_dimensionless(n: float, wl: float, w: float = 1.0, m: float = 1.0) -> Kinematics:
    """Kinematics from (n, wL) directly; n = 1 yields rho = alpha = 0 exactly."""
    if not (n > 0.0) or not math.isfinite(n):
        raise DomainError(f"n must be strictly positive and finite, got {n!r}")
    b = barrier_from_dimensionless(wl, w=w, m=m)
    k = math.sqrt(n) * w
    rho = _branch_sqrt(1.0 - n) * w
    return Kinematics(
        k=k,
        n=n,
        rho=rho,
        alpha=rho * b.L,
        tau_k=m * b.L / k,
        tau_w=m * b.L / w,
        w=w,
        L=b.L,
        m=m,
    )


def normalize_time(t: float, mode: NormalizationMode, kin: Kinematics) -> float:
    """Express an absolute time per the requested normalization."""
    if mode is NormalizationMode.ABSOLUTE:
        return t
    if mode is NormalizationMode.BY_TAU_K:
        return t / kin.tau_k
    if mode is NormalizationMode.BY_TAU_W:
        return t / kin.tau_w
    raise DomainError(f"unknown normalization mode {mode!r}")
