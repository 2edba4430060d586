"""Shared numerical primitives.

Adaptive Gauss-Kronrod quadrature, Richardson-extrapolated central
differences, 1D phase unwrapping, parabolic peak refinement, and guarded
series evaluation of ratios with removable singularities at zero.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergenceError

__all__ = [
    "Tolerance",
    "integrate",
    "differentiate",
    "unwrap_phase",
    "refine_peak",
    "sinhc",
    "tanhc",
    "coshm1",
    "sinh2c_m1",
]

# 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
# Abscissae are symmetric; only the non-negative half is tabulated.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss weights pair with the odd-index Kronrod abscissae (and the midpoint).
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class Tolerance:
    """Quadrature stopping rule: absolute/relative targets plus a depth cap."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if self.abs_tol < 0.0 or self.rel_tol < 0.0:
            raise DomainError("tolerances must be non-negative")
        if self.abs_tol == 0.0 and self.rel_tol == 0.0:
            raise DomainError("at least one of abs_tol, rel_tol must be positive")
        if self.max_depth < 0:
            raise DomainError("max_depth must be non-negative")


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Kronrod-15 panel: returns (integral, error estimate).

    The estimate is |K15 - G7| floored at a rounding-level multiple of the
    absolute integral so it stays conservative even when both rules agree to
    the bit.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    resabs = _WGK[7] * abs(fc)
    finite = math.isfinite(fc)
    for i in range(7):
        x = h * _XGK[i]
        f1 = f(c - x)
        f2 = f(c + x)
        finite = finite and math.isfinite(f1) and math.isfinite(f2)
        kron += _WGK[i] * (f1 + f2)
        resabs += _WGK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            gauss += _WG[i // 2] * (f1 + f2)
    if not finite:
        raise NonConvergenceError(f"non-finite integrand sample in [{a}, {b}]")
    err = max(abs(kron - gauss), 50.0 * 2.220446049250313e-16 * resabs)
    return kron * h, err * h


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: Tolerance = Tolerance(),
) -> tuple[float, float]:
    """Adaptive bisection quadrature of f over [a, b].

    Returns (value, error_estimate).  Panels are refined worst-first until
    the summed error estimate meets max(abs_tol, rel_tol*|value|); exceeding
    max_depth raises NonConvergenceError carrying the best estimate.
    """
    if not (a < b):
        raise DomainError(f"integration bounds must satisfy a < b, got [{a}, {b}]")
    val, err = _gk15(f, a, b)
    # heap entries: (-err, tiebreak, a, b, depth, val)
    counter = 0
    heap = [(-err, counter, a, b, 0, val)]
    total, total_err = val, err
    while total_err > max(tol.abs_tol, tol.rel_tol * abs(total)):
        neg_err, _, pa, pb, depth, pval = heapq.heappop(heap)
        if depth >= tol.max_depth:
            raise NonConvergenceError(
                f"quadrature stalled at depth {depth} with error {total_err:.3e}",
                best_estimate=total,
                achieved=total_err,
            )
        pm = 0.5 * (pa + pb)
        lval, lerr = _gk15(f, pa, pm)
        rval, rerr = _gk15(f, pm, pb)
        total += lval + rval - pval
        total_err += lerr + rerr + neg_err  # neg_err == -parent_err
        counter += 1
        heapq.heappush(heap, (-lerr, counter, pa, pm, depth + 1, lval))
        counter += 1
        heapq.heappush(heap, (-rerr, counter, pm, pb, depth + 1, rval))
    return total, total_err


def differentiate(
    f: Callable[[float], float],
    x: float,
    h0: float | None = None,
) -> tuple[float, float]:
    """Derivative of f at x: central differences plus one Richardson level.

    Returns (derivative, error_estimate); the estimate is the disagreement
    between the extrapolated value and the finer central difference.
    """
    h = h0 if h0 is not None else 1e-6 * max(1.0, abs(x))
    if not (h > 0.0):
        raise DomainError("step h0 must be positive")
    samples = [f(x + h), f(x - h), f(x + 0.5 * h), f(x - 0.5 * h)]
    if not all(math.isfinite(s) for s in samples):
        raise NonConvergenceError(f"non-finite sample while differentiating at x={x}")
    d1 = (samples[0] - samples[1]) / (2.0 * h)
    d2 = (samples[2] - samples[3]) / h
    extrap = (4.0 * d2 - d1) / 3.0
    return extrap, abs(extrap - d2)


def unwrap_phase(samples: Sequence[float]) -> np.ndarray:
    """Add 2*pi multiples so adjacent differences lie in (-pi, pi]."""
    return np.unwrap(np.asarray(samples, dtype=float))


def refine_peak(
    x_samples: Sequence[float],
    y_samples: Sequence[float],
    i_max: int,
) -> tuple[float, bool]:
    """Vertex of the parabola through the three samples around a local maximum.

    Returns (position, refined).  A degenerate (collinear or flat) triple
    falls back to the grid maximum with refined=False.
    """
    x = np.asarray(x_samples, dtype=float)
    y = np.asarray(y_samples, dtype=float)
    if i_max <= 0 or i_max >= len(x) - 1:
        raise DomainError("i_max must have both neighbors present")
    if y[i_max] < y[i_max - 1] or y[i_max] < y[i_max + 1]:
        raise DomainError("i_max is not a local maximum")
    x0, x1, x2 = x[i_max - 1], x[i_max], x[i_max + 1]
    y0, y1, y2 = y[i_max - 1], y[i_max], y[i_max + 1]
    d01 = x1 - x0
    d12 = x1 - x2
    num = d01 * d01 * (y1 - y2) - d12 * d12 * (y1 - y0)
    den = d01 * (y1 - y2) - d12 * (y1 - y0)
    if den == 0.0:
        return float(x1), False
    return float(x1 - 0.5 * num / den), True


# ---------------------------------------------------------------------------
# Guarded ratios.  Each switches to its Maclaurin form below a small-|z|
# threshold; the direct and series branches agree to ~1e-13 at the crossover.
# All are even in z, so purely imaginary arguments give real values.

_SERIES_GUARD = 1e-3


def sinhc(z: complex) -> complex:
    """sinh(z)/z, with sinhc(0) = 1."""
    if abs(z) < _SERIES_GUARD:
        z2 = z * z
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0))
    if isinstance(z, complex):
        return cmath.sinh(z) / z
    return math.sinh(z) / z


def tanhc(z: complex) -> complex:
    """tanh(z)/z, with tanhc(0) = 1."""
    if abs(z) < _SERIES_GUARD:
        z2 = z * z
        return 1.0 - z2 / 3.0 + (2.0 / 15.0) * z2 * z2 - (17.0 / 315.0) * z2 * z2 * z2
    if isinstance(z, complex):
        return cmath.tanh(z) / z
    return math.tanh(z) / z


def coshm1(z: complex) -> complex:
    """cosh(z) - 1 evaluated without cancellation, as 2*sinh(z/2)^2."""
    half = cmath.sinh(z / 2.0) if isinstance(z, complex) else math.sinh(z / 2.0)
    return 2.0 * half * half


# (sinh(2z)/(2z) - 1)/z^2 loses ~half the mantissa near z ~ 1e-3 if formed
# directly, so this one keeps a wider series window.
_SINH2C_GUARD = 0.08
_SINH2C_COEF = (
    4.0 / 6.0,            # 4^1/3!
    16.0 / 120.0,         # 4^2/5!
    64.0 / 5040.0,        # 4^3/7!
    256.0 / 362880.0,     # 4^4/9!
    1024.0 / 39916800.0,  # 4^5/11!
)


def sinh2c_m1(z: complex) -> complex:
    """(sinh(2z)/(2z) - 1)/z^2, with value 2/3 at z = 0."""
    if abs(z) < _SINH2C_GUARD:
        z2 = z * z
        acc = 0.0
        for c in reversed(_SINH2C_COEF):
            acc = acc * z2 + c
        return acc
    two_z = 2.0 * z
    s = cmath.sinh(two_z) if isinstance(z, complex) else math.sinh(two_z)
    return (s / two_z - 1.0) / (z * z)
