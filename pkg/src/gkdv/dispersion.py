"""Linear dispersion of the layer, its limits, and phase/group velocities.

The layer's linear theory gives

    omega^2 = (g*k + sigma*k^3/rho) * tanh(k*h),

obtained by substituting a plane wave into the linearized surface system.
Note this is *not* what a naive reading of the model's printed dispersion
formula suggests: a factor (1 + sigma/(rho*g)) appearing there is
dimensionally inconsistent (sigma/(rho*g) carries length^2).  The relation
above is re-derived from the linearized system itself and reproduces both
documented limits: the acoustic limit omega^2 -> c0^2 k^2 for sigma = 0 and
shallow modes, and the capillary limit omega^2 -> (h*sigma/rho) k^4 for g = 0.

Separately, the arbitrary-depth *model equation* has its own linear frequency

    omega_model(k) = (c0/h) * sinh(k*h),

which agrees with sqrt(omega^2) only as k*h -> 0.  Time-evolution tests use
omega_model; physical dispersion sweeps use omega^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BandLimitError
from .params import PhysicalParams
from .spectral import DEFAULT_MAX_KH


@dataclass(frozen=True)
class DispersionSample:
    """One row of a dispersion sweep."""

    k: float
    omega2: float
    omega_model: float
    phase_velocity: float
    group_velocity: float


def omega_squared(k, params: PhysicalParams):
    """Squared angular frequency (g*k + sigma*k^3/rho) * tanh(k*h).

    Accepts scalars or arrays; k must be >= 0.  Continuous limit 0 at k = 0.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wavenumber k must be >= 0")
    out = (params.g * k + params.sigma * k**3 / params.rho) * np.tanh(k * params.h)
    return out if out.ndim else float(out)


def model_dispersion_gkdv(k, params: PhysicalParams, max_kh: float = DEFAULT_MAX_KH):
    """The arbitrary-depth model equation's own linear frequency (c0/h)*sinh(k*h)."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wavenumber k must be >= 0")
    kh = k * params.h
    top = float(np.max(kh)) if kh.size else 0.0
    if top > max_kh:
        j = int(np.argmax(kh))
        raise BandLimitError(kh=top, threshold=max_kh, mode_index=j, k=float(np.ravel(k)[j]))
    out = (params.c0 / params.h) * np.sinh(kh)
    return out if out.ndim else float(out)


def phase_velocity(k, params: PhysicalParams):
    """sqrt(omega^2)/k, with the k -> 0 limit c0 (g > 0) filled in."""
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    out = np.empty_like(k)
    zero = k == 0
    out[zero] = params.c0 if params.g > 0 else 0.0
    nz = ~zero
    out[nz] = np.sqrt(omega_squared(k[nz], params)) / k[nz]
    return float(out[0]) if scalar else out


def group_velocity(k, params: PhysicalParams):
    """Analytic d(omega)/dk of sqrt(omega_squared).

    From omega^2 = P(k)*tanh(k*h) with P = g*k + sigma*k^3/rho:

        2*omega*domega/dk = P'(k)*tanh(k*h) + P(k)*h*sech^2(k*h).

    The k = 0 value is the limit: c0 when g > 0 (nondispersive long waves),
    0 in the purely capillary case.
    """
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    if np.any(k < 0):
        raise ValueError("wavenumber k must be >= 0")
    out = np.empty_like(k)
    zero = k == 0
    out[zero] = params.c0 if params.g > 0 else 0.0
    nz = ~zero
    kn = k[nz]
    kh = kn * params.h
    P = params.g * kn + params.sigma * kn**3 / params.rho
    dP = params.g + 3.0 * params.sigma * kn**2 / params.rho
    # sech^2 underflows harmlessly to 0 for large kh; cap the argument to
    # keep cosh from overflowing first.
    sech2 = 1.0 / np.cosh(np.minimum(kh, 300.0)) ** 2
    sech2 = np.where(kh > 300.0, 0.0, sech2)
    omega = np.sqrt(P * np.tanh(kh))
    out[nz] = (dP * np.tanh(kh) + P * params.h * sech2) / (2.0 * omega)
    return float(out[0]) if scalar else out


def dispersion_sample(k: float, params: PhysicalParams, max_kh: float = DEFAULT_MAX_KH) -> DispersionSample:
    """Evaluate all dispersion quantities at a single wavenumber."""
    return DispersionSample(
        k=float(k),
        omega2=omega_squared(k, params),
        omega_model=model_dispersion_gkdv(k, params, max_kh),
        phase_velocity=phase_velocity(k, params),
        group_velocity=group_velocity(k, params),
    )


def dispersion_sweep(
    k_min: float,
    k_max: float,
    num: int,
    params: PhysicalParams,
    max_kh: float = DEFAULT_MAX_KH,
) -> list[DispersionSample]:
    """Uniform sweep over [k_min, k_max] with `num` samples (single sample if
    the endpoints coincide)."""
    if k_min < 0 or k_max < k_min:
        raise ValueError(f"invalid k range [{k_min}, {k_max}]")
    if num < 1:
        raise ValueError(f"need at least one sample, got num={num}")
    ks = [k_min] if k_min == k_max else list(np.linspace(k_min, k_max, num))
    return [dispersion_sample(float(k), params, max_kh) for k in ks]


def group_velocity_fd(k: float, params: PhysicalParams, rel_step: float = 1e-6) -> float:
    """Centered finite difference of sqrt(omega_squared); cross-check oracle
    for :func:`group_velocity` at k > 0."""
    if k <= 0:
        raise ValueError("finite-difference check needs k > 0")
    dk = rel_step * k
    wp = math.sqrt(omega_squared(k + dk, params))
    wm = math.sqrt(omega_squared(k - dk, params))
    return (wp - wm) / (2.0 * dk)
