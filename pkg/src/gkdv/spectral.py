"""Periodic grids, real spectral fields, and nonlocal Fourier-multiplier operators.

The layer model needs the operator-valued trigonometric functions sin(h*d/dx)
and cos(h*d/dx).  On a periodic domain they act mode-by-mode: with d/dx -> i*k,

    sin(h d/dx) e^{ikx} = i*sinh(k h) e^{ikx},
    cos(h d/dx) e^{ikx} =   cosh(k h) e^{ikx}.

Both multipliers grow exponentially in k*h, so every operator here refuses to
act on grids whose top mode exceeds a configurable band limit instead of
silently amplifying round-off.
"""

from __future__ import annotations

import math
import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import BandLimitError
from .params import PhysicalParams

#: Default band-limit threshold on k*h for hyperbolic multipliers.  At
#: k*h = 30, cosh(k*h) ~ 5e12, which amplifies double-precision round-off to
#: about 1e-3; beyond this the high modes carry no usable information.
DEFAULT_MAX_KH = 30.0


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid on [x0 - L, x0 + L).

    Parameters
    ----------
    L : float
        Domain half-length, > 0.
    N : int
        Number of samples; power of two, >= 8.
    x0 : float
        Domain center offset.

    The real-spectral wavenumber ladder is ``k_j = j*pi/L`` for
    ``j = 0 .. N/2`` (rfft storage).
    """

    L: float
    N: int
    x0: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"half-length L must be positive, got {self.L}")
        if not _is_power_of_two(self.N) or self.N < 8:
            raise ValueError(f"N must be a power of two >= 8, got {self.N}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        """Sample points x_j = x0 - L + j*dx, j = 0..N-1."""
        return self.x0 - self.L + self.dx * np.arange(self.N)

    @property
    def k(self) -> np.ndarray:
        """Non-negative wavenumbers of the rfft ladder, k_j = j*pi/L."""
        return (np.pi / self.L) * np.arange(self.N // 2 + 1)

    @property
    def k_max(self) -> float:
        return (np.pi / self.L) * (self.N // 2)

    def band_limit_product(self, h: float) -> float:
        """Diagnostic k_max * h for a layer of depth h."""
        return self.k_max * h


def check_band_limit(grid: PeriodicGrid, h: float, max_kh: float = DEFAULT_MAX_KH) -> None:
    """Refuse grids whose top mode overflows a hyperbolic multiplier.

    Raises
    ------
    BandLimitError
        If ``k_max * h`` exceeds ``max_kh``; the error names the offending mode.
    """
    kh = grid.k_max * h
    if kh > max_kh:
        j = grid.N // 2
        raise BandLimitError(kh=kh, threshold=max_kh, mode_index=j, k=grid.k_max)


@dataclass(frozen=True)
class SpectralField:
    """Real-valued samples on a PeriodicGrid plus their rfft coefficients.

    Immutable after construction; all operators return new fields.  The
    conjugate-symmetric half-spectrum is stored (numpy rfft layout), so the
    represented field is real by construction.
    """

    grid: PeriodicGrid
    values: np.ndarray
    coeffs: np.ndarray = dataclasses.field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        coeffs = np.array(self.coeffs, dtype=complex, copy=True)
        if values.shape != (self.grid.N,):
            raise ValueError(f"values must have shape ({self.grid.N},), got {values.shape}")
        if coeffs.shape != (self.grid.N // 2 + 1,):
            raise ValueError(
                f"coeffs must have shape ({self.grid.N // 2 + 1},), got {coeffs.shape}"
            )
        values.flags.writeable = False
        coeffs.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_values(cls, grid: PeriodicGrid, values: np.ndarray) -> "SpectralField":
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        return cls(grid=grid, values=values, coeffs=np.fft.rfft(values))

    @classmethod
    def from_coeffs(cls, grid: PeriodicGrid, coeffs: np.ndarray) -> "SpectralField":
        coeffs = np.asarray(coeffs, dtype=complex).copy()
        # DC and Nyquist bins of a real field are real; zero out round-off there.
        coeffs[0] = coeffs[0].real
        coeffs[-1] = coeffs[-1].real
        values = np.fft.irfft(coeffs, n=grid.N)
        return cls(grid=grid, values=values, coeffs=coeffs)

    @classmethod
    def zero(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls.from_values(grid, np.zeros(grid.N))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.values + other.values, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.values - other.values, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.values * scalar, self.coeffs * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "SpectralField") -> None:
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")

    def apply_multiplier(self, multiplier: np.ndarray) -> "SpectralField":
        """Return the field whose spectrum is ``multiplier * coeffs``.

        The multiplier must satisfy m(-k) = conj(m(k)) for the result to be
        real; in rfft storage that means the caller supplies m(k) for k >= 0
        and reality is automatic.
        """
        return SpectralField.from_coeffs(self.grid, multiplier * self.coeffs)


def apply_sin_h_dx(field: SpectralField, h: float, max_kh: float = DEFAULT_MAX_KH) -> SpectralField:
    """Apply sin(h d/dx): mode k is multiplied by i*sinh(k h).

    A constant field (k = 0) and h = 0 both map to zero.
    """
    if h < 0:
        raise ValueError(f"depth h must be >= 0, got {h}")
    if h == 0.0:
        return SpectralField.zero(field.grid)
    check_band_limit(field.grid, h, max_kh)
    return field.apply_multiplier(1j * np.sinh(field.grid.k * h))


def apply_cos_h_dx(field: SpectralField, h: float, max_kh: float = DEFAULT_MAX_KH) -> SpectralField:
    """Apply cos(h d/dx): mode k is multiplied by cosh(k h).

    h = 0 is the identity.
    """
    if h < 0:
        raise ValueError(f"depth h must be >= 0, got {h}")
    if h == 0.0:
        return field
    check_band_limit(field.grid, h, max_kh)
    return field.apply_multiplier(np.cosh(field.grid.k * h))


def derivative(field: SpectralField, order: int = 1) -> SpectralField:
    """Spectral derivative d^n/dx^n, n in 1..4: mode k multiplied by (ik)^n."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    return field.apply_multiplier((1j * field.grid.k) ** order)


def surface_velocity(
    f: SpectralField,
    eta: SpectralField,
    params: PhysicalParams,
    max_kh: float = DEFAULT_MAX_KH,
) -> tuple[SpectralField, SpectralField]:
    """Velocity components evaluated on the free surface, first order in eta.

        u = [cos(h d/dx) - eta * d/dx sin(h d/dx)] f
        v = -[sin(h d/dx) + eta * d/dx cos(h d/dx)] f

    Products with eta are formed pointwise after the operators act on f.
    """
    if f.grid != eta.grid:
        raise ValueError("f and eta must share a grid")
    h = params.h
    cos_f = apply_cos_h_dx(f, h, max_kh)
    sin_f = apply_sin_h_dx(f, h, max_kh)
    d_sin_f = derivative(sin_f, 1)
    d_cos_f = derivative(cos_f, 1)
    u = SpectralField.from_values(f.grid, cos_f.values - eta.values * d_sin_f.values)
    v = SpectralField.from_values(f.grid, -(sin_f.values + eta.values * d_cos_f.values))
    return u, v


def f_linear_from_eta(
    eta: SpectralField,
    params: PhysicalParams,
    max_kh: float = DEFAULT_MAX_KH,
) -> SpectralField:
    """Linear-theory velocity function from the surface elevation.

    Mode k is multiplied by (c0/h) * (sinh(2kh)/(2kh))^(-1/2); the removable
    singularity at k = 0 is filled with its limit c0/h, which is also the
    exact shallow-layer multiplier.
    """
    h = params.h
    check_band_limit(eta.grid, h, max_kh)
    x = 2.0 * eta.grid.k * h
    ratio = np.ones_like(x)
    small = np.abs(x) < 1e-8
    big = ~small
    # sinh(x)/x -> 1 + x^2/6 near 0; direct evaluation elsewhere.
    ratio[small] = 1.0 + x[small] ** 2 / 6.0
    ratio[big] = np.sinh(x[big]) / x[big]
    multiplier = (params.c0 / h) / np.sqrt(ratio)
    return eta.apply_multiplier(multiplier)


def taylor_sin_h_dx(field: SpectralField, h: float, n_terms: int) -> SpectralField:
    """Truncated operator series for sin(h d/dx) built from repeated derivatives.

    Sums n_terms terms ``(-1)^j (h d/dx)^(2j+1) / (2j+1)!``; used as an
    independent oracle for :func:`apply_sin_h_dx` at moderate k*h.
    """
    term = h * derivative(field, 1)  # (h d/dx)^1 f
    total = term
    for j in range(1, n_terms):
        term = (h * h) * derivative(term, 2)  # multiply by (h d/dx)^2
        total = total + (term * ((-1.0) ** j / math.factorial(2 * j + 1)))
    return total


def taylor_cos_h_dx(field: SpectralField, h: float, n_terms: int) -> SpectralField:
    """Truncated operator series for cos(h d/dx); companion oracle to
    :func:`taylor_sin_h_dx`, summing ``(-1)^j (h d/dx)^(2j) / (2j)!``."""
    total = field  # j = 0 term
    term = field
    for j in range(1, n_terms):
        term = (h * h) * derivative(term, 2)
        total = total + (term * ((-1.0) ** j / math.factorial(2 * j)))
    return total
