"""Physical parameters of the fluid layer."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalParams:
    """Layer depth, force field, density and surface-pressure coefficient.

    Parameters
    ----------
    h : float
        Undisturbed layer depth [length], > 0.
    g : float
        Uniform force-field constant [length/time^2], >= 0.
    rho : float
        Fluid density [mass/length^3], > 0.
    sigma : float
        Surface-pressure coefficient [force/length], >= 0.

    Notes
    -----
    The long-wave speed ``c0 = sqrt(g*h)`` is recomputed on every access so it
    can never disagree with ``g`` and ``h``.
    """

    h: float
    g: float = 9.81
    rho: float = 1000.0
    sigma: float = 0.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"depth h must be positive, got {self.h}")
        if not self.rho > 0:
            raise ValueError(f"density rho must be positive, got {self.rho}")
        if self.g < 0:
            raise ValueError(f"force-field constant g must be >= 0, got {self.g}")
        if self.sigma < 0:
            raise ValueError(f"surface-pressure coefficient sigma must be >= 0, got {self.sigma}")
        if self.g == 0 and self.sigma == 0:
            raise ValueError("g and sigma cannot both be zero (no restoring force)")

    @property
    def c0(self) -> float:
        """Long-wave sound speed sqrt(g*h)."""
        return math.sqrt(self.g * self.h)
