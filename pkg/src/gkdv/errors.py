"""Exception types shared across the package."""


class GkdvError(Exception):
    """Base class for all package-specific errors."""


class BandLimitError(GkdvError):
    """Raised when a grid's highest mode would overflow a hyperbolic multiplier."""

    def __init__(self, kh: float, threshold: float, mode_index: int, k: float):
        self.kh = kh
        self.threshold = threshold
        self.mode_index = mode_index
        self.k = k
        super().__init__(
            f"band limit exceeded: mode j={mode_index} has k*h = {kh:.6g} "
            f"> {threshold:.6g} (k = {k:.6g}); refusing to amplify round-off"
        )


class ResonanceError(GkdvError):
    """Raised when B*h hits a resonant value (multiple of pi, or a vanishing
    recursion denominator at some order k)."""

    def __init__(self, message: str, order: int | None = None):
        self.order = order
        super().__init__(message)


class NoSmoothMatchingError(GkdvError):
    """Raised when the derivative-continuity condition has no root in the
    search interval, so no smooth solitary profile exists for these inputs."""


class SeriesEvaluationError(GkdvError):
    """Raised when accelerated series evaluation fails to converge."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class StabilityError(GkdvError):
    """Raised when a requested time step violates the explicit-stage stability
    heuristic."""


class BlowUpError(GkdvError):
    """Raised when time evolution produces non-finite values."""

    def __init__(self, step: int, t: float):
        self.step = step
        self.t = t
        super().__init__(f"solution blew up (non-finite values) at step {step}, t = {t:.6g}")


class ConfigError(GkdvError):
    """Raised on invalid or unknown CLI configuration input."""
