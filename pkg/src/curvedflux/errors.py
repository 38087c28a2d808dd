"""Exception types shared across the solver modules."""


class MeshError(ValueError):
    """Invalid mesh construction or a field/mesh mismatch."""


class CFLError(RuntimeError):
    """Requested time step violates the stability bound.

    Carries the largest admissible step so callers can retry.
    """

    def __init__(self, dt, dt_admissible):
        self.dt = dt
        self.dt_admissible = dt_admissible
        super().__init__(
            f"time step {dt:g} exceeds admissible {dt_admissible:g}"
        )


class UnphysicalStateError(RuntimeError):
    """A state left the invariant domain (causality loss, vacuum, failed inversion)."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class GeometryDegeneracyError(RuntimeError):
    """Reconstructed metric lost positivity (beta <= 0)."""


class ConfigError(ValueError):
    """Run configuration is missing, malformed, or fails validation."""
