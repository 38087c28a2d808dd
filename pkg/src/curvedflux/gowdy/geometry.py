"""Geometry sector of the plane-symmetric coupled system: three wave
equations with characteristic speed 1,

    a_tt - a_xx = b_t^2 - b_x^2 - c_t^2 + c_x^2 + (kappa/2) e^{2a} (-tau + Sigma - 2p)
    b_tt - b_xx = -2 b_t^2 + 2 b_x^2     + (kappa/2) e^{2a} (tau - Sigma)
    c_tt - c_xx = -2 b_t c_t + 2 b_x c_x

advanced as first-order systems (phi, phi_t, phi_x) by a one-step
Lax-Wendroff update with the source frozen over the step (second order on
the homogeneous wave part, first order in the coupling).  The state carries
(b_t, b_x); the area density beta = e^{2b} and its derivative fields are
recovered algebraically, which avoids dividing by beta near degeneracy.

Constraint residuals and the quadrature reconstruction of (a, alpha, b, beta)
from the derivative fields live here as well.
"""

from dataclasses import dataclass, replace

import numpy as np

from ..errors import CFLError, GeometryDegeneracyError, UnphysicalStateError
from .fluid import pressure, primitive_to_conserved


def _d0(f, dx):
    return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * dx)


def _d2(f, dx):
    return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / (dx * dx)


@dataclass(frozen=True)
class GeometryState:
    """Metric exponents with their first-derivative fields on a periodic grid."""

    dx: float
    a: np.ndarray
    at: np.ndarray
    ax: np.ndarray
    b: np.ndarray
    bt: np.ndarray
    bx: np.ndarray
    c: np.ndarray
    ct: np.ndarray
    cx: np.ndarray

    def __post_init__(self):
        for name in ("a", "at", "ax", "b", "bt", "bx", "c", "ct", "cx"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(arr)):
                raise UnphysicalStateError(f"geometry field {name} is not finite")
            object.__setattr__(self, name, arr)

    @property
    def alpha(self):
        return np.exp(2.0 * self.a)

    @property
    def beta(self):
        return np.exp(2.0 * self.b)

    @property
    def w(self):
        """Derivative vector (a_t, a_x, beta_t, beta_x, c_t, c_x), beta = e^{2b}."""
        beta = self.beta
        return (self.at, self.ax, 2.0 * self.bt * beta, 2.0 * self.bx * beta,
                self.ct, self.cx)

    @staticmethod
    def zero(n_cells, dx):
        z = lambda: np.zeros(n_cells)
        return GeometryState(dx=dx, a=z(), at=z(), ax=z(), b=z(), bt=z(), bx=z(),
                             c=z(), ct=z(), cx=z())


def geometry_rhs(geo, tau, Sigma, p, kappa):
    """Right-hand sides (R_a, R_b, R_c) of the three wave equations."""
    e2a = geo.alpha
    Ra = (geo.bt ** 2 - geo.bx ** 2 - geo.ct ** 2 + geo.cx ** 2
          + 0.5 * kappa * e2a * (-tau + Sigma - 2.0 * p))
    Rb = -2.0 * geo.bt ** 2 + 2.0 * geo.bx ** 2 + 0.5 * kappa * e2a * (tau - Sigma)
    Rc = -2.0 * geo.bt * geo.ct + 2.0 * geo.bx * geo.cx
    return Ra, Rb, Rc


def _lw_triple(phi, p, q, R, dt, dx):
    # phi_t = p, p_t = q_x + R, q_t = p_x; R frozen over the step
    p_new = p + dt * (_d0(q, dx) + R) + 0.5 * dt * dt * _d2(p, dx)
    q_new = q + dt * _d0(p, dx) + 0.5 * dt * dt * (_d2(q, dx) + _d0(R, dx))
    phi_new = phi + dt * p + 0.5 * dt * dt * (_d0(q, dx) + R)
    return phi_new, p_new, q_new


def geometry_step(geo, mu, v, dt, c_s, kappa, forcing=None):
    """One split step of the geometry sector with the fluid frozen.

    ``forcing``, when given, is a triple of per-cell arrays added to the
    right-hand sides; it exists for manufactured-solution verification.
    """
    if dt > geo.dx * (1.0 + 1e-12):
        raise CFLError(dt, geo.dx)
    tau, _, Sigma = primitive_to_conserved(mu, v, c_s)
    Ra, Rb, Rc = geometry_rhs(geo, tau, Sigma, pressure(mu, c_s), kappa)
    if forcing is not None:
        Fa, Fb, Fc = forcing
        Ra, Rb, Rc = Ra + Fa, Rb + Fb, Rc + Fc
    a, at, ax = _lw_triple(geo.a, geo.at, geo.ax, Ra, dt, geo.dx)
    b, bt, bx = _lw_triple(geo.b, geo.bt, geo.bx, Rb, dt, geo.dx)
    c, ct, cx = _lw_triple(geo.c, geo.ct, geo.cx, Rc, dt, geo.dx)
    return replace(geo, a=a, at=at, ax=ax, b=b, bt=bt, bx=bx, c=c, ct=ct, cx=cx)


def reconstruct_metric(ax, beta_x, a0, beta0, dx, on_degenerate="raise"):
    """(a, alpha, b, beta) at cell centers from the derivative fields by
    cumulative trapezoid quadrature anchored at x=0.

    The anchor sits on the left edge of cell 0; the first half cell uses the
    midpoint value, every following interval the trapezoid rule, both O(dx^2).
    """
    ax = np.asarray(ax, dtype=float)
    beta_x = np.asarray(beta_x, dtype=float)

    def integrate(deriv, anchor):
        out = np.empty_like(deriv)
        out[0] = anchor + 0.5 * dx * deriv[0]
        if deriv.size > 1:
            increments = 0.5 * dx * (deriv[:-1] + deriv[1:])
            out[1:] = out[0] + np.cumsum(increments)
        return out

    a = integrate(ax, a0)
    beta = integrate(beta_x, beta0)
    if np.any(beta <= 0.0):
        if on_degenerate == "raise":
            i = int(np.argmin(beta))
            raise GeometryDegeneracyError(
                f"reconstructed beta <= 0 (min {beta[i]:g} at cell {i})"
            )
        b = np.where(beta > 0.0, 0.5 * np.log(np.maximum(beta, 1e-300)), -np.inf)
    else:
        b = 0.5 * np.log(beta)
    return a, np.exp(2.0 * a), b, beta


def constraint_residual(geo, mu, v, c_s, kappa):
    """Residuals (r1, r2) of the two constraint equations; the second
    derivatives b_xx and b_tx come from centered differences of the carried
    first-derivative fields."""
    tau, S, _ = primitive_to_conserved(mu, v, c_s)
    e2a = geo.alpha
    bxx = _d0(geo.bx, geo.dx)
    btx = _d0(geo.bt, geo.dx)
    r1 = (2.0 * geo.at * geo.bt + 2.0 * geo.ax * geo.bx + geo.bt ** 2
          - 2.0 * bxx - 3.0 * geo.bx ** 2 - geo.ct ** 2 - geo.cx ** 2
          - kappa * e2a * tau)
    r2 = (-2.0 * geo.at * geo.bx - 2.0 * geo.ax * geo.bt + 2.0 * btx
          + 2.0 * geo.bt * geo.bx + 2.0 * geo.ct * geo.cx
          - kappa * e2a * S)
    return r1, r2
