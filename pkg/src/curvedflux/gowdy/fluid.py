"""Relativistic isothermal fluid algebra on a plane-symmetric background.

Primitive variables are the energy density mu > 0 and the scalar velocity
|v| < 1 (units with the light speed 1); the equation of state is p = c_s^2 mu
with constant sound speed 0 < c_s < 1.  The conserved fields are

    tau   = mu (1 + c_s^2 v^2) / (1 - v^2)
    S     = mu (1 + c_s^2) v   / (1 - v^2)
    Sigma = mu (v^2 + c_s^2)   / (1 - v^2)

The balance-law form of the Euler equations is

    tau_t + S_x = T1,   S_t + Sigma_x = T2,

where the sources collect the metric first derivatives of the diagonal
plane-symmetric metric  e^{2a}(-dt^2+dx^2) + e^{2b}(e^{2c}dy^2+e^{-2c}dz^2):

    T1 = -a_t (tau + Sigma) - 2 a_x S - 2 b_t (tau + p) - 2 b_x S
    T2 = -a_x (tau + Sigma) - 2 a_t S - 2 b_t S         - 2 b_x (Sigma - p)

These expressions are obtained by expanding the vanishing divergence of the
stress tensor in that metric; docs/gowdy_sources.md records the derivation
and the symbolic check lives in the test suite.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import UnphysicalStateError


@dataclass(frozen=True)
class FluidState:
    """Primitive fields; arrays or scalars, validated on construction."""

    mu: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(v)):
            raise UnphysicalStateError("non-finite fluid state")
        if not np.all(mu > 0):
            raise UnphysicalStateError(f"energy density must be positive (min {np.min(mu):g})")
        if not np.all(np.abs(v) < 1):
            raise UnphysicalStateError(f"|v| must be < 1 (max {np.max(np.abs(v)):g})")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class ConservedFluid:
    tau: np.ndarray
    S: np.ndarray
    Sigma: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        S = np.asarray(self.S, dtype=float)
        Sigma = np.asarray(self.Sigma, dtype=float)
        if not np.all(tau > 0) or not np.all(tau * tau - S * S > 0):
            raise UnphysicalStateError("conserved state outside the physical region")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "Sigma", Sigma)


def pressure(mu, c_s):
    return c_s * c_s * np.asarray(mu, dtype=float)


def primitive_to_conserved(mu, v, c_s):
    """(tau, S, Sigma) from (mu, v); raises on |v| >= 1."""
    mu = np.asarray(mu, dtype=float)
    v = np.asarray(v, dtype=float)
    if not np.all(np.abs(v) < 1):
        raise UnphysicalStateError(f"|v| must be < 1 (max {np.max(np.abs(v)):g})")
    cs2 = c_s * c_s
    q = 1.0 - v * v
    tau = mu * (1.0 + cs2 * v * v) / q
    S = mu * (1.0 + cs2) * v / q
    Sigma = mu * (v * v + cs2) / q
    return tau, S, Sigma


def conserved_to_primitive(tau, S, c_s):
    """Unique physical (mu, v) with mu > 0, |v| < 1 reproducing (tau, S).

    Eliminating mu gives the quadratic  S c_s^2 v^2 - tau (1+c_s^2) v + S = 0;
    the physical root (the one inside (-1, 1)) in rationalized form is

        v = 2 S / ( tau (1+c_s^2) + sqrt( tau^2 (1+c_s^2)^2 - 4 c_s^2 S^2 ) )

    which is exact for S = 0 and stable for weak flows.  The physical region
    is tau > 0, |S| < tau.
    """
    tau = np.asarray(tau, dtype=float)
    S = np.asarray(S, dtype=float)
    if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(S))):
        raise UnphysicalStateError("non-finite conserved state")
    if not np.all(tau > 0):
        raise UnphysicalStateError(f"tau must be positive (min {np.min(tau):g})")
    if not np.all(np.abs(S) < tau):
        worst = float(np.max(np.abs(S) - tau))
        raise UnphysicalStateError(
            f"|S| < tau violated by {worst:g}: state outside the physical region"
        )
    op = 1.0 + c_s * c_s
    disc = (tau * op) ** 2 - 4.0 * (c_s * S) ** 2
    v = 2.0 * S / (tau * op + np.sqrt(disc))
    mu = tau * (1.0 - v * v) / (1.0 + (c_s * v) ** 2)
    return mu, v


def wave_speeds(v, c_s):
    """Characteristic speeds (lambda-, lambda+) = (v -+ c_s)/(1 -+ v c_s)."""
    v = np.asarray(v, dtype=float)
    return (v - c_s) / (1.0 - v * c_s), (v + c_s) / (1.0 + v * c_s)


def fluid_sources(tau, S, Sigma, p, a_t, a_x, b_t, b_x):
    """Euler source terms (T1, T2) for the plane-symmetric diagonal metric."""
    T1 = -a_t * (tau + Sigma) - 2.0 * a_x * S - 2.0 * b_t * (tau + p) - 2.0 * b_x * S
    T2 = -a_x * (tau + Sigma) - 2.0 * a_t * S - 2.0 * b_t * S - 2.0 * b_x * (Sigma - p)
    return T1, T2


def fluid_source_step(mu, v, geo, dt, c_s):
    """Advance (tau, S) by dt*(T1, T2) with an explicit midpoint rule.

    Geometry derivative fields are frozen over the step (operator splitting).
    When both sources vanish identically the state is returned unchanged, so
    the flat-background limit is bit-identical to a source-free run.
    """
    tau, S, Sigma = primitive_to_conserved(mu, v, c_s)
    p = pressure(mu, c_s)
    T1, T2 = fluid_sources(tau, S, Sigma, p, geo.at, geo.ax, geo.bt, geo.bx)
    if not np.any(T1) and not np.any(T2):
        return mu, v
    mu_h, v_h = conserved_to_primitive(tau + 0.5 * dt * T1, S + 0.5 * dt * T2, c_s)
    tau_h, S_h, Sigma_h = primitive_to_conserved(mu_h, v_h, c_s)
    T1_h, T2_h = fluid_sources(tau_h, S_h, Sigma_h, pressure(mu_h, c_s),
                               geo.at, geo.ax, geo.bt, geo.bx)
    return conserved_to_primitive(tau + dt * T1_h, S + dt * T2_h, c_s)
