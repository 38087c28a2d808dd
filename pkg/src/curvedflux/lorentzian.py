"""Conservation-law solver on a 1+1 spacetime presented by a space-like
foliation: metric -N(t,x)^2 dt^2 + g_xx(t,x) dx^2, periodic in x.

There is no distinguished conservative variable in the covariant equation
div f(u) = 0, so the scheme advances the slice-conserved density

    q_i = N*sqrt(g_xx) * f^t(u_i)

by spatial differences of the edge flux N*sqrt(g_xx)*f^x, then recovers u on
the new slice by inverting u -> f^t(u), which is strictly monotone for a
future-oriented time-like flux.  Slice functionals (entropy trace norms,
L1 distances of f^t) use the induced measure sqrt(g_xx) dx and the normal
component N * F^t.

Harnesses assert only monotonicity in time of those functionals, never time
continuity.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .errors import CFLError, MeshError, UnphysicalStateError


@dataclass(frozen=True)
class Foliation1p1:
    """Admissible foliation sampled on demand: lapse_fn/sqrt_g_fn map
    (t, x-array) to per-cell positive arrays."""

    n_cells: int
    period: float
    lapse_fn: callable
    sqrt_g_fn: callable

    @property
    def dx(self):
        return self.period / self.n_cells

    @property
    def cell_centers(self):
        return (np.arange(self.n_cells) + 0.5) * self.dx

    def lapse(self, t):
        N = np.broadcast_to(np.asarray(self.lapse_fn(t, self.cell_centers), dtype=float),
                            (self.n_cells,)).copy()
        if not np.all(N > 0):
            raise MeshError(f"lapse not positive at t={t:g}")
        return N

    def spatial_sqrt_g(self, t):
        s = np.broadcast_to(np.asarray(self.sqrt_g_fn(t, self.cell_centers), dtype=float),
                            (self.n_cells,)).copy()
        if not np.all(s > 0):
            raise MeshError(f"spatial metric not positive at t={t:g}")
        return s

    def volume_density(self, t):
        """Spacetime measure per coordinate cell, N*sqrt(g_xx)."""
        return self.lapse(t) * self.spatial_sqrt_g(t)


@dataclass(frozen=True)
class TimelikeFlux:
    """Flux with foliation-adapted components (f^t, f^x).

    ``eval(t, x, u) -> (ft, fx)`` and ``deriv(t, x, u) -> (dft, dfx)`` must
    broadcast over array arguments.  ``invert(t, x, v)``, when provided, is
    the exact inverse of u -> f^t(t, x, u); otherwise a bracketed root find
    on ``u_range`` is used.
    """

    eval: callable
    deriv: callable
    u_range: tuple
    invert: callable = None
    speed_stationary_u: tuple = ()


@dataclass(frozen=True)
class TimelikeReport:
    worst: float
    future_oriented: bool
    t_samples: np.ndarray
    u_samples: np.ndarray

    @property
    def is_timelike(self):
        return self.worst < 0.0 and self.future_oriented


def check_timelike(flux, fol, t_samples, u_samples):
    """Max over samples of g(d_u f, d_u f) = -N^2 (d_u f^t)^2 + g_xx (d_u f^x)^2.

    Strictly negative everywhere means the flux is time-like; the report also
    notes whether d_u f^t stayed positive (future orientation).
    """
    x = fol.cell_centers
    worst = -np.inf
    oriented = True
    for t in np.atleast_1d(t_samples):
        N2 = fol.lapse(t) ** 2
        gxx = fol.spatial_sqrt_g(t) ** 2
        for u in np.atleast_1d(u_samples):
            dft, dfx = flux.deriv(t, x, float(u))
            oriented = oriented and bool(np.all(np.asarray(dft) > 0))
            g = -N2 * np.asarray(dft) ** 2 + gxx * np.asarray(dfx) ** 2
            worst = max(worst, float(np.max(g)))
    return TimelikeReport(worst=worst, future_oriented=oriented,
                          t_samples=np.atleast_1d(t_samples),
                          u_samples=np.atleast_1d(u_samples))


@dataclass(frozen=True)
class LorentzianConfig:
    cfl: float = 0.45
    t_end: float = 0.0
    record_every: int = 1
    dt: float = None

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")


@dataclass
class LorentzianRun:
    t_grid: list
    states: list           # per recorded slice, u values
    lapse: list            # realized N per recorded slice
    spatial_sqrt_g: list   # realized sqrt(g_xx) per recorded slice
    fol: object
    flux: object


def _edge_speed(flux, fol, t, mu, u_lo, u_hi):
    """Per-edge bound on |d(edge f^x-flux)/d(edge f^t-density)| = coordinate
    characteristic speed, maximized over the state interval."""
    x = fol.cell_centers
    cands = [u_lo, u_hi] + [np.clip(s, u_lo, u_hi) for s in flux.speed_stationary_u]
    best = None
    for s in cands:
        dftL, dfxL = flux.deriv(t, np.roll(x, 1), s)
        dftR, dfxR = flux.deriv(t, x, s)
        dpsi = 0.5 * (np.roll(mu, 1) * dfxL + mu * dfxR)
        dv = 0.5 * (np.roll(mu, 1) * dftL + mu * dftR)
        a = np.abs(dpsi / dv)
        best = a if best is None else np.maximum(best, a)
    return best


def admissible_dt(flux, fol, t, u, cfl):
    mu = fol.volume_density(t)
    lo, hi = float(np.min(u)), float(np.max(u))
    a = _edge_speed(flux, fol, t, mu, lo, hi)
    denom = a + np.roll(a, -1)
    with np.errstate(divide="ignore"):
        dts = fol.dx / np.where(denom > 0, denom, np.inf)
    return cfl * float(np.min(dts))


def _invert_ft(flux, fol, t, q_over_mu):
    x = fol.cell_centers
    if flux.invert is not None:
        return np.asarray(flux.invert(t, x, q_over_mu), dtype=float)
    lo, hi = flux.u_range
    ft_lo, _ = flux.eval(t, x, lo)
    ft_hi, _ = flux.eval(t, x, hi)
    out = np.empty_like(q_over_mu)
    for i, v in enumerate(q_over_mu):
        if not (ft_lo[i] <= v <= ft_hi[i]):
            raise UnphysicalStateError(
                f"conserved density {v:g} outside range of f^t at cell {i}: "
                f"[{ft_lo[i]:g}, {ft_hi[i]:g}] (loss of invariant domain)"
            )
        xi = x[i]
        out[i] = brentq(
            lambda s: flux.eval(t, xi, s)[0] - v, lo, hi,
            xtol=1e-13, rtol=8.881784197001252e-16, maxiter=200,
        )
    return out


def step(u, flux, fol, t, dt):
    """Advance the slice data from t to t + dt; returns the new slice values."""
    x = fol.cell_centers
    mu = fol.volume_density(t)
    ft, _ = flux.eval(t, x, u)
    q = mu * ft

    uL, uR = np.roll(u, 1), u

    def edge_pair(state):
        ftl, fxl = flux.eval(t, np.roll(x, 1), state)
        ftr, fxr = flux.eval(t, x, state)
        psi = 0.5 * (np.roll(mu, 1) * fxl + mu * fxr)
        v = 0.5 * (np.roll(mu, 1) * ftl + mu * ftr)
        return psi, v

    psi_L, v_L = edge_pair(uL)
    psi_R, v_R = edge_pair(uR)
    a = _edge_speed(flux, fol, t, mu, np.minimum(uL, uR), np.maximum(uL, uR))
    G = 0.5 * (psi_L + psi_R) - 0.5 * a * (v_R - v_L)
    q_new = q - (dt / fol.dx) * (np.roll(G, -1) - G)
    return _invert_ft(flux, fol, t + dt, q_new / fol.volume_density(t + dt))


def evolve(u0, flux, fol, cfg):
    """March the slice data to cfg.t_end; returns a LorentzianRun with every
    record_every-th slice retained (slice 0 and the final slice always)."""
    u = np.asarray(u0, dtype=float).copy()
    if u.shape != (fol.n_cells,):
        raise MeshError(f"initial data shape {u.shape} != ({fol.n_cells},)")
    t = 0.0
    run = LorentzianRun(t_grid=[0.0], states=[u.copy()],
                        lapse=[fol.lapse(0.0)], spatial_sqrt_g=[fol.spatial_sqrt_g(0.0)],
                        fol=fol, flux=flux)
    n = 0
    while t < cfg.t_end - 1e-14:
        dt_adm = admissible_dt(flux, fol, t, u, cfg.cfl)
        if cfg.dt is not None:
            if cfg.dt > dt_adm * (1 + 1e-12):
                raise CFLError(cfg.dt, dt_adm)
            dt_adm = cfg.dt
        dt = min(dt_adm, cfg.t_end - t)
        u = step(u, flux, fol, t, dt)
        t = t + dt
        n += 1
        if n % cfg.record_every == 0 or t >= cfg.t_end - 1e-14:
            run.t_grid.append(t)
            run.states.append(u.copy())
            run.lapse.append(fol.lapse(t))
            run.spatial_sqrt_g.append(fol.spatial_sqrt_g(t))
    return run


def evolve_pair(u0, v0, flux, fol, cfg):
    """Evolve two initial data with a shared per-step time step (the smaller
    of the two admissible ones); returns (run_u, run_v) on a common t_grid.

    This is the harness behind the L1 flux-distance monotonicity statement,
    which compares two solutions on the same foliation slices.
    """
    u = np.asarray(u0, dtype=float).copy()
    v = np.asarray(v0, dtype=float).copy()
    run_u = LorentzianRun(t_grid=[0.0], states=[u.copy()], lapse=[fol.lapse(0.0)],
                          spatial_sqrt_g=[fol.spatial_sqrt_g(0.0)], fol=fol, flux=flux)
    run_v = LorentzianRun(t_grid=[0.0], states=[v.copy()], lapse=[fol.lapse(0.0)],
                          spatial_sqrt_g=[fol.spatial_sqrt_g(0.0)], fol=fol, flux=flux)
    t, n = 0.0, 0
    while t < cfg.t_end - 1e-14:
        dt = min(admissible_dt(flux, fol, t, u, cfg.cfl),
                 admissible_dt(flux, fol, t, v, cfg.cfl),
                 cfg.t_end - t)
        u = step(u, flux, fol, t, dt)
        v = step(v, flux, fol, t, dt)
        t += dt
        n += 1
        if n % cfg.record_every == 0 or t >= cfg.t_end - 1e-14:
            for run, w in ((run_u, u), (run_v, v)):
                run.t_grid.append(t)
                run.states.append(w.copy())
                run.lapse.append(fol.lapse(t))
                run.spatial_sqrt_g.append(fol.spatial_sqrt_g(t))
    return run_u, run_v


# --- slice functionals ------------------------------------------------------

@dataclass(frozen=True)
class SliceEntropy:
    """Convex entropy for trace norms; ``trace_flux(t, x, u)`` returns the
    coordinate component F^t(u) when a closed form exists, else the integral
    of dU * d_u f^t is taken by Gauss quadrature."""

    name: str
    U: callable
    dU: callable = None
    trace_flux: callable = None


def kruzkov_slice_entropy(flux, k):
    k = float(k)

    def trace_flux(t, x, u):
        ft_u, _ = flux.eval(t, x, u)
        ft_k, _ = flux.eval(t, x, np.full_like(np.asarray(u, dtype=float), k))
        return np.sign(np.asarray(u) - k) * (ft_u - ft_k)

    return SliceEntropy(name=f"kruzkov_{k:g}",
                        U=lambda u: np.abs(u - k),
                        trace_flux=trace_flux)


def quadratic_slice_entropy():
    return SliceEntropy(name="quadratic",
                        U=lambda u: np.asarray(u, dtype=float) ** 2,
                        dU=lambda u: 2.0 * np.asarray(u, dtype=float))


_GAUSS_NODES, _GAUSS_WEIGHTS = leggauss(32)


def _trace_flux_values(entropy, flux, t, x, u):
    if entropy.trace_flux is not None:
        return np.asarray(entropy.trace_flux(t, x, u), dtype=float)
    # F^t(u_i) = int_0^{u_i} dU(s) d_u f^t(t, x_i, s) ds, one Gauss rule per cell
    u = np.asarray(u, dtype=float)
    S = 0.5 * u[:, None] * (_GAUSS_NODES[None, :] + 1.0)
    W = 0.5 * u[:, None] * _GAUSS_WEIGHTS[None, :]
    dft, _ = flux.deriv(t, x[:, None], S)
    return np.sum(W * entropy.dU(S) * dft, axis=1)


def trace_entropy_norm(u, flux, fol, t, entropy):
    """L1 norm on the slice of the normal component N*F^t, measure sqrt(g_xx)dx."""
    x = fol.cell_centers
    Ft = _trace_flux_values(entropy, flux, t, x, np.asarray(u, dtype=float))
    return float(np.sum(fol.lapse(t) * np.abs(Ft) * fol.spatial_sqrt_g(t) * fol.dx))


def l1_flux_distance(u, v, flux, fol, t):
    """Slice integral of |f^t(u) - f^t(v)| against the normal/induced measure."""
    x = fol.cell_centers
    ft_u, _ = flux.eval(t, x, np.asarray(u, dtype=float))
    ft_v, _ = flux.eval(t, x, np.asarray(v, dtype=float))
    return float(np.sum(fol.volume_density(t) * np.abs(ft_u - ft_v) * fol.dx))


# --- built-in families ------------------------------------------------------

FOLIATION_FAMILIES = ("minkowski", "wavy_lapse", "expanding")
LORENTZIAN_FLUX_FAMILIES = ("transport", "burgers_like")


def make_foliation(name, n_cells, period, amplitude=0.3, rate=0.25):
    if name == "minkowski":
        return Foliation1p1(n_cells, period, lambda t, x: np.ones_like(x),
                            lambda t, x: np.ones_like(x))
    if name == "wavy_lapse":
        L = period

        def lapse(t, x):
            return 1.0 + amplitude * np.sin(2.0 * np.pi * x / L) * np.cos(t)

        return Foliation1p1(n_cells, period, lapse, lambda t, x: np.ones_like(x))
    if name == "expanding":
        def sqrt_g(t, x):
            return (1.0 + rate * t) ** 2 * np.ones_like(x)

        return Foliation1p1(n_cells, period, lambda t, x: np.ones_like(x), sqrt_g)
    raise ValueError(f"unknown foliation family {name!r}; known: {FOLIATION_FAMILIES}")


def make_timelike_flux(name, fol, u_range, transport_speed=0.5):
    """Geometry-compatible time-like fluxes: f^t = u/m, f^x = chi(u)/m with
    m = N*sqrt(g_xx), so that m*f^t and m*f^x are position-independent and the
    discrete divergence of f(., u) vanishes identically."""

    def mu(t, x):
        return np.asarray(fol.lapse_fn(t, x), dtype=float) * np.asarray(fol.sqrt_g_fn(t, x), dtype=float)

    if name == "transport":
        c = float(transport_speed)
        chi = lambda u: c * np.asarray(u, dtype=float)
        dchi = lambda u: c * np.ones_like(np.asarray(u, dtype=float))
        stationary = ()
    elif name == "burgers_like":
        chi = lambda u: 0.5 * np.asarray(u, dtype=float) ** 2
        dchi = lambda u: np.asarray(u, dtype=float)
        stationary = ()
    else:
        raise ValueError(
            f"unknown Lorentzian flux family {name!r}; known: {LORENTZIAN_FLUX_FAMILIES}"
        )

    def ev(t, x, u):
        m = mu(t, x)
        u = np.asarray(u, dtype=float)
        return u / m, chi(u) / m

    def dv(t, x, u):
        m = mu(t, x)
        u = np.asarray(u, dtype=float)
        return np.ones_like(u) / m, dchi(u) / m

    def invert(t, x, v):
        # f^t = u/m is linear in u
        return np.asarray(v, dtype=float) * mu(t, x)

    return TimelikeFlux(eval=ev, deriv=dv, u_range=tuple(u_range),
                        invert=invert, speed_stationary_u=stationary)
