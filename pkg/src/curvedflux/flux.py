"""Parametrized flux fields on a mesh, compatibility checks, and entropy pairs.

Geometry-compatible fluxes are *constructed*, not verified post hoc: in 1-D
from a scalar potential (sqrt_g * f is then independent of position), in 2-D
from a corner-sampled stream function (edge-integrated fluxes telescope
around every cell).  Both make the discrete divergence vanish to roundoff at
every fixed state value, so constants are exact solutions of the scheme.

A flux field exposes two views:

* ``eval/deriv``: contravariant components at cell centers, used for
  reporting and growth-bound checks;
* ``edge_flux``/``edge_flux_deriv``: the edge-integrated physical flux the
  finite-volume scheme consumes.  These accept a scalar state or one state
  per edge, which is what a numerical flux needs.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import MeshError, QuadratureError
from .mesh import discrete_divergence


@dataclass(frozen=True)
class FluxField:
    mesh: object
    eval: callable
    deriv: callable
    edge_flux: callable
    edge_flux_deriv: callable
    u_range: tuple
    growth_bound: tuple
    # States where the edge flux / its u-derivative can have interior extrema.
    # Declaring them makes interval extrema exact for polynomial profiles.
    flux_stationary_u: tuple = ()
    speed_stationary_u: tuple = ()
    eval_at: callable = None
    deriv_at: callable = None

    def metric_norm(self, u):
        """Pointwise |f|_g over cells at state u."""
        f = self.eval(u)
        if self.mesh.ndim == 1:
            return self.mesh.sqrt_g * np.abs(f)
        fx, fy = f
        g = self.mesh.g_components
        q = (
            g[..., 0, 0] * fx * fx
            + 2.0 * g[..., 0, 1] * fx * fy
            + g[..., 1, 1] * fy * fy
        )
        return np.sqrt(np.maximum(q, 0.0))

    def _candidates(self, u_lo, u_hi, stationary):
        cands = [u_lo, u_hi]
        for s in stationary:
            cands.append(np.clip(s, u_lo, u_hi))
        return cands

    def edge_speed_bound(self, u_lo, u_hi):
        """Per-edge max of |d(edge flux)/du| over [u_lo, u_hi] (arrays or scalars)."""
        best = None
        for s in self._candidates(u_lo, u_hi, self.speed_stationary_u):
            d = self.edge_flux_deriv(s)
            if self.mesh.ndim == 1:
                a = np.abs(d)
                best = a if best is None else np.maximum(best, a)
            else:
                ax, ay = np.abs(d[0]), np.abs(d[1])
                best = (ax, ay) if best is None else (np.maximum(best[0], ax), np.maximum(best[1], ay))
        return best

    def edge_flux_extrema(self, u_lo, u_hi):
        """Per-edge (min, max) of the edge flux over [u_lo, u_hi]; exact when the
        interior stationary states are declared."""
        lo = hi = None
        for s in self._candidates(u_lo, u_hi, self.flux_stationary_u):
            v = self.edge_flux(s)
            if lo is None:
                lo, hi = v, v
            else:
                lo, hi = np.minimum(lo, v), np.maximum(hi, v)
        return lo, hi


@dataclass(frozen=True)
class EntropyPair:
    """Convex entropy with its flux; ``edge_flux_fn`` mirrors FluxField.edge_flux."""

    u_fn: callable
    flux_fn: callable
    edge_flux_fn: callable = None


def _numeric_du(fn):
    def d(u):
        h = 1e-6 * np.maximum(1.0, np.abs(u))
        return (fn(u + h) - fn(u - h)) / (2.0 * h)

    return d


def _growth_constant(flux, n_samples=41):
    lo, hi = flux.u_range
    c = 0.0
    for u in np.linspace(lo, hi, n_samples):
        c = max(c, float(np.max(flux.metric_norm(u)) / (1.0 + abs(u))))
    return c


def flux_from_potential_1d(mesh, phi, dphi=None, u_range=(-1.0, 1.0),
                           flux_stationary_u=(), speed_stationary_u=()):
    """1-D flux f(x, u) = phi(u)/sqrt_g(x).

    sqrt_g * f is independent of x, so the edge flux is phi(u) at every edge
    and the discrete divergence at fixed u telescopes to zero exactly.
    """
    if mesh.ndim != 1:
        raise MeshError("potential flux requires a 1-D mesh")
    dphi = dphi if dphi is not None else _numeric_du(phi)
    n = mesh.n_cells
    inv_sg = 1.0 / mesh.sqrt_g

    def as_edges(u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(u, (n,)) if u.ndim == 0 else u

    fl = FluxField(
        mesh=mesh,
        eval=lambda u: phi(np.asarray(u, dtype=float)) * inv_sg,
        deriv=lambda u: dphi(np.asarray(u, dtype=float)) * inv_sg,
        edge_flux=lambda u: phi(as_edges(u)) * np.ones(n),
        edge_flux_deriv=lambda u: dphi(as_edges(u)) * np.ones(n),
        u_range=tuple(u_range),
        growth_bound=(0.0, 0.0),
        flux_stationary_u=tuple(flux_stationary_u),
        speed_stationary_u=tuple(speed_stationary_u),
        eval_at=lambda i, u: phi(np.asarray(u, dtype=float)) * inv_sg[i],
        deriv_at=lambda i, u: dphi(np.asarray(u, dtype=float)) * inv_sg[i],
    )
    c = _growth_constant(fl)
    object.__setattr__(fl, "growth_bound", (c, c))
    return fl


def burgers_flux_1d(mesh, u_range=(-2.0, 2.0)):
    """Burgers flux from the quadratic potential u^2/2 (flat or variable metric)."""
    return flux_from_potential_1d(
        mesh,
        phi=lambda u: 0.5 * u * u,
        dphi=lambda u: u,
        u_range=u_range,
        flux_stationary_u=(0.0,),
        speed_stationary_u=(),
    )


def linear_flux_1d(mesh, speed=1.0, u_range=(-2.0, 2.0)):
    return flux_from_potential_1d(
        mesh,
        phi=lambda u: speed * u,
        dphi=lambda u: speed * np.ones_like(np.asarray(u, dtype=float)),
        u_range=u_range,
    )


def flux_from_stream_2d(mesh, psi, u_range=(-1.0, 1.0),
                        flux_stationary_u=(), speed_stationary_u=(), dpsi_du=None):
    """2-D flux f = (d_y psi, -d_x psi)/sqrt_g from a corner-sampled stream function.

    ``psi(x, y, u)`` must broadcast over corner-coordinate arrays.  Edge fluxes
    are corner differences of psi, so the divergence of every edge-flux
    assignment telescopes around each cell and vanishes identically.
    """
    if mesh.ndim != 2:
        raise MeshError("stream-function flux requires a 2-D mesh")
    Xc, Yc = mesh.corner_coords
    # corner coordinates of the other end of each edge (periodic wrap lands on
    # the same corner value, which is what keeps the construction mimetic)
    Xup, Yup = Xc, np.roll(Yc, -1, axis=1)
    Xrt, Yrt = np.roll(Xc, -1, axis=0), Yc

    def corner(u):
        v = np.asarray(psi(Xc, Yc, u), dtype=float)
        if v.shape != Xc.shape:
            raise MeshError(
                f"stream function must be corner-sampled: expected shape {Xc.shape}, got {v.shape}"
            )
        return v

    def edge_fx(u):
        return np.asarray(psi(Xup, Yup, u), dtype=float) - corner(u)

    def edge_fy(u):
        return -(np.asarray(psi(Xrt, Yrt, u), dtype=float) - corner(u))

    def edge_flux(u):
        return edge_fx(u), edge_fy(u)

    if dpsi_du is None:
        def edge_flux_deriv(u):
            u = np.asarray(u, dtype=float)
            h = 1e-6 * np.maximum(1.0, np.abs(u))
            fx1, fy1 = edge_flux(u + h)
            fx0, fy0 = edge_flux(u - h)
            return (fx1 - fx0) / (2.0 * h), (fy1 - fy0) / (2.0 * h)
    else:
        def edge_flux_deriv(u):
            dx = np.asarray(dpsi_du(Xup, Yup, u), dtype=float) - np.asarray(dpsi_du(Xc, Yc, u), dtype=float)
            dy = -(np.asarray(dpsi_du(Xrt, Yrt, u), dtype=float) - np.asarray(dpsi_du(Xc, Yc, u), dtype=float))
            return dx, dy

    inv_sg = 1.0 / mesh.sqrt_g
    dxl, dyl = mesh.dx, mesh.dy

    def cell_eval(u):
        v = corner(u)
        vx1 = np.roll(v, -1, axis=0)
        vy1 = np.roll(v, -1, axis=1)
        vxy = np.roll(vy1, -1, axis=0)
        fx = (vy1 + vxy - v - vx1) / (2.0 * dyl) * inv_sg
        fy = -(vx1 + vxy - v - vy1) / (2.0 * dxl) * inv_sg
        return fx, fy

    def cell_deriv(u):
        u = np.asarray(u, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(u))
        fx1, fy1 = cell_eval(u + h)
        fx0, fy0 = cell_eval(u - h)
        return (fx1 - fx0) / (2.0 * h), (fy1 - fy0) / (2.0 * h)

    fl = FluxField(
        mesh=mesh,
        eval=cell_eval,
        deriv=cell_deriv,
        edge_flux=edge_flux,
        edge_flux_deriv=edge_flux_deriv,
        u_range=tuple(u_range),
        growth_bound=(0.0, 0.0),
        flux_stationary_u=tuple(flux_stationary_u),
        speed_stationary_u=tuple(speed_stationary_u),
    )
    c = _growth_constant(fl)
    object.__setattr__(fl, "growth_bound", (c, c))
    return fl


def flux_from_components_1d(mesh, f_of_xu, df_of_xu, u_range=(-1.0, 1.0),
                            flux_stationary_u=(), speed_stationary_u=()):
    """Arbitrary (generally non-compatible) 1-D flux from f(x, u), e.g. b(x)*phi(u).

    Edge fluxes average sqrt_g*f over the two adjacent cells.
    """
    if mesh.ndim != 1:
        raise MeshError("component flux requires a 1-D mesh")
    xc = mesh.cell_centers
    sg = mesh.sqrt_g

    def edge_flux(u):
        # evaluate at each edge's own state on both neighbouring cells
        u = np.asarray(u, dtype=float)
        fL = np.roll(sg, 1) * f_of_xu(np.roll(xc, 1), u)
        fR = sg * f_of_xu(xc, u)
        return 0.5 * (fL + fR)

    def edge_flux_deriv(u):
        u = np.asarray(u, dtype=float)
        fL = np.roll(sg, 1) * df_of_xu(np.roll(xc, 1), u)
        fR = sg * df_of_xu(xc, u)
        return 0.5 * (fL + fR)

    fl = FluxField(
        mesh=mesh,
        eval=lambda u: f_of_xu(xc, np.asarray(u, dtype=float)),
        deriv=lambda u: df_of_xu(xc, np.asarray(u, dtype=float)),
        edge_flux=edge_flux,
        edge_flux_deriv=edge_flux_deriv,
        u_range=tuple(u_range),
        growth_bound=(0.0, 0.0),
        flux_stationary_u=tuple(flux_stationary_u),
        speed_stationary_u=tuple(speed_stationary_u),
        eval_at=lambda i, u: f_of_xu(xc[i], np.asarray(u, dtype=float)),
        deriv_at=lambda i, u: df_of_xu(xc[i], np.asarray(u, dtype=float)),
    )
    c = _growth_constant(fl)
    object.__setattr__(fl, "growth_bound", (c, c))
    return fl


@dataclass(frozen=True)
class CompatibilityReport:
    samples: np.ndarray
    max_divergence: np.ndarray

    @property
    def worst(self):
        return float(np.max(self.max_divergence))


def verify_geometry_compatible(mesh, flux, samples):
    """Max |discrete divergence| of f(., u) over cells, for each sampled u."""
    samples = np.asarray(samples, dtype=float)
    out = np.empty(samples.shape)
    for i, u in enumerate(samples):
        div = discrete_divergence(mesh, flux.edge_flux(float(u)))
        out[i] = np.max(np.abs(div))
    return CompatibilityReport(samples=samples, max_divergence=out)


def kruzkov_pair(flux, k):
    """Entropy |u - k| with flux sgn(u - k)(f(u) - f(k)) (closed form of the
    entropy-flux integral for this entropy)."""
    k = float(k)

    def u_fn(u):
        return np.abs(np.asarray(u, dtype=float) - k)

    def flux_fn(u):
        s = np.sign(np.asarray(u, dtype=float) - k)
        fu = flux.eval(u)
        fk = flux.eval(k)
        if flux.mesh.ndim == 1:
            return s * (fu - fk)
        return s * (fu[0] - fk[0]), s * (fu[1] - fk[1])

    def edge_flux_fn(u):
        s = np.sign(np.asarray(u, dtype=float) - k)
        fu = flux.edge_flux(u)
        fk = flux.edge_flux(k)
        if flux.mesh.ndim == 1:
            return s * (fu - fk)
        return s * (fu[0] - fk[0]), s * (fu[1] - fk[1])

    return EntropyPair(u_fn=u_fn, flux_fn=flux_fn, edge_flux_fn=edge_flux_fn)


def quadrature_entropy_flux(flux, U, cell, u, dU=None, tol=1e-10, max_doublings=12):
    """Entropy flux at one cell: integral of U'(s) d_s f(cell, s) over [0, u].

    Composite Gauss-Legendre with panel doubling until successive values agree
    to ``tol`` absolutely.
    """
    u = float(u)
    dU = dU if dU is not None else _numeric_du(U)
    if flux.deriv_at is not None:
        df_at = lambda s: np.asarray(flux.deriv_at(cell, s), dtype=float)
        ncomp = 1 if flux.mesh.ndim == 1 else 2
    else:
        def df_at(s):
            s = np.atleast_1d(s)
            if flux.mesh.ndim == 1:
                return np.array([flux.deriv(float(sv))[cell] for sv in s])
            vals = [flux.deriv(float(sv)) for sv in s]
            return np.array([[v[0][cell], v[1][cell]] for v in vals]).T
        ncomp = 1 if flux.mesh.ndim == 1 else 2

    if u == 0.0:
        return np.zeros(ncomp) if ncomp > 1 else 0.0

    nodes, weights = leggauss(12)

    def integrate(n_panels):
        edges = np.linspace(0.0, u, n_panels + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            s = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            w = 0.5 * (b - a) * weights
            integrand = dU(s) * df_at(s)
            total = total + integrand @ w if np.ndim(integrand) > 1 else total + np.dot(w, integrand)
        return total

    prev = integrate(1)
    n = 2
    for _ in range(max_doublings):
        cur = integrate(n)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
        n *= 2
    raise QuadratureError(
        f"entropy-flux quadrature did not reach tol={tol:g} after {n // 2} panels"
    )
