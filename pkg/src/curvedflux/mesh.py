"""Discrete periodic manifolds: a circle and a 2-torus with variable metric.

Cells are logically Cartesian with periodic identification in every
direction.  The metric is sampled at cell centers; edge values are
arithmetic means of the two adjacent cells.  Edge bookkeeping follows one
convention throughout:

* 1-D: edge ``i`` sits at ``x = i*dx`` and is the left edge of cell ``i``;
  its neighbours are cells ``i-1`` (mod n) and ``i``.  An edge flux is a
  single number oriented in ``+x``.
* 2-D: ``Fx[i, j]`` is the edge-integrated flux through the left edge of
  cell ``(i, j)`` oriented ``+x``; ``Fy[i, j]`` the flux through the bottom
  edge oriented ``+y``.  Edge-integrated means the value already carries the
  edge length, so the divergence is just a difference quotient by cell
  volume.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError


@dataclass(frozen=True)
class Metric1D:
    """Periodic circle of coordinate length ``length`` with metric sample sqrt_g per cell."""

    n_cells: int
    length: float
    sqrt_g: np.ndarray

    def __post_init__(self):
        if self.n_cells < 4:
            raise MeshError(f"need at least 4 cells, got {self.n_cells}")
        if not self.length > 0:
            raise MeshError(f"period must be positive, got {self.length}")
        sg = np.asarray(self.sqrt_g, dtype=float)
        if sg.shape != (self.n_cells,):
            raise MeshError(f"sqrt_g shape {sg.shape} != ({self.n_cells},)")
        bad = np.flatnonzero(~(sg > 0))
        if bad.size:
            raise MeshError(f"sqrt_g must be positive; first offending cell {bad[0]}")
        object.__setattr__(self, "sqrt_g", sg)

    @property
    def ndim(self):
        return 1

    @property
    def dx(self):
        return self.length / self.n_cells

    @property
    def cell_centers(self):
        return (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def edge_positions(self):
        """Coordinates of edge i (left edge of cell i)."""
        return np.arange(self.n_cells) * self.dx

    @property
    def cell_volumes(self):
        return self.sqrt_g * self.dx

    @property
    def edge_sqrt_g(self):
        """Metric at edge i: mean of cells i-1 and i."""
        return 0.5 * (np.roll(self.sqrt_g, 1) + self.sqrt_g)


@dataclass(frozen=True)
class Metric2D:
    """Periodic 2-torus with a symmetric positive-definite metric per cell.

    ``g_components`` has shape (n_x, n_y, 2, 2); ``sqrt_g`` must equal
    sqrt(det g) at every cell.
    """

    n_x: int
    n_y: int
    periods: tuple
    g_components: np.ndarray
    sqrt_g: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n_x < 4 or self.n_y < 4:
            raise MeshError(f"need at least 4 cells per direction, got {self.n_x}x{self.n_y}")
        lx, ly = self.periods
        if not (lx > 0 and ly > 0):
            raise MeshError(f"periods must be positive, got {self.periods}")
        g = np.asarray(self.g_components, dtype=float)
        if g.shape != (self.n_x, self.n_y, 2, 2):
            raise MeshError(f"g_components shape {g.shape} != ({self.n_x},{self.n_y},2,2)")
        if not np.allclose(g[..., 0, 1], g[..., 1, 0], atol=1e-14):
            raise MeshError("g_components must be symmetric")
        det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
        if not (np.all(g[..., 0, 0] > 0) and np.all(det > 0)):
            raise MeshError("g_components must be positive definite in every cell")
        object.__setattr__(self, "g_components", g)
        sg = self.sqrt_g
        if sg is None:
            sg = np.sqrt(det)
        else:
            sg = np.asarray(sg, dtype=float)
            if np.max(np.abs(sg - np.sqrt(det))) > 1e-12:
                raise MeshError("sqrt_g inconsistent with det(g_components)")
        object.__setattr__(self, "sqrt_g", sg)

    @property
    def ndim(self):
        return 2

    @property
    def dx(self):
        return self.periods[0] / self.n_x

    @property
    def dy(self):
        return self.periods[1] / self.n_y

    @property
    def cell_centers(self):
        x = (np.arange(self.n_x) + 0.5) * self.dx
        y = (np.arange(self.n_y) + 0.5) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    @property
    def corner_coords(self):
        """Corner (i, j) sits at (i*dx, j*dy); periodic, so n_x*n_y corners."""
        x = np.arange(self.n_x) * self.dx
        y = np.arange(self.n_y) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    @property
    def cell_volumes(self):
        return self.sqrt_g * self.dx * self.dy


@dataclass(frozen=True)
class CellField:
    """Cell-averaged scalar bound to a mesh.  Values must be finite."""

    values: np.ndarray
    mesh: object

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        expected = (self.mesh.n_cells,) if self.mesh.ndim == 1 else (self.mesh.n_x, self.mesh.n_y)
        if vals.shape != expected:
            raise MeshError(f"field shape {vals.shape} does not match mesh {expected}")
        if not np.all(np.isfinite(vals)):
            raise MeshError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    def with_values(self, values):
        return CellField(values, self.mesh)


def build_circle_mesh(n_cells, length, sqrt_g_fn):
    """Circle mesh with sqrt(g) sampled from ``sqrt_g_fn`` at cell centers."""
    if n_cells < 4:
        raise MeshError(f"need at least 4 cells, got {n_cells}")
    x = (np.arange(n_cells) + 0.5) * (length / n_cells)
    sg = np.asarray(sqrt_g_fn(x), dtype=float)
    if sg.ndim == 0:
        sg = np.full(n_cells, float(sg))
    bad = np.flatnonzero(~(sg > 0))
    if bad.size:
        raise MeshError(
            f"sqrt_g_fn non-positive at cell {bad[0]} (x={x[bad[0]]:g}): {sg[bad[0]]:g}"
        )
    return Metric1D(n_cells=n_cells, length=float(length), sqrt_g=sg)


def build_torus_mesh(n_x, n_y, periods, g_fn=None):
    """Torus mesh; ``g_fn(x, y)`` returns the 2x2 metric components at cell centers.

    With ``g_fn=None`` the flat metric is used.
    """
    lx, ly = periods
    xc = (np.arange(n_x) + 0.5) * (lx / n_x)
    yc = (np.arange(n_y) + 0.5) * (ly / n_y)
    X, Y = np.meshgrid(xc, yc, indexing="ij")
    g = np.zeros((n_x, n_y, 2, 2))
    if g_fn is None:
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = 1.0
    else:
        comps = g_fn(X, Y)
        g[..., 0, 0] = comps[0]
        g[..., 0, 1] = comps[1]
        g[..., 1, 0] = comps[1]
        g[..., 1, 1] = comps[2]
    return Metric2D(n_x=n_x, n_y=n_y, periods=(float(lx), float(ly)), g_components=g)


def cell_volume(mesh, index):
    """Volume of one cell: sqrt_g*dx in 1-D, sqrt_g*dx*dy in 2-D."""
    if mesh.ndim == 1:
        i = int(index)
        if not 0 <= i < mesh.n_cells:
            raise MeshError(f"cell index {i} out of range [0, {mesh.n_cells})")
        return mesh.sqrt_g[i] * mesh.dx
    i, j = index
    if not (0 <= i < mesh.n_x and 0 <= j < mesh.n_y):
        raise MeshError(f"cell index {index} out of range")
    return mesh.sqrt_g[i, j] * mesh.dx * mesh.dy


def discrete_divergence(mesh, edge_fluxes):
    """Per-cell divergence of edge-integrated fluxes: (outgoing - incoming) / volume.

    Periodicity makes the volume-weighted sum telescope to zero exactly.
    """
    if mesh.ndim == 1:
        flux = np.asarray(edge_fluxes, dtype=float)
        if flux.shape != (mesh.n_cells,):
            raise MeshError(f"expected {mesh.n_cells} edge fluxes, got shape {flux.shape}")
        return (np.roll(flux, -1) - flux) / mesh.cell_volumes
    fx, fy = edge_fluxes
    fx = np.asarray(fx, dtype=float)
    fy = np.asarray(fy, dtype=float)
    shape = (mesh.n_x, mesh.n_y)
    if fx.shape != shape or fy.shape != shape:
        raise MeshError(f"expected edge flux arrays of shape {shape}")
    out = np.roll(fx, -1, axis=0) - fx + np.roll(fy, -1, axis=1) - fy
    return out / mesh.cell_volumes
