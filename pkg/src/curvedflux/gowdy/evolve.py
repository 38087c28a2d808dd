"""Coupled evolution of the plane-symmetric Einstein-Euler system.

Each step operator-splits (``lie``, the default):

    random-choice fluid step  ->  fluid source step  ->  geometry step;

the ``strang`` variant symmetrizes the source around the fluid step.  The
time step is cfl * min( dx / (2 max|lambda|), dx ), the first factor the
half-CFL bound of the random-choice scheme, the second the unit
characteristic speed of the geometry sector.

A run never raises on blow-up: the monitor classifies every recorded step and
the driver halts with the verdict (geometry_blowup, matter_blowup) or runs to
completion.  Loss of the fluid invariant domain counts as matter blow-up.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import UnphysicalStateError
from .fluid import fluid_source_step, primitive_to_conserved
from .geometry import GeometryState, constraint_residual, geometry_step
from .glimm import glimm_step, max_signal_speed

VERDICTS = ("running", "geometry_blowup", "matter_blowup", "completed")

INITIAL_FAMILIES = ("standing_wave", "fluid_riemann", "stream_collision", "beta_collapse")


@dataclass(frozen=True)
class GowdyConfig:
    c_s: float
    n_cells: int
    length: float
    t_end: float
    kappa: float = 1.0
    cfl: float = 0.45
    glimm_seed_base: int = 2
    boundary: str = "periodic"
    record_every: int = 1
    splitting: str = "lie"
    ceiling_alpha_b: float = 1e6
    ceiling_mu: float = 1e6
    beta_floor: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.c_s < 1.0:
            raise ValueError(f"sound speed must satisfy 0 < c_s < 1, got {self.c_s}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.glimm_seed_base < 2:
            raise ValueError(f"glimm_seed_base must be >= 2, got {self.glimm_seed_base}")
        if self.boundary != "periodic":
            raise ValueError(f"only periodic boundaries are supported, got {self.boundary!r}")
        if self.splitting not in ("lie", "strang"):
            raise ValueError(f"splitting must be 'lie' or 'strang', got {self.splitting!r}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")

    @property
    def dx(self):
        return self.length / self.n_cells


@dataclass(frozen=True)
class GowdyState:
    t: float
    step_index: int
    mu: np.ndarray
    v: np.ndarray
    geo: GeometryState


def tv_norm(values):
    """Total variation with the periodic wrap jump included."""
    f = np.asarray(values, dtype=float)
    return float(np.sum(np.abs(np.roll(f, -1) - f)))


@dataclass(frozen=True)
class StepSummary:
    t: float
    tv_mu: float
    tv_v: float
    tv_w: float
    sup_alpha_b: float
    sup_mu: float
    min_beta: float
    max_r1: float
    max_r2: float
    inversion_failed: bool = False


def summarize(state, cfg):
    geo = state.geo
    # near blow-up exp(2a), exp(2b) overflow to inf; the sups must still feed
    # the monitor, so let inf/nan propagate silently here
    with np.errstate(invalid="ignore", over="ignore"):
        r1, r2 = constraint_residual(geo, state.mu, state.v, cfg.c_s, cfg.kappa)
        tv_w = float(sum(tv_norm(comp) for comp in geo.w))
        return StepSummary(
            t=state.t,
            tv_mu=tv_norm(state.mu),
            tv_v=tv_norm(state.v),
            tv_w=tv_w,
            sup_alpha_b=float(np.max(np.abs(geo.alpha)) + np.max(np.abs(geo.b))),
            sup_mu=float(np.max(state.mu)),
            min_beta=float(np.min(geo.beta)),
            max_r1=float(np.max(np.abs(r1))),
            max_r2=float(np.max(np.abs(r2))),
        )


def blowup_monitor(history, cfg, reached_t_end=False):
    """Classify a run from its per-step summaries."""
    for s in history:
        if s.sup_alpha_b > cfg.ceiling_alpha_b or s.min_beta <= cfg.beta_floor:
            return "geometry_blowup"
        if s.sup_mu > cfg.ceiling_mu or s.inversion_failed:
            return "matter_blowup"
    return "completed" if reached_t_end else "running"


@dataclass
class GowdyRun:
    cfg: GowdyConfig
    verdict: str
    history: list
    snapshot_steps: list
    snapshots: list  # GowdyState at the recorded steps

    @property
    def final(self):
        return self.snapshots[-1]


def step_dt(state, cfg):
    return cfg.cfl * min(cfg.dx / (2.0 * max_signal_speed(state.v, cfg.c_s)), cfg.dx)


class _GeometrySectorFailure(Exception):
    pass


def _advance(state, cfg, dt):
    mu, v, geo = state.mu, state.v, state.geo
    if cfg.splitting == "lie":
        mu, v = glimm_step(mu, v, dt, cfg.dx, state.step_index + 1, cfg.c_s,
                           base=cfg.glimm_seed_base)
        mu, v = fluid_source_step(mu, v, geo, dt, cfg.c_s)
    else:
        mu, v = fluid_source_step(mu, v, geo, 0.5 * dt, cfg.c_s)
        mu, v = glimm_step(mu, v, dt, cfg.dx, state.step_index + 1, cfg.c_s,
                           base=cfg.glimm_seed_base)
        mu, v = fluid_source_step(mu, v, geo, 0.5 * dt, cfg.c_s)
    try:
        geo = geometry_step(geo, mu, v, dt, cfg.c_s, cfg.kappa)
    except UnphysicalStateError as exc:
        # the wave-equation update overran float range: geometry blow-up
        raise _GeometrySectorFailure() from exc
    return GowdyState(t=state.t + dt, step_index=state.step_index + 1,
                      mu=mu, v=v, geo=geo)


def _failure_summary(t, kind):
    geometry = kind == "geometry"
    return StepSummary(t=t, tv_mu=np.nan, tv_v=np.nan, tv_w=np.nan,
                       sup_alpha_b=np.inf if geometry else np.nan,
                       sup_mu=np.nan if geometry else np.inf,
                       min_beta=np.nan,
                       max_r1=np.nan, max_r2=np.nan,
                       inversion_failed=not geometry)


def run_gowdy(state0, cfg):
    """March to cfg.t_end or until the monitor trips; returns the full run."""
    state = state0
    history = [summarize(state, cfg)]
    snapshots = [state]
    snapshot_steps = [0]
    verdict = blowup_monitor(history, cfg)
    while verdict == "running" and state.t < cfg.t_end - 1e-14:
        dt = min(step_dt(state, cfg), cfg.t_end - state.t)
        try:
            state = _advance(state, cfg, dt)
            summary = summarize(state, cfg)
        except _GeometrySectorFailure:
            history.append(_failure_summary(state.t, "geometry"))
            verdict = blowup_monitor(history, cfg)
            break
        except UnphysicalStateError:
            history.append(_failure_summary(state.t, "matter"))
            verdict = blowup_monitor(history, cfg)
            break
        history.append(summary)
        if state.step_index % cfg.record_every == 0:
            snapshots.append(state)
            snapshot_steps.append(state.step_index)
        verdict = blowup_monitor(history, cfg, reached_t_end=state.t >= cfg.t_end - 1e-14)
    if verdict == "running":
        verdict = blowup_monitor(history, cfg, reached_t_end=True)
    if snapshot_steps[-1] != state.step_index:
        snapshots.append(state)
        snapshot_steps.append(state.step_index)
    return GowdyRun(cfg=cfg, verdict=verdict, history=history,
                    snapshot_steps=snapshot_steps, snapshots=snapshots)


# --- initial data families --------------------------------------------------

def _cells(cfg):
    return (np.arange(cfg.n_cells) + 0.5) * cfg.dx


def standing_wave_data(cfg, amplitude=0.02, velocity_amplitude=0.02, mode=1,
                       mu0=1.0, a0=0.0, b0=0.0, bt0=0.5):
    """Constraint-compatible data: homogeneous fluid at rest plus a standing
    wave in the off-diagonal exponent c.

    With a_x = b_x = 0 and S = 0 the second constraint fixes b_t by quadrature
    of -c_t c_x in x (closed form for the cosine profile) and the first
    constraint then gives a_t pointwise; both residuals vanish at the
    continuum level, discretely to O(dx^2).
    """
    x = _cells(cfg)
    w = 2.0 * np.pi * mode / cfg.length
    A, B = amplitude, velocity_amplitude
    c = A * np.cos(w * x)
    cx = -A * w * np.sin(w * x)
    ct = B * np.cos(w * x)
    bt = bt0 + 0.25 * A * B * (1.0 - np.cos(2.0 * w * x))
    if np.any(np.abs(bt) < 1e-12):
        raise ValueError("bt0 too small: the first constraint divides by b_t")
    at = (ct ** 2 + cx ** 2 + cfg.kappa * np.exp(2.0 * a0) * mu0 - bt ** 2) / (2.0 * bt)
    n = cfg.n_cells
    geo = GeometryState(
        dx=cfg.dx,
        a=np.full(n, a0), at=at, ax=np.zeros(n),
        b=np.full(n, b0), bt=bt, bx=np.zeros(n),
        c=c, ct=ct, cx=cx,
    )
    return GowdyState(t=0.0, step_index=0, mu=np.full(n, mu0), v=np.zeros(n), geo=geo)


def fluid_riemann_data(cfg, mu_left=2.0, mu_right=1.0, v_left=0.0, v_right=0.0):
    """Two constant fluid states with jumps at x = L/2 and the periodic wrap;
    geometry trivial.  Not constraint-compatible; meant for shock-handling and
    TV studies of the fluid sector."""
    x = _cells(cfg)
    right = x >= 0.5 * cfg.length
    mu = np.where(right, mu_right, mu_left)
    v = np.where(right, v_right, v_left)
    return GowdyState(t=0.0, step_index=0, mu=mu, v=v,
                      geo=GeometryState.zero(cfg.n_cells, cfg.dx))


def stream_collision_data(cfg, mu0=1.0, v0=0.9):
    """Counter-streaming halves that collide at the midpoint; the density
    focuses by a large factor there, the fixture for the matter ceiling."""
    x = _cells(cfg)
    v = np.where(x < 0.5 * cfg.length, v0, -v0)
    return GowdyState(t=0.0, step_index=0, mu=np.full(cfg.n_cells, mu0), v=v,
                      geo=GeometryState.zero(cfg.n_cells, cfg.dx))


def beta_collapse_data(cfg, bt0=-30.0, mu0=1e-6):
    """Homogeneous contraction of the symmetry-orbit area: b_t large negative
    drives beta = e^{2b} through the configured floor.  The fluid content is
    negligible by default: metric contraction amplifies the density (the
    -2 b_t (tau+p) source), and a heavy fluid would reach its own ceiling in
    the same collapse."""
    n = cfg.n_cells
    geo = GeometryState.zero(n, cfg.dx)
    geo = GeometryState(dx=cfg.dx, a=geo.a, at=geo.at, ax=geo.ax,
                        b=geo.b, bt=np.full(n, bt0), bx=geo.bx,
                        c=geo.c, ct=geo.ct, cx=geo.cx)
    return GowdyState(t=0.0, step_index=0, mu=np.full(n, mu0), v=np.zeros(n), geo=geo)


def make_initial_data(family, cfg, **params):
    builders = {
        "standing_wave": standing_wave_data,
        "fluid_riemann": fluid_riemann_data,
        "stream_collision": stream_collision_data,
        "beta_collapse": beta_collapse_data,
    }
    if family not in builders:
        raise ValueError(f"unknown initial family {family!r}; known: {INITIAL_FAMILIES}")
    return builders[family](cfg, **params)
