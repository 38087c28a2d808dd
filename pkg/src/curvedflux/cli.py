"""Command-line entry point: ``curvedflux run|validate|schemas``.

One configuration file describes one run.  Outputs are CSV files with pinned
schemas plus ``summary.json``; for a fixed configuration the CSV files are
byte-identical across runs (the only varying summary field is wall time).

Exit codes: 0 success (a detected blow-up is a result, not a failure),
2 configuration error, 3 numerical failure.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import lorentzian as lz
from . import riemannian as rfv
from .config import parse_config
from .csvio import SCHEMAS, schema_text, write_csv, write_summary
from .errors import (CFLError, ConfigError, GeometryDegeneracyError, MeshError,
                     QuadratureError, UnphysicalStateError)
from .flux import burgers_flux_1d, flux_from_potential_1d, flux_from_stream_2d
from .gowdy import GowdyConfig, make_initial_data, run_gowdy
from .gowdy.fluid import primitive_to_conserved
from .mesh import CellField, build_circle_mesh, build_torus_mesh

ENV_OUT_DIR = "CURVEDFLUX_OUT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (CFLError, UnphysicalStateError, QuadratureError,
                     GeometryDegeneracyError, MeshError)


# --- builders from config ---------------------------------------------------

def _build_mesh(mesh_cfg):
    amp = mesh_cfg["metric_amplitude"]
    mode = mesh_cfg["metric_mode"]
    if mesh_cfg["kind"] == "circle":
        L = mesh_cfg["length"]
        if mesh_cfg["metric"] == "flat":
            fn = lambda x: np.ones_like(x)
        else:
            fn = lambda x: 1.0 + amp * np.sin(2.0 * np.pi * mode * x / L)
        return build_circle_mesh(mesh_cfg["n_cells"], L, fn)
    lx, ly = mesh_cfg["length_x"], mesh_cfg["length_y"]
    if mesh_cfg["metric"] == "flat":
        g_fn = None
    else:
        def g_fn(X, Y):
            f = 1.0 + amp * np.sin(2.0 * np.pi * mode * X / lx) * np.sin(2.0 * np.pi * mode * Y / ly)
            zero = np.zeros_like(f)
            return f, zero, f
    return build_torus_mesh(mesh_cfg["n_x"], mesh_cfg["n_y"], (lx, ly), g_fn)


def _initial_values(mesh, init_cfg):
    amp, mean, mode = init_cfg["amplitude"], init_cfg["mean"], init_cfg["mode"]
    fam = init_cfg["family"]
    if mesh.ndim == 1:
        x = mesh.cell_centers
        L = mesh.length
        if fam == "sine":
            return mean + amp * np.sin(2.0 * np.pi * mode * x / L)
        if fam == "riemann":
            return np.where(x < 0.5 * L, init_cfg["left"], init_cfg["right"])
        if fam == "bump":
            return mean + amp * np.sin(np.pi * x / L) ** 2
        return np.full(mesh.n_cells, init_cfg["value"])
    X, Y = mesh.cell_centers
    lx, ly = mesh.periods
    if fam == "sine_2d":
        return mean + amp * np.sin(2.0 * np.pi * mode * X / lx) * np.sin(2.0 * np.pi * mode * Y / ly)
    return mean + amp * np.sin(np.pi * X / lx) ** 2 * np.sin(np.pi * Y / ly) ** 2


def _u_range_for(values, pad=0.25):
    lo, hi = float(np.min(values)), float(np.max(values))
    margin = pad * (hi - lo + 1.0)
    return lo - margin, hi + margin


def _build_flux(mesh, flux_cfg, u_range):
    fam = flux_cfg["family"]
    c = flux_cfg["coefficient"]
    if fam == "burgers_1d":
        fl = flux_from_potential_1d(
            mesh, phi=lambda u: 0.5 * c * u * u, dphi=lambda u: c * u,
            u_range=u_range, flux_stationary_u=(0.0,))
        return fl
    if fam == "potential_1d":
        if flux_cfg["potential"] == "linear":
            return flux_from_potential_1d(
                mesh, phi=lambda u: c * u,
                dphi=lambda u: c * np.ones_like(np.asarray(u, dtype=float)),
                u_range=u_range)
        return flux_from_potential_1d(
            mesh, phi=lambda u: 0.5 * c * u * u, dphi=lambda u: c * u,
            u_range=u_range, flux_stationary_u=(0.0,))
    # stream_2d
    lx, ly = mesh.periods
    if flux_cfg["stream_profile"] == "vortex":
        shape = lambda X, Y: np.sin(2.0 * np.pi * X / lx) * np.sin(2.0 * np.pi * Y / ly)
    else:
        shape = lambda X, Y: np.cos(2.0 * np.pi * Y / ly)
    if flux_cfg["u_dependence"] == "linear":
        P, dP, stat = (lambda u: c * u), (lambda u: c * np.ones_like(np.asarray(u, dtype=float))), ()
    else:
        P, dP, stat = (lambda u: 0.5 * c * u * u), (lambda u: c * u), (0.0,)

    def psi(X, Y, u):
        return P(np.asarray(u, dtype=float)) * shape(X, Y)

    def dpsi(X, Y, u):
        return dP(np.asarray(u, dtype=float)) * shape(X, Y)

    return flux_from_stream_2d(mesh, psi, u_range=u_range, dpsi_du=dpsi,
                               flux_stationary_u=stat)


# --- runners -----------------------------------------------------------------

def _run_riemannian(cfg, out_dir):
    mesh = _build_mesh(cfg["mesh"])
    u0_vals = _initial_values(mesh, cfg["initial"])
    flux = _build_flux(mesh, cfg["flux"], _u_range_for(u0_vals))
    num = cfg["numerics"]
    fv_cfg = rfv.FvConfig(cfl=num["cfl"], t_end=num["t_end"],
                          numerical_flux=num["numerical_flux"],
                          record_every=num["record_every"])
    u0 = CellField(u0_vals, mesh)
    files = [_write_field(out_dir, 0, mesh, u0.values)]
    u_end, series = rfv.solve(u0, flux, fv_cfg)
    files.append(write_csv(
        os.path.join(out_dir, "norms.csv"), SCHEMAS["norms.csv"],
        zip(series.times, series.l1, series.l2, series.linf, series.mass)))
    files.append(_write_field(out_dir, len(series.times) - 1, mesh, u_end.values))
    return {
        "final_norms": {"l1": series.l1[-1], "l2": series.l2[-1],
                        "linf": series.linf[-1], "mass": series.mass[-1]},
        "records": len(series.times),
        "files": files,
    }


def _write_field(out_dir, step, mesh, values):
    name = f"field_{step:06d}.csv"
    if mesh.ndim == 1:
        header = SCHEMAS["field_<step>.csv (1-D)"]
        x = mesh.cell_centers
        rows = ((i, x[i], values[i]) for i in range(mesh.n_cells))
    else:
        header = SCHEMAS["field_<step>.csv (2-D)"]
        X, Y = mesh.cell_centers
        rows = ((i * mesh.n_y + j, X[i, j], Y[i, j], values[i, j])
                for i in range(mesh.n_x) for j in range(mesh.n_y))
    return write_csv(os.path.join(out_dir, name), header, rows)


def _run_lorentzian(cfg, out_dir):
    lor = cfg["lorentzian"]
    num = cfg["numerics"]
    n, L = lor["n_cells"], lor["length"]
    fol = lz.make_foliation(lor["foliation"], n, L)
    x = fol.cell_centers
    amp, mode = lor["amplitude"], lor["mode"]
    if lor["initial"] == "sine":
        u0 = amp * np.sin(2.0 * np.pi * mode * x / L)
    else:
        u0 = amp * np.sin(np.pi * x / L) ** 2
    v0 = u0 + lor["compare_offset"] * np.cos(2.0 * np.pi * x / L)
    lo = float(min(np.min(u0), np.min(v0)))
    hi = float(max(np.max(u0), np.max(v0)))
    pad = 0.1 * (hi - lo + 1.0)
    u_range = (lo - pad, hi + pad)
    flux = lz.make_timelike_flux(lor["flux"], fol, u_range,
                                 transport_speed=lor["transport_speed"])

    report = lz.check_timelike(flux, fol, np.linspace(0.0, num["t_end"], 5),
                               np.linspace(u_range[0], u_range[1], 9))
    if not report.is_timelike:
        raise UnphysicalStateError(
            f"flux is not time-like on this foliation (max g = {report.worst:g})"
        )

    run_cfg = lz.LorentzianConfig(cfl=num["cfl"], t_end=num["t_end"],
                                  record_every=num["record_every"])
    run_u, run_v = lz.evolve_pair(u0, v0, flux, fol, run_cfg)

    files = []
    norm_rows = []
    for t, u, sg in zip(run_u.t_grid, run_u.states, run_u.spatial_sqrt_g):
        vol = sg * fol.dx
        norm_rows.append((t, np.sum(vol * np.abs(u)), np.sqrt(np.sum(vol * u * u)),
                          np.max(np.abs(u)), np.sum(vol * u)))
    files.append(write_csv(os.path.join(out_dir, "norms.csv"),
                           SCHEMAS["norms.csv"], norm_rows))

    ks = [u_range[0] + (j + 1) * (u_range[1] - u_range[0]) / (lor["kruzkov_points"] + 1)
          for j in range(lor["kruzkov_points"])]
    entropies = [lz.quadratic_slice_entropy()] + [lz.kruzkov_slice_entropy(flux, k) for k in ks]
    trace_rows = []
    for ent in entropies:
        for t, u in zip(run_u.t_grid, run_u.states):
            trace_rows.append((t, ent.name, lz.trace_entropy_norm(u, flux, fol, t, ent)))
    files.append(write_csv(os.path.join(out_dir, "traces.csv"),
                           SCHEMAS["traces.csv"], trace_rows))

    dist_rows = [(t, lz.l1_flux_distance(u, v, flux, fol, t))
                 for t, u, v in zip(run_u.t_grid, run_u.states, run_v.states)]
    files.append(write_csv(os.path.join(out_dir, "distance.csv"),
                           SCHEMAS["distance.csv"], dist_rows))

    for idx in (0, len(run_u.t_grid) - 1):
        name = f"field_{idx:06d}.csv"
        rows = ((i, x[i], run_u.states[idx][i]) for i in range(n))
        files.append(write_csv(os.path.join(out_dir, name),
                               SCHEMAS["field_<step>.csv (1-D)"], rows))

    last = norm_rows[-1]
    return {
        "final_norms": {"l1": last[1], "l2": last[2], "linf": last[3], "mass": last[4]},
        "timelike_worst": report.worst,
        "records": len(run_u.t_grid),
        "files": files,
    }


def _run_gowdy(cfg, out_dir):
    gow = cfg["gowdy"]
    num = cfg["numerics"]
    gcfg = GowdyConfig(
        c_s=gow["c_s"], kappa=gow["kappa"], n_cells=gow["n_cells"],
        length=gow["length"], t_end=num["t_end"], cfl=num["cfl"],
        glimm_seed_base=gow["glimm_base"], record_every=num["record_every"],
        splitting=gow["splitting"], ceiling_alpha_b=gow["ceiling_alpha_b"],
        ceiling_mu=gow["ceiling_mu"], beta_floor=gow["beta_floor"],
    )
    params = _gowdy_initial_params(gow)
    state0 = make_initial_data(gow["initial"], gcfg, **params)
    run = run_gowdy(state0, gcfg)

    files = []
    series_rows = []
    for i, s in enumerate(run.history):
        verdict = run.verdict if i == len(run.history) - 1 else "running"
        series_rows.append((s.t, s.tv_mu, s.tv_v, s.tv_w, s.sup_alpha_b,
                            s.sup_mu, s.max_r1, s.max_r2, verdict))
    files.append(write_csv(os.path.join(out_dir, "gowdy_series.csv"),
                           SCHEMAS["gowdy_series.csv"], series_rows))

    x = (np.arange(gcfg.n_cells) + 0.5) * gcfg.dx
    for step, state in zip(run.snapshot_steps, run.snapshots):
        tau, S, _ = primitive_to_conserved(state.mu, state.v, gcfg.c_s)
        rows = ((i, x[i], state.mu[i], state.v[i], tau[i], S[i])
                for i in range(gcfg.n_cells))
        files.append(write_csv(os.path.join(out_dir, f"gowdy_fluid_{step:06d}.csv"),
                               SCHEMAS["gowdy_fluid_<step>.csv"], rows))
        g = state.geo
        alpha, beta = g.alpha, g.beta
        rows = ((i, x[i], g.a[i], g.b[i], g.c[i], g.at[i], g.ax[i], g.bt[i],
                 g.bx[i], g.ct[i], g.cx[i], alpha[i], beta[i])
                for i in range(gcfg.n_cells))
        files.append(write_csv(os.path.join(out_dir, f"gowdy_geo_{step:06d}.csv"),
                               SCHEMAS["gowdy_geo_<step>.csv"], rows))

    s = run.history[-1]
    return {
        "verdict": run.verdict,
        "final_series": {"t": s.t, "tv_mu": s.tv_mu, "tv_v": s.tv_v, "tv_w": s.tv_w,
                         "sup_alpha_b": s.sup_alpha_b, "sup_mu": s.sup_mu,
                         "max_r1": s.max_r1, "max_r2": s.max_r2},
        "records": len(run.history),
        "files": files,
    }


def _gowdy_initial_params(gow):
    fam = gow["initial"]
    if fam == "standing_wave":
        return dict(amplitude=gow["amplitude"], velocity_amplitude=gow["velocity_amplitude"],
                    mode=gow["mode"], mu0=gow["mu0"], bt0=gow["bt0"])
    if fam == "fluid_riemann":
        return dict(mu_left=gow["mu_left"], mu_right=gow["mu_right"],
                    v_left=gow["v_left"], v_right=gow["v_right"])
    if fam == "stream_collision":
        return dict(mu0=gow["mu0"], v0=gow["v0"])
    # beta_collapse: mu0 keeps its family default (negligible fluid)
    return dict(bt0=gow["bt0"])


_RUNNERS = {
    "riemannian": _run_riemannian,
    "lorentzian": _run_lorentzian,
    "gowdy": _run_gowdy,
}


def run(cfg, out_dir):
    """Dispatch one validated RunConfig; returns the summary dict."""
    started = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    result = _RUNNERS[cfg.solver](cfg, out_dir)
    summary = {
        "solver": cfg.solver,
        "out_dir": out_dir,
        "config": cfg.sections,
        "wall_time_s": time.perf_counter() - started,
    }
    summary.update(result)
    summary["files"] = sorted(summary["files"]) + ["summary.json"]
    write_summary(os.path.join(out_dir, "summary.json"), summary)
    return summary


def _resolve_out_dir(args, cfg):
    if args.out:
        return args.out
    if os.environ.get(ENV_OUT_DIR):
        return os.environ[ENV_OUT_DIR]
    return cfg.out_dir


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="curvedflux",
        description="conservation-law solvers on curved geometries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one run from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", help=f"output directory (also {ENV_OUT_DIR})")

    p_val = sub.add_parser("validate", help="parse and validate a config file")
    p_val.add_argument("--config", required=True)

    sub.add_parser("schemas", help="print the documented CSV schemas")

    args = parser.parse_args(argv)

    if args.command == "schemas":
        print(schema_text())
        return EXIT_OK

    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        print(f"ok: solver={cfg.solver}, out_dir={cfg.out_dir}")
        return EXIT_OK

    out_dir = _resolve_out_dir(args, cfg)
    try:
        summary = run(cfg, out_dir)
    except _NUMERICAL_ERRORS as exc:
        err = {"solver": cfg.solver, "error": f"{type(exc).__name__}: {exc}"}
        try:
            write_summary(os.path.join(out_dir, "summary.json"), err)
        except OSError:
            pass
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    verdict = summary.get("verdict")
    tail = f", verdict={verdict}" if verdict else ""
    print(f"done: solver={cfg.solver}, out={out_dir}{tail}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
