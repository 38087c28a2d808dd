"""Run configuration: a flat INI file with one section per concern.

One file describes one run.  Every default is materialized into the returned
``RunConfig`` at parse time; nothing downstream invents values.  Unknown
sections, keys, or family names are rejected with the list of known names.
"""

import configparser
import os
from dataclasses import dataclass, field

from .errors import ConfigError

SOLVERS = ("riemannian", "lorentzian", "gowdy")
MESH_KINDS = ("circle", "torus")
METRICS = ("flat", "wavy")
FLUX_FAMILIES = ("burgers_1d", "potential_1d", "stream_2d")
POTENTIALS = ("linear", "quadratic")
STREAM_PROFILES = ("vortex", "shear")
U_DEPENDENCE = ("linear", "quadratic")
INITIAL_1D = ("sine", "riemann", "bump", "constant")
INITIAL_2D = ("sine_2d", "bump_2d")
NUMERICAL_FLUXES = ("rusanov", "godunov_scalar")
FOLIATIONS = ("minkowski", "wavy_lapse", "expanding")
LORENTZIAN_FLUXES = ("transport", "burgers_like")
LORENTZIAN_INITIALS = ("sine", "bump")
GOWDY_INITIALS = ("standing_wave", "fluid_riemann", "stream_collision", "beta_collapse")
SPLITTINGS = ("lie", "strang")

# section -> key -> (type, default); None default means required
_SCHEMA = {
    "run": {
        "solver": (str, None),
        "out_dir": (str, "out"),
    },
    "mesh": {
        "kind": (str, "circle"),
        "n_cells": (int, 128),
        "length": (float, 1.0),
        "n_x": (int, 64),
        "n_y": (int, 64),
        "length_x": (float, 1.0),
        "length_y": (float, 1.0),
        "metric": (str, "flat"),
        "metric_amplitude": (float, 0.3),
        "metric_mode": (int, 1),
    },
    "flux": {
        "family": (str, "burgers_1d"),
        "potential": (str, "quadratic"),
        "coefficient": (float, 1.0),
        "stream_profile": (str, "vortex"),
        "u_dependence": (str, "linear"),
    },
    "initial": {
        "family": (str, "sine"),
        "amplitude": (float, 0.5),
        "mean": (float, 0.0),
        "mode": (int, 1),
        "left": (float, 1.0),
        "right": (float, 0.0),
        "value": (float, 0.0),
    },
    "numerics": {
        "cfl": (float, 0.45),
        "t_end": (float, 0.5),
        "record_every": (int, 1),
        "numerical_flux": (str, "rusanov"),
    },
    "lorentzian": {
        "foliation": (str, "minkowski"),
        "flux": (str, "transport"),
        "transport_speed": (float, 0.5),
        "n_cells": (int, 128),
        "length": (float, 1.0),
        "initial": (str, "sine"),
        "amplitude": (float, 0.5),
        "mode": (int, 1),
        "compare_offset": (float, 0.1),
        "kruzkov_points": (int, 5),
    },
    "gowdy": {
        "c_s": (float, 0.5),
        "kappa": (float, 1.0),
        "n_cells": (int, 128),
        "length": (float, 1.0),
        "initial": (str, "standing_wave"),
        "amplitude": (float, 0.02),
        "velocity_amplitude": (float, 0.02),
        "mode": (int, 1),
        "mu0": (float, 1.0),
        "bt0": (float, 0.5),
        "mu_left": (float, 2.0),
        "mu_right": (float, 1.0),
        "v_left": (float, 0.0),
        "v_right": (float, 0.0),
        "v0": (float, 0.9),
        "glimm_base": (int, 2),
        "splitting": (str, "lie"),
        "ceiling_alpha_b": (float, 1e6),
        "ceiling_mu": (float, 1e6),
        "beta_floor": (float, 1e-10),
    },
}

_CHOICES = {
    ("run", "solver"): SOLVERS,
    ("mesh", "kind"): MESH_KINDS,
    ("mesh", "metric"): METRICS,
    ("flux", "family"): FLUX_FAMILIES,
    ("flux", "potential"): POTENTIALS,
    ("flux", "stream_profile"): STREAM_PROFILES,
    ("flux", "u_dependence"): U_DEPENDENCE,
    ("numerics", "numerical_flux"): NUMERICAL_FLUXES,
    ("lorentzian", "foliation"): FOLIATIONS,
    ("lorentzian", "flux"): LORENTZIAN_FLUXES,
    ("lorentzian", "initial"): LORENTZIAN_INITIALS,
    ("gowdy", "initial"): GOWDY_INITIALS,
    ("gowdy", "splitting"): SPLITTINGS,
}


@dataclass(frozen=True)
class RunConfig:
    solver: str
    out_dir: str
    sections: dict = field(default_factory=dict)

    def __getitem__(self, section):
        return self.sections[section]


def _coerce(section, key, raw):
    typ, _ = _SCHEMA[section][key]
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return str(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: expected {typ.__name__}") from exc


def parse_config(path):
    """Parse and validate; every default is materialized in the result."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    if not parser.sections():
        raise ConfigError(f"{path}: empty configuration (no sections)")

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]; known: {sorted(_SCHEMA)}"
            )
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {key!r} in [{section}]; known: {sorted(_SCHEMA[section])}"
                )

    sections = {}
    for section, keys in _SCHEMA.items():
        out = {}
        for key, (typ, default) in keys.items():
            if parser.has_option(section, key):
                out[key] = _coerce(section, key, parser.get(section, key))
            else:
                if default is None and section == "run":
                    raise ConfigError(f"missing required key {key!r} in [run]")
                out[key] = default
        sections[section] = out

    for (section, key), choices in _CHOICES.items():
        val = sections[section][key]
        if val not in choices:
            raise ConfigError(
                f"[{section}] {key} = {val!r} is not a known name; known: {list(choices)}"
            )

    _validate(sections)
    return RunConfig(solver=sections["run"]["solver"],
                     out_dir=sections["run"]["out_dir"],
                     sections=sections)


def _validate(sections):
    num = sections["numerics"]
    if not 0.0 < num["cfl"] <= 1.0:
        raise ConfigError(f"[numerics] cfl must be in (0, 1], got {num['cfl']}")
    if num["t_end"] < 0.0:
        raise ConfigError(f"[numerics] t_end must be >= 0, got {num['t_end']}")
    if num["record_every"] < 1:
        raise ConfigError(f"[numerics] record_every must be >= 1, got {num['record_every']}")

    mesh = sections["mesh"]
    if mesh["n_cells"] < 4 or mesh["n_x"] < 4 or mesh["n_y"] < 4:
        raise ConfigError("[mesh] needs at least 4 cells per direction")
    if mesh["length"] <= 0 or mesh["length_x"] <= 0 or mesh["length_y"] <= 0:
        raise ConfigError("[mesh] periods must be positive")
    if mesh["metric"] == "wavy" and not -1.0 < mesh["metric_amplitude"] < 1.0:
        raise ConfigError("[mesh] metric_amplitude must lie in (-1, 1) to keep sqrt_g positive")

    solver = sections["run"]["solver"]
    if solver == "riemannian":
        family = sections["flux"]["family"]
        kind = sections["mesh"]["kind"]
        if family == "stream_2d" and kind != "torus":
            raise ConfigError("[flux] stream_2d requires [mesh] kind = torus")
        if family in ("burgers_1d", "potential_1d") and kind != "circle":
            raise ConfigError(f"[flux] {family} requires [mesh] kind = circle")
        init = sections["initial"]["family"]
        if kind == "circle" and init not in INITIAL_1D:
            raise ConfigError(f"[initial] {init!r} is not a 1-D family; known: {list(INITIAL_1D)}")
        if kind == "torus" and init not in INITIAL_2D:
            raise ConfigError(f"[initial] {init!r} is not a 2-D family; known: {list(INITIAL_2D)}")

    lor = sections["lorentzian"]
    if lor["n_cells"] < 4 or lor["length"] <= 0:
        raise ConfigError("[lorentzian] needs n_cells >= 4 and positive length")

    gow = sections["gowdy"]
    if not 0.0 < gow["c_s"] < 1.0:
        raise ConfigError(f"[gowdy] sound speed must satisfy 0 < c_s < 1, got {gow['c_s']}")
    if gow["kappa"] < 0.0:
        raise ConfigError(f"[gowdy] kappa must be >= 0, got {gow['kappa']}")
    if gow["glimm_base"] < 2:
        raise ConfigError(f"[gowdy] glimm_base must be >= 2, got {gow['glimm_base']}")
    if gow["n_cells"] < 4 or gow["length"] <= 0:
        raise ConfigError("[gowdy] needs n_cells >= 4 and positive length")
