"""CSV output with pinned schemas.

All files are comma-separated with a header row exactly matching the schema,
``.`` decimal separator, and floats at 17 significant digits so repeated runs
of the same configuration are byte-identical.
"""

import json
import os

SCHEMAS = {
    "norms.csv": ["t", "l1", "l2", "linf", "mass"],
    "field_<step>.csv (1-D)": ["cell_id", "x", "u"],
    "field_<step>.csv (2-D)": ["cell_id", "x", "y", "u"],
    "traces.csv": ["t", "entropy_name", "trace_norm"],
    "distance.csv": ["t", "l1_flux_distance"],
    "gowdy_fluid_<step>.csv": ["cell", "x", "mu", "v", "tau", "S"],
    "gowdy_geo_<step>.csv": ["cell", "x", "a", "b", "c", "at", "ax", "bt", "bx",
                             "ct", "cx", "alpha", "beta"],
    "gowdy_series.csv": ["t", "tv_mu", "tv_v", "tv_w", "sup_alpha_b", "sup_mu",
                         "max_r1", "max_r2", "verdict"],
}


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return format(float(v), ".17g")


def write_csv(path, header, rows):
    """Write rows (iterables matching header) and return the file name."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return os.path.basename(path)


def write_summary(path, summary):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return os.path.basename(path)


def schema_text():
    lines = ["documented CSV schemas (header rows):"]
    for name, cols in SCHEMAS.items():
        lines.append(f"  {name}: {','.join(cols)}")
    return "\n".join(lines)
