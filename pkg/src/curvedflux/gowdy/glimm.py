"""Random-choice (Glimm) step for the homogeneous relativistic fluid.

One step solves the exact Riemann problem at every interface of the periodic
grid and resamples each cell at the van der Corput point theta_n of the step
index: the new cell value is the exact interface solution evaluated at the
offset (theta_n - 1/2)*dx from the cell center.  Under the half-CFL bound
dt * max|lambda| <= dx/2 the wave fans of neighbouring interfaces do not
overlap, so that evaluation is exact.  The sampling sequence is deterministic
and equidistributed; no RNG is involved.
"""

import numpy as np

from ..errors import CFLError
from .fluid import wave_speeds
from .riemann import solve_riemann_batch


def van_der_corput(index, base=2):
    """index-th point of the van der Corput sequence in (0,1); index >= 1."""
    if index < 1:
        raise ValueError(f"van der Corput index starts at 1, got {index}")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    theta = 0.0
    denom = 1.0
    n = int(index)
    while n > 0:
        n, digit = divmod(n, base)
        denom *= base
        theta += digit / denom
    return theta


def max_signal_speed(v, c_s):
    lam_m, lam_p = wave_speeds(v, c_s)
    return float(np.max(np.maximum(np.abs(lam_m), np.abs(lam_p))))


def glimm_dt(v, dx, c_s, cfl):
    """cfl times the half-CFL bound dx/(2 max|lambda|)."""
    return cfl * dx / (2.0 * max_signal_speed(v, c_s))


def glimm_step(mu, v, dt, dx, step_index, c_s, base=2):
    """One random-choice step on periodic data; returns the resampled (mu, v)."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    amax = max_signal_speed(v, c_s)
    if dt * amax > 0.5 * dx * (1.0 + 1e-12):
        raise CFLError(dt, 0.5 * dx / amax)
    theta = van_der_corput(step_index, base)
    # interface i sits at the left edge of cell i
    muL, vL = np.roll(mu, 1), np.roll(v, 1)
    batch = solve_riemann_batch(muL, vL, mu, v, c_s)
    if theta <= 0.5:
        # sample point lies in the left half of each cell: owned by interface i
        return batch.sample(theta * dx / dt)
    # right half: owned by interface i+1, at negative offset from it
    mu_s, v_s = batch.sample((theta - 1.0) * dx / dt)
    return np.roll(mu_s, -1), np.roll(v_s, -1)
