"""Exact Riemann solver for the isothermal relativistic Euler system

    tau_t + S_x = 0,    S_t + Sigma_x = 0,    p = c_s^2 mu.

Both characteristic fields are genuinely nonlinear, so the solution is a
1-wave (shock or rarefaction), a constant middle state, and a 2-wave; there
is no contact field and no vacuum for finite data.  Working in the fluid
rapidity psi = artanh(v) the wave curves take a closed form.  With
kappa = c_s/(1+c_s^2) and the density ratio r = mu/mu0 across a wave:

* rarefactions follow the Riemann invariants  psi -+ kappa*ln(mu),
* shocks jump with relative rapidity  artanh(w),
  w^2 = c_s^2 (r-1)^2 / ((c_s^2 r + 1)(r + c_s^2)),

and the wave strength

    Phi(r) = kappa*ln r          (r <= 1, rarefaction)
           = artanh(w(r))        (r >= 1, shock, Lax-admissible)

is strictly increasing with Phi(1) = 0, matched C^1 at r = 1.  The middle
state solves

    psi_L - Phi(mu_M/mu_L) = psi_M = psi_R + Phi(mu_M/mu_R),

a strictly monotone scalar equation in ln(mu_M), solved by safeguarded
Newton iteration to machine accuracy.  Sampling at xi = x/t inverts
lambda-(v) = xi (respectively lambda+) inside rarefaction fans and uses the
Rankine-Hugoniot speed s = [S]/[tau] across shocks.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import UnphysicalStateError
from .fluid import FluidState, primitive_to_conserved, wave_speeds

_DEGENERATE = 1e-14  # |ln r| below this: treat the wave as absent


def _kappa(c_s):
    return c_s / (1.0 + c_s * c_s)


def _rapidity(v):
    return np.arctanh(v)


def _shock_rapidity(r, c_s):
    """Relative rapidity across a shock with density ratio r >= 1."""
    cs2 = c_s * c_s
    D = (cs2 * r + 1.0) * (r + cs2)
    w = c_s * (r - 1.0) / np.sqrt(D)
    return np.arctanh(w)


def _wave_strength(lnr, c_s):
    """Phi as a function of ln(r), covering both branches."""
    r = np.exp(lnr)
    rare = _kappa(c_s) * lnr
    with np.errstate(invalid="ignore"):
        shock = _shock_rapidity(np.maximum(r, 1.0), c_s)
    return np.where(lnr <= 0.0, rare, shock)


def _wave_strength_dlnr(lnr, c_s):
    """d Phi / d ln(r)."""
    r = np.exp(lnr)
    cs2 = c_s * c_s
    D = (cs2 * r + 1.0) * (r + cs2)
    Dp = 2.0 * cs2 * r + 1.0 + cs2 * cs2
    w = c_s * (r - 1.0) / np.sqrt(D)
    dw_dr = c_s * (2.0 * D - (r - 1.0) * Dp) / (2.0 * D ** 1.5)
    shock = r * dw_dr / (1.0 - w * w)
    return np.where(lnr <= 0.0, _kappa(c_s), shock)


def _middle_state(muL, vL, muR, vR, c_s, max_iter=100):
    """Vectorized middle state (mu_M, v_M); inputs broadcast to a common shape."""
    muL, vL, muR, vR = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (muL, vL, muR, vR))
    )
    psiL = _rapidity(vL)
    psiR = _rapidity(vR)
    lnL = np.log(muL)
    lnR = np.log(muR)
    kap = _kappa(c_s)

    def G(x):
        return (_wave_strength(x - lnL, c_s) + _wave_strength(x - lnR, c_s)
                + psiR - psiL)

    def dG(x):
        return _wave_strength_dlnr(x - lnL, c_s) + _wave_strength_dlnr(x - lnR, c_s)

    # two-rarefaction closed form as starting point
    x = 0.5 * (lnL + lnR) + (psiL - psiR) / (2.0 * kap)

    # bracket the root of the increasing function G
    lo = np.minimum(np.minimum(lnL, lnR), x)
    hi = np.maximum(np.maximum(lnL, lnR), x)
    width = np.maximum(hi - lo, 1.0)
    for _ in range(200):
        bad = G(lo) > 0.0
        if not np.any(bad):
            break
        lo = np.where(bad, lo - width, lo)
    for _ in range(200):
        bad = G(hi) < 0.0
        if not np.any(bad):
            break
        hi = np.where(bad, hi + width, hi)

    x = np.clip(x, lo, hi)
    for _ in range(max_iter):
        g = G(x)
        lo = np.where(g <= 0.0, x, lo)
        hi = np.where(g > 0.0, x, hi)
        step = g / dG(x)
        x_new = x - step
        outside = (x_new <= lo) | (x_new >= hi)
        x_new = np.where(outside, 0.5 * (lo + hi), x_new)
        if np.all(np.abs(x_new - x) <= 1e-15 * (1.0 + np.abs(x_new))):
            x = x_new
            break
        x = x_new

    muM = np.exp(x)
    psiM = psiL - _wave_strength(x - lnL, c_s)
    vM = np.tanh(psiM)

    # exactly equal inputs give exactly the input state back
    same = (muL == muR) & (vL == vR)
    muM = np.where(same, muL, muM)
    vM = np.where(same, vL, vM)
    if not np.all(np.abs(vM) < 1.0) or not np.all(muM > 0):
        raise UnphysicalStateError("Riemann middle state left the physical region")
    return muM, vM


def _wave_speeds_from_states(muL, vL, muM, vM, muR, vR, c_s):
    """Head/tail speeds of both waves.  Shocks get head = tail = s from the
    Rankine-Hugoniot relation s[tau] = [S]; zero-strength waves collapse onto
    the adjacent characteristic."""
    tauL, SL, _ = primitive_to_conserved(muL, vL, c_s)
    tauM, SM, _ = primitive_to_conserved(muM, vM, c_s)
    tauR, SR, _ = primitive_to_conserved(muR, vR, c_s)
    lamL_m, _ = wave_speeds(vL, c_s)
    lamM_m, lamM_p = wave_speeds(vM, c_s)
    _, lamR_p = wave_speeds(vR, c_s)

    lnr1 = np.log(muM) - np.log(muL)
    shock1 = lnr1 > _DEGENERATE
    zero1 = np.abs(lnr1) <= _DEGENERATE
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = (SM - SL) / (tauM - tauL)
    head1 = np.where(shock1, s1, lamL_m)
    tail1 = np.where(shock1, s1, lamM_m)
    head1 = np.where(zero1, lamL_m, head1)
    tail1 = np.where(zero1, lamL_m, tail1)

    lnr2 = np.log(muM) - np.log(muR)
    shock2 = lnr2 > _DEGENERATE
    zero2 = np.abs(lnr2) <= _DEGENERATE
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = (SR - SM) / (tauR - tauM)
    head2 = np.where(shock2, s2, lamM_p)
    tail2 = np.where(shock2, s2, lamR_p)
    head2 = np.where(zero2, lamR_p, head2)
    tail2 = np.where(zero2, lamR_p, tail2)
    return head1, tail1, head2, tail2


def _sample(muL, vL, muM, vM, muR, vR, head1, tail1, head2, tail2, xi, c_s):
    """Self-similar solution at xi = x/t; all arguments broadcast."""
    kap = _kappa(c_s)
    psiL = _rapidity(vL)
    psiR = _rapidity(vR)

    # states inside the fans from lambda-+(v) = xi and the Riemann invariant;
    # clipped so the unused branches of the selects stay finite
    tiny = 1.0 - 1e-15
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        v1 = np.clip((xi + c_s) / (1.0 + xi * c_s), -tiny, tiny)
        mu1 = muL * np.exp((psiL - _rapidity(v1)) / kap)
        v2 = np.clip((xi - c_s) / (1.0 - xi * c_s), -tiny, tiny)
        mu2 = muR * np.exp((_rapidity(v2) - psiR) / kap)

    mu = np.where(xi < head1, muL,
         np.where(xi <= tail1, mu1,
         np.where(xi < head2, muM,
         np.where(xi <= tail2, mu2, muR))))
    v = np.where(xi < head1, vL,
        np.where(xi <= tail1, v1,
        np.where(xi < head2, vM,
        np.where(xi <= tail2, v2, vR))))

    # degenerate problems (identical states) never enter the fan branches
    same = (muL == muR) & (vL == vR)
    mu = np.where(same, muL, mu)
    v = np.where(same, vL, v)
    return mu, v


@dataclass(frozen=True)
class RiemannSolution:
    """Two-wave self-similar solution; ``sample(xi)`` returns (mu, v)."""

    left: FluidState
    right: FluidState
    middle: FluidState
    c_s: float
    head1: float
    tail1: float
    head2: float
    tail2: float

    @property
    def wave_types(self):
        one = "shock" if self.middle.mu > self.left.mu * (1 + 1e-13) else (
            "rarefaction" if self.middle.mu < self.left.mu * (1 - 1e-13) else "none")
        two = "shock" if self.middle.mu > self.right.mu * (1 + 1e-13) else (
            "rarefaction" if self.middle.mu < self.right.mu * (1 - 1e-13) else "none")
        return one, two

    def sample(self, xi):
        xi = np.asarray(xi, dtype=float)
        mu, v = _sample(self.left.mu, self.left.v, self.middle.mu, self.middle.v,
                        self.right.mu, self.right.v,
                        self.head1, self.tail1, self.head2, self.tail2, xi, self.c_s)
        return mu, v


def riemann_solve(left, right, c_s):
    """Exact solution of a single Riemann problem between two FluidStates."""
    muM, vM = _middle_state(left.mu, left.v, right.mu, right.v, c_s)
    h1, t1, h2, t2 = _wave_speeds_from_states(
        left.mu, left.v, muM, vM, right.mu, right.v, c_s)
    return RiemannSolution(
        left=left, right=right, middle=FluidState(muM, vM), c_s=c_s,
        head1=float(h1), tail1=float(t1), head2=float(h2), tail2=float(t2),
    )


@dataclass(frozen=True)
class BatchRiemann:
    """Riemann solutions at many interfaces at once (arrays over interfaces)."""

    muL: np.ndarray
    vL: np.ndarray
    muM: np.ndarray
    vM: np.ndarray
    muR: np.ndarray
    vR: np.ndarray
    c_s: float
    head1: np.ndarray
    tail1: np.ndarray
    head2: np.ndarray
    tail2: np.ndarray

    def sample(self, xi):
        return _sample(self.muL, self.vL, self.muM, self.vM, self.muR, self.vR,
                       self.head1, self.tail1, self.head2, self.tail2,
                       np.asarray(xi, dtype=float), self.c_s)


def solve_riemann_batch(muL, vL, muR, vR, c_s):
    muM, vM = _middle_state(muL, vL, muR, vR, c_s)
    h1, t1, h2, t2 = _wave_speeds_from_states(muL, vL, muM, vM, muR, vR, c_s)
    return BatchRiemann(muL=np.asarray(muL, dtype=float), vL=np.asarray(vL, dtype=float),
                        muM=muM, vM=vM,
                        muR=np.asarray(muR, dtype=float), vR=np.asarray(vR, dtype=float),
                        c_s=c_s, head1=h1, tail1=t1, head2=h2, tail2=t2)
