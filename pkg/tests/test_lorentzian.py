import numpy as np
import pytest

from curvedflux import lorentzian as lz
from curvedflux import riemannian as rfv
from curvedflux.errors import MeshError, UnphysicalStateError
from curvedflux.flux import burgers_flux_1d
from curvedflux.mesh import CellField, build_circle_mesh


def minkowski(n=64, L=1.0):
    return lz.make_foliation("minkowski", n, L)


def hand_flux(ft, fx, dft, dfx, u_range=(-1.0, 1.0)):
    """TimelikeFlux from scalar maps of u alone (position-independent)."""
    shape = lambda x, u: np.broadcast_arrays(np.asarray(x, dtype=float),
                                             np.asarray(u, dtype=float))[1]
    return lz.TimelikeFlux(
        eval=lambda t, x, u: (ft(shape(x, u)), fx(shape(x, u))),
        deriv=lambda t, x, u: (dft(shape(x, u)), dfx(shape(x, u))),
        u_range=u_range,
    )


class TestCheckTimelike:
    def test_pure_time_direction(self):
        fl = hand_flux(lambda u: u, lambda u: 0.0 * u,
                       lambda u: np.ones_like(u), lambda u: 0.0 * u)
        rep = lz.check_timelike(fl, minkowski(), [0.0], [0.3, -0.7])
        assert rep.worst == pytest.approx(-1.0, abs=1e-15)
        assert rep.is_timelike

    def test_pure_space_direction_is_violation(self):
        fl = hand_flux(lambda u: 0.0 * u, lambda u: u,
                       lambda u: 0.0 * u, lambda u: np.ones_like(u))
        rep = lz.check_timelike(fl, minkowski(), [0.0], [0.5])
        assert rep.worst == pytest.approx(1.0, abs=1e-15)
        assert not rep.is_timelike
        assert not rep.future_oriented

    def test_burgers_pair_value(self):
        fl = hand_flux(lambda u: u, lambda u: 0.5 * u * u,
                       lambda u: np.ones_like(u), lambda u: u)
        rep = lz.check_timelike(fl, minkowski(), [0.0], [0.5])
        assert rep.worst == pytest.approx(-0.75, abs=1e-15)

    def test_all_builtin_families_timelike(self):
        for fam in lz.FOLIATION_FAMILIES:
            fol = lz.make_foliation(fam, 32, 1.0)
            for name in lz.LORENTZIAN_FLUX_FAMILIES:
                fl = lz.make_timelike_flux(name, fol, u_range=(-0.6, 0.6))
                rep = lz.check_timelike(fl, fol, np.linspace(0, 1, 5),
                                        np.linspace(-0.6, 0.6, 9))
                assert rep.is_timelike, (fam, name, rep.worst)


class TestEvolve:
    def test_linear_transport_shifts_profile(self):
        n, L, c = 128, 1.0, 0.5
        fol = minkowski(n, L)
        fl = lz.make_timelike_flux("transport", fol, u_range=(-1.5, 1.5),
                                   transport_speed=c)
        x = fol.cell_centers
        u0 = np.sin(2 * np.pi * x)
        t_end = 0.4
        run = lz.evolve(u0, fl, fol, lz.LorentzianConfig(cfl=0.45, t_end=t_end))
        exact = np.sin(2 * np.pi * (x - c * t_end))
        # first-order scheme: moderate smearing allowed
        assert np.max(np.abs(run.states[-1] - exact)) < 0.15
        assert np.argmax(run.states[-1]) != np.argmax(u0)

    def test_constant_state_exact(self):
        for fam in lz.FOLIATION_FAMILIES:
            fol = lz.make_foliation(fam, 32, 1.0)
            fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-1, 1))
            run = lz.evolve(np.full(32, 0.4), fl, fol,
                            lz.LorentzianConfig(cfl=0.45, t_end=0.5))
            for state in run.states:
                assert np.max(np.abs(state - 0.4)) <= 1e-13

    def test_shock_speed_rankine_hugoniot(self):
        # f = (u, u^2/2): shock speed [f^x]/[f^t] = 1/2 for u_L=1, u_R=0
        n, L = 256, 1.0
        fol = minkowski(n, L)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-0.2, 1.2))
        x = fol.cell_centers
        u0 = np.where((x > 0.25) & (x <= 0.75), 1.0, 0.0)
        t_end = 0.4
        run = lz.evolve(u0, fl, fol, lz.LorentzianConfig(cfl=0.45, t_end=t_end))
        u = run.states[-1]
        crossing = x[(x > 0.8) & (u > 0.5)].max()
        assert abs(crossing - (0.75 + 0.5 * t_end)) <= 3 * (L / n)

    def test_conserved_slice_integral(self):
        fol = lz.make_foliation("expanding", 64, 1.0)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-0.8, 0.8))
        x = fol.cell_centers
        run = lz.evolve(0.5 * np.sin(2 * np.pi * x), fl, fol,
                        lz.LorentzianConfig(cfl=0.45, t_end=0.5))
        q = [np.sum(fol.volume_density(t) * fl.eval(t, x, u)[0] * fol.dx)
             for t, u in zip(run.t_grid, run.states)]
        assert np.max(np.abs(np.diff(q))) <= 1e-11

    def test_invariant_domain_loss_raises(self):
        fol = minkowski(16)
        fl = lz.TimelikeFlux(
            eval=lambda t, x, u: (np.tanh(np.asarray(u, dtype=float)) * np.ones_like(x),
                                  0.4 * np.asarray(u, dtype=float) * np.ones_like(x)),
            deriv=lambda t, x, u: (1.0 / np.cosh(np.asarray(u, dtype=float)) ** 2 * np.ones_like(x),
                                   0.4 * np.ones_like(x) * np.ones_like(np.asarray(u, dtype=float))),
            u_range=(-0.5, 0.5),
        )
        with pytest.raises(UnphysicalStateError, match="invariant domain"):
            lz._invert_ft(fl, fol, 0.0, np.full(16, 0.9))  # 0.9 > tanh(0.5)

    def test_shape_mismatch(self):
        fol = minkowski(16)
        fl = lz.make_timelike_flux("transport", fol, u_range=(-1, 1))
        with pytest.raises(MeshError):
            lz.evolve(np.zeros(8), fl, fol, lz.LorentzianConfig(t_end=0.1))


class TestTraceNorms:
    def test_zero_state_zero_norm(self):
        fol = minkowski(32)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-1, 1))
        ent = lz.quadratic_slice_entropy()
        assert lz.trace_entropy_norm(np.zeros(32), fl, fol, 0.0, ent) == 0.0

    def test_constant_state_closed_form(self):
        # f^t = u on Minkowski; quadratic entropy: F^t(c) = c^2; slice volume 1
        fol = minkowski(32, 1.0)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-1, 1))
        ent = lz.quadratic_slice_entropy()
        c = 0.5
        got = lz.trace_entropy_norm(np.full(32, c), fl, fol, 0.0, ent)
        assert got == pytest.approx(c * c, rel=1e-12)

    @pytest.mark.parametrize("fam", lz.FOLIATION_FAMILIES)
    def test_trace_norms_nonincreasing(self, fam):
        fol = lz.make_foliation(fam, 96, 1.0)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-0.65, 0.65))
        x = fol.cell_centers
        run = lz.evolve(0.5 * np.sin(2 * np.pi * x), fl, fol,
                        lz.LorentzianConfig(cfl=0.45, t_end=0.5))
        entropies = [lz.quadratic_slice_entropy()]
        entropies += [lz.kruzkov_slice_entropy(fl, k) for k in
                      (-0.42, -0.17, 0.0, 0.23, 0.38)]
        for ent in entropies:
            series = [lz.trace_entropy_norm(u, fl, fol, t, ent)
                      for t, u in zip(run.t_grid, run.states)]
            assert np.all(np.diff(series) <= 1e-11), (fam, ent.name)


class TestL1FluxDistance:
    def test_equal_states_zero(self):
        fol = minkowski(32)
        fl = lz.make_timelike_flux("transport", fol, u_range=(-1, 1))
        u = np.sin(2 * np.pi * fol.cell_centers)
        assert lz.l1_flux_distance(u, u, fl, fol, 0.0) == 0.0

    def test_constant_offset_linear_ft(self):
        # comparison principle: ordered data keep their f^t mass difference
        fol = minkowski(16, 1.0)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-1.5, 1.5))
        x = fol.cell_centers
        u0 = 0.3 * np.sin(2 * np.pi * x)
        v0 = u0 + 0.25
        run_u, run_v = lz.evolve_pair(u0, v0, fl, fol,
                                      lz.LorentzianConfig(cfl=0.45, t_end=0.3))
        series = [lz.l1_flux_distance(u, v, fl, fol, t)
                  for t, u, v in zip(run_u.t_grid, run_u.states, run_v.states)]
        assert np.max(np.abs(np.asarray(series) - 0.25)) <= 1e-12

    @pytest.mark.parametrize("fam", lz.FOLIATION_FAMILIES)
    def test_random_pairs_nonincreasing(self, fam):
        rng = np.random.default_rng(4)
        fol = lz.make_foliation(fam, 64, 1.0)
        fl = lz.make_timelike_flux("burgers_like", fol, u_range=(-0.7, 0.7))
        cfg = lz.LorentzianConfig(cfl=0.45, t_end=0.4)
        for _ in range(2):
            u0 = rng.uniform(-0.5, 0.5, 64)
            v0 = rng.uniform(-0.5, 0.5, 64)
            run_u, run_v = lz.evolve_pair(u0, v0, fl, fol, cfg)
            series = [lz.l1_flux_distance(u, v, fl, fol, t)
                      for t, u, v in zip(run_u.t_grid, run_u.states, run_v.states)]
            assert np.all(np.diff(series) <= 1e-11)


class TestMinkowskiCrossCheck:
    def test_matches_riemannian_flat_circle(self):
        # N=1, g_xx=1, f^t(u)=u, f^x(u)=u^2/2 against the 1-D solver with the
        # same scheme constants and the same fixed dt
        n, L = 128, 1.0
        fol = minkowski(n, L)
        flz = lz.make_timelike_flux("burgers_like", fol, u_range=(-0.8, 0.8))
        mesh = build_circle_mesh(n, L, lambda x: np.ones_like(x))
        flr = burgers_flux_1d(mesh, u_range=(-0.8, 0.8))
        x = mesh.cell_centers
        u0 = 0.4 * np.sin(2 * np.pi * x)
        dt = 0.5 * rfv.admissible_dt(mesh, u0, flr, 1.0)
        t_end = 0.25
        run = lz.evolve(u0, flz, fol, lz.LorentzianConfig(cfl=1.0, t_end=t_end, dt=dt))
        u_r, _ = rfv.solve(CellField(u0, mesh), flr,
                           rfv.FvConfig(cfl=1.0, t_end=t_end, dt=dt))
        assert np.max(np.abs(run.states[-1] - u_r.values)) <= 1e-12
