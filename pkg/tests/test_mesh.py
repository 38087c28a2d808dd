import numpy as np
import pytest

from curvedflux.errors import MeshError
from curvedflux.mesh import (CellField, Metric2D, build_circle_mesh,
                             build_torus_mesh, cell_volume, discrete_divergence)


def flat_circle(n=8, length=1.0):
    return build_circle_mesh(n, length, lambda x: np.ones_like(x))


class TestCircleMesh:
    def test_uniform_flat(self):
        m = flat_circle(4, 1.0)
        assert np.all(m.sqrt_g == 1.0)
        assert m.dx == 0.25
        assert np.allclose(m.cell_centers, [0.125, 0.375, 0.625, 0.875])

    def test_wavy_metric_sampled_at_centers(self):
        m = build_circle_mesh(8, 2 * np.pi, lambda x: 2.0 + np.sin(x))
        assert m.sqrt_g[0] == pytest.approx(2.0 + np.sin(np.pi / 8), abs=1e-15)

    def test_too_few_cells_rejected(self):
        with pytest.raises(MeshError):
            build_circle_mesh(3, 1.0, lambda x: np.ones_like(x))

    def test_nonpositive_metric_names_cell(self):
        with pytest.raises(MeshError, match="cell 2"):
            build_circle_mesh(4, 1.0, lambda x: np.where(x > 0.5, -1.0, 1.0))

    def test_nonpositive_length(self):
        with pytest.raises(MeshError):
            build_circle_mesh(4, 0.0, lambda x: np.ones_like(x))


class TestTorusMesh:
    def test_flat_volumes(self):
        m = build_torus_mesh(10, 10, (1.0, 1.0))
        assert cell_volume(m, (3, 7)) == pytest.approx(0.01, abs=1e-16)

    def test_sqrt_g_consistency_enforced(self):
        g = np.zeros((4, 4, 2, 2))
        g[..., 0, 0] = 2.0
        g[..., 1, 1] = 2.0
        with pytest.raises(MeshError, match="inconsistent"):
            Metric2D(4, 4, (1.0, 1.0), g, sqrt_g=np.ones((4, 4)))

    def test_positive_definite_enforced(self):
        g = np.zeros((4, 4, 2, 2))
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = -1.0
        with pytest.raises(MeshError, match="positive definite"):
            Metric2D(4, 4, (1.0, 1.0), g)

    def test_metric_eigenvalues_positive(self):
        def g_fn(X, Y):
            return 1.0 + 0.4 * np.sin(2 * np.pi * X), 0.2 * np.ones_like(X), 1.5 * np.ones_like(X)

        m = build_torus_mesh(6, 6, (1.0, 1.0), g_fn)
        eig = np.linalg.eigvalsh(m.g_components)
        assert np.all(eig > 0)
        assert np.max(np.abs(m.sqrt_g ** 2 - np.linalg.det(m.g_components))) < 1e-12


class TestCellField:
    def test_rejects_nan(self):
        m = flat_circle()
        vals = np.ones(m.n_cells)
        vals[3] = np.nan
        with pytest.raises(MeshError):
            CellField(vals, m)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(MeshError):
            CellField(np.ones(5), flat_circle(8))


class TestCellVolume:
    def test_variable_metric(self):
        m = build_circle_mesh(4, 2.0, lambda x: np.full_like(x, 2.0))
        assert cell_volume(m, 1) == pytest.approx(1.0, abs=1e-16)

    def test_out_of_range(self):
        with pytest.raises(MeshError):
            cell_volume(flat_circle(4), 4)


class TestDiscreteDivergence:
    def test_constant_fluxes_telescope(self):
        m = build_circle_mesh(16, 1.0, lambda x: 1.5 + 0.5 * np.sin(2 * np.pi * x))
        div = discrete_divergence(m, np.full(16, 3.7))
        assert np.max(np.abs(div)) == 0.0

    def test_linear_flux_unit_divergence_flat(self):
        # F_{edge} = x_edge gives divergence exactly 1 away from the wrap cell
        m = flat_circle(16, 1.0)
        div = discrete_divergence(m, m.edge_positions)
        assert np.allclose(div[:-1], 1.0, atol=1e-13)
        assert div[-1] == pytest.approx(1.0 - m.n_cells, abs=1e-12)

    def test_volume_weighted_sum_is_zero(self):
        rng = np.random.default_rng(3)
        m = build_circle_mesh(32, 2.0, lambda x: 1.0 + 0.3 * np.cos(np.pi * x))
        div = discrete_divergence(m, rng.normal(size=32))
        assert abs(np.sum(m.cell_volumes * div)) < 1e-12

        t = build_torus_mesh(8, 8, (1.0, 2.0))
        div2 = discrete_divergence(t, (rng.normal(size=(8, 8)), rng.normal(size=(8, 8))))
        assert abs(np.sum(t.cell_volumes * div2)) < 1e-12

    def test_edge_count_mismatch(self):
        with pytest.raises(MeshError):
            discrete_divergence(flat_circle(8), np.ones(7))

    def test_refinement_first_order(self):
        # smooth vector field f = sin(2 pi x)/sqrt_g on a wavy metric:
        # div f = (sqrt_g f)' / sqrt_g has a closed form
        L = 1.0
        sq = lambda x: 1.0 + 0.3 * np.sin(2 * np.pi * x / L)

        def exact_div(x):
            return 2 * np.pi * np.cos(2 * np.pi * x) / sq(x)

        errs = []
        for n in (32, 64, 128):
            m = build_circle_mesh(n, L, sq)
            # edge flux carries sqrt_g * f; here sqrt_g * f = sin(2 pi x) exactly
            div = discrete_divergence(m, np.sin(2 * np.pi * m.edge_positions))
            errs.append(np.max(np.abs(div - exact_div(m.cell_centers))))
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all(orders > 0.9)
