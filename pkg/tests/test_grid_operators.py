import numpy as np
import pytest
import scipy.sparse as sp

from anisoradon.errors import DilationCapError
from anisoradon.numerics import (ComposedOperator, Grid, SparseKernelOperator,
                                 discretize_tj, discretize_uj, operator_norm,
                                 qj_multiplier)
from anisoradon.numerics.cutoffs import phi0
from anisoradon.presets import reference_spec

SPEC = reference_spec()
SMALL = Grid(dim=2, points_per_axis=32, half_width=2.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(dim=2, points_per_axis=12)
    with pytest.raises(ValueError):
        Grid(dim=2, points_per_axis=4)
    g = Grid(dim=2, points_per_axis=16, half_width=1.0)
    assert g.spacing == pytest.approx(0.125)
    assert g.size == 256
    assert g.max_frequency == pytest.approx(np.pi * 8)


def test_tj_zero_beyond_support():
    # once the whole outer shell box falls inside the first half-cell there
    # are no nodes left and the slab operator vanishes
    op = discretize_tj(SPEC, SMALL, 9)
    assert op.matrix.nnz == 0


def test_tj_dilation_cap():
    with pytest.raises(DilationCapError):
        discretize_tj(SPEC, SMALL, 10 ** 6)


def test_tj_row_sums_match_direct_quadrature():
    # row sums of |T_0| equal the midpoint quadrature of int |psi_0| dy'
    grid = Grid(dim=2, points_per_axis=64, half_width=2.0)
    op = discretize_tj(SPEC, grid, 0)
    rows = np.asarray(abs(op.matrix).sum(axis=1)).ravel()
    nodes = grid.nodes()
    h = grid.spacing
    rho = SPEC.psi_radius
    n = grid.points_per_axis

    def psi_j0(xp, xdd, yp):
        base = phi0(xp / rho) * phi0(xdd / rho) * phi0(yp / rho)
        outer = phi0(xp / (2 * rho)) * phi0(xdd / (2 * rho)) \
            * phi0(yp / (2 * rho))
        inner = phi0(2 * xp / (2 * rho)) * phi0(2 * xdd / (2 * rho)) \
            * phi0(2 * yp / (2 * rho))
        return base * (outer - inner)

    rng = np.random.default_rng(3)
    for _ in range(20):
        ix, ixx = int(rng.integers(0, n)), int(rng.integers(0, n))
        direct = h * sum(abs(psi_j0(nodes[ix], nodes[ixx], y))
                         for y in nodes)
        assert rows[ix * n + ixx] == pytest.approx(direct, abs=1e-10)


def test_tj_constant_input_equals_cutoff_integral():
    grid = Grid(dim=2, points_per_axis=64, half_width=2.0)
    op = discretize_tj(SPEC, grid, 1)
    ones = np.ones(grid.size)
    applied = op.apply(ones)
    rows = np.asarray(op.matrix.sum(axis=1)).ravel()
    assert np.allclose(applied, rows, atol=1e-12)


def test_uj_telescoping_matches_tj():
    # U_j - U_{j+1} = T_j entrywise up to roundoff
    for j in (0, 1, 2):
        tj = discretize_tj(SPEC, SMALL, j)
        uj = discretize_uj(SPEC, SMALL, j)
        uj1 = discretize_uj(SPEC, SMALL, j + 1)
        diff = (uj.matrix - uj1.matrix) - tj.matrix
        if diff.nnz:
            assert np.abs(diff.data).max() < 1e-12


def test_adjoint_consistency():
    grid = Grid(dim=2, points_per_axis=32, half_width=2.0)
    op = discretize_tj(SPEC, grid, 1)
    rng = np.random.default_rng(5)
    for _ in range(20):
        f = rng.standard_normal(grid.size)
        g = rng.standard_normal(grid.size)
        lhs = g @ op.apply(f)
        rhs = op.apply_transpose(g) @ f
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def _embedded_matrix_op():
    # embed [[1, 2], [3, 4]] in a grid with unit cell volume so the raw
    # matrix conventions and the quadrature-weighted ones coincide
    grid = Grid(dim=1, points_per_axis=8, half_width=4.0)
    assert grid.cell_volume == 1.0
    m = sp.lil_matrix((8, 8))
    m[0, 0], m[0, 1], m[1, 0], m[1, 1] = 1.0, 2.0, 3.0, 4.0
    return SparseKernelOperator(grid, m.tocsr())


def test_norm_conventions_on_small_matrix():
    op = _embedded_matrix_op()
    assert operator_norm(op, "(1,1)") == 6.0
    assert operator_norm(op, "(inf,inf)") == 7.0
    assert operator_norm(op, "(1,inf)") == 4.0


def test_two_norm_power_iteration():
    op = _embedded_matrix_op()
    # largest singular value of [[1,2],[3,4]]: sqrt(15 + sqrt(221))
    exact = np.sqrt(15 + np.sqrt(221))
    assert operator_norm(op, "22") == pytest.approx(exact, abs=1e-3)


def test_two_norm_zero_operator():
    grid = Grid(dim=1, points_per_axis=8, half_width=4.0)
    op = SparseKernelOperator(grid, sp.csr_matrix((8, 8)))
    assert operator_norm(op, "22") == 0.0


def test_multiplier_two_norm_is_symbol_sup():
    q = qj_multiplier(SMALL, 1, SPEC.beta_dprime, 2)
    assert operator_norm(q, "22") == np.abs(q.symbol).max() == 1.0


def test_dense_and_matrix_free_agree():
    q = qj_multiplier(SMALL, 1, SPEC.beta_dprime, 1)
    dense = q.to_dense()
    rng = np.random.default_rng(11)
    for _ in range(20):
        v = rng.standard_normal(SMALL.size)
        assert np.abs(q.apply(v) - dense @ v).max() < 1e-10


def test_composed_norms_match_dense():
    tj = discretize_tj(SPEC, SMALL, 1)
    q = qj_multiplier(SMALL, 1, SPEC.beta_dprime, 1)
    comp = ComposedOperator(tj, q)
    dense = tj.matrix @ q.to_dense()
    col = np.abs(dense).sum(axis=0).max()
    row = np.abs(dense).sum(axis=1).max()
    entry = np.abs(dense).max()
    assert operator_norm(comp, "11") == pytest.approx(col, rel=1e-12)
    assert operator_norm(comp, "oooo") == pytest.approx(row, rel=1e-12)
    assert operator_norm(comp, "1oo") == pytest.approx(
        entry / SMALL.cell_volume, rel=1e-12)
    rng = np.random.default_rng(2)
    v = rng.standard_normal(SMALL.size)
    assert np.abs(comp.apply(v) - dense @ v).max() < 1e-10


def test_transpose_of_multiplier():
    q = qj_multiplier(SMALL, 1, SPEC.beta_dprime, 1)
    dense = q.to_dense()
    rng = np.random.default_rng(4)
    v = rng.standard_normal(SMALL.size)
    assert np.abs(q.apply_transpose(v) - dense.T @ v).max() < 1e-10
