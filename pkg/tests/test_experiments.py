import math

import numpy as np
import pytest

from anisoradon.errors import ResolutionError, SingularMapError
from anisoradon.exponents import OperatorSpec
from anisoradon.numerics import (Grid, decay_slope, decay_table,
                                 dual_principal_check, fit_decay_rows,
                                 knapp_exponent_table, knapp_integral,
                                 p_shell_resolved, q_resolved,
                                 summation_by_parts_residual)
from anisoradon.polynomials import Monomial, Polynomial
from anisoradon.presets import (dual_contraction_spec, rank_one_spec,
                                reference_spec)
from anisoradon.scaling import MultiIndex, isotropic_weights
from fractions import Fraction


def test_decay_slope_exact_line():
    fit = decay_slope([(j, 2.0 ** -j) for j in range(6)])
    assert fit.slope == pytest.approx(-1.0, abs=1e-12)
    assert fit.max_residual < 1e-12


def test_decay_slope_intercept_absorbs_constant():
    fit = decay_slope([(j, 7.3 * 2.0 ** (-2 * j)) for j in range(1, 6)])
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)


def test_decay_slope_harmonic_values():
    # closed-form least squares on log2(1, 1/2, 1/3): the centered cross sum
    # is y(2) - y(0) = -log2(3) over a squared spread of 2
    fit = decay_slope([(0, 1.0), (1, 0.5), (2, 1.0 / 3.0)])
    assert fit.slope == pytest.approx(-math.log2(3) / 2, abs=1e-12)
    assert fit.slope == pytest.approx(-0.7925, abs=1e-4)


def test_decay_slope_input_validation():
    with pytest.raises(ValueError):
        decay_slope([(0, 1.0), (1, 0.5)])
    with pytest.raises(ValueError):
        decay_slope([(0, 1.0), (1, 0.0), (2, 0.5)])


def test_resolution_flags():
    grid = Grid(dim=2, points_per_axis=256, half_width=2.0)
    bdd = MultiIndex([2])
    assert q_resolved(grid, bdd, 3)
    assert not q_resolved(grid, bdd, 4)
    assert p_shell_resolved(grid, bdd, 1, 4)
    assert not p_shell_resolved(grid, bdd, 1, 6)


def test_knapp_successive_ratio():
    spec = reference_spec()
    rows = knapp_exponent_table(spec, t_min=-6, t_max=-4)
    for row in rows:
        assert row["implied_exponent"] == pytest.approx(4.0, abs=0.15 * 4)


def test_knapp_epsilon_monotone():
    spec = reference_spec()
    values = [knapp_integral(spec, -4, epsilon_box=e)
              for e in (0.3, 0.5, 0.8)]
    assert values[0] <= values[1] <= values[2]


def test_knapp_quadrature_vs_finer():
    spec = reference_spec()
    coarse = knapp_integral(spec, -5, nodes_per_axis=16)
    fine = knapp_integral(spec, -5, nodes_per_axis=160)
    assert coarse == pytest.approx(fine, rel=0.1)


def test_knapp_underflow_guard():
    spec = reference_spec()
    with pytest.raises(ResolutionError):
        knapp_integral(spec, -30)
    with pytest.raises(ValueError):
        knapp_integral(spec, -0.5)


def test_knapp_flat_shear_scales_exactly():
    # S with alpha~ = beta scaling: a single quadratic monomial keeps the
    # integrand's box inclusion exact, so successive ratios hit the predicted
    # exponent on the nose for plateau-deep t
    spec = reference_spec()
    v5 = knapp_integral(spec, -5)
    v6 = knapp_integral(spec, -6)
    assert v6 / v5 == pytest.approx(2.0 ** -4, rel=1e-6)


def test_dual_check_shift_invariant_case_exact():
    spec = rank_one_spec()
    for j in (0, 2, 5):
        assert dual_principal_check(spec, j, 30) <= 1e-12


def test_dual_check_contraction():
    spec = dual_contraction_spec()
    devs = {j: dual_principal_check(spec, j, 40) for j in range(4, 9)}
    for j in range(4, 8):
        assert devs[j + 1] / devs[j] <= 0.75
    assert devs[8] < devs[4]


def test_dual_check_singular_map():
    # a violent x''-fold: x'' + 1000 x''^2 y' folds over inside the sample
    # box at scale 0, so some targets have no preimage and Newton must fail
    w = isotropic_weights(1, 1)
    s = Polynomial.from_monomials(1, 1, [
        Monomial(Fraction(1), (1,), (0,), (1,)),
        Monomial(Fraction(1000), (0,), (2,), (1,))])
    spec = OperatorSpec(weights=w, beta_dprime=MultiIndex([2]), s=(s,))
    with pytest.raises(SingularMapError):
        dual_principal_check(spec, 0, 30)


def test_summation_by_parts_small_grid_matrices():
    # dense matrix identity on a small grid:
    # sum_{j<=N} T_j Q_j = U_0 Q_0 - U_{N+1} Q_N + sum U_j (Q_j - Q_{j-1})
    from anisoradon.numerics import (discretize_tj, discretize_uj,
                                     qj_multiplier)
    spec = reference_spec()
    grid = Grid(dim=2, points_per_axis=32, half_width=2.0)
    n_terms = 2
    qs = [qj_multiplier(grid, 1, spec.beta_dprime, j).to_dense()
          for j in range(n_terms + 1)]
    lhs = np.zeros((grid.size, grid.size))
    for j in range(n_terms + 1):
        lhs += discretize_tj(spec, grid, j).matrix @ qs[j]
    rhs = discretize_uj(spec, grid, 0).matrix @ qs[0] \
        - discretize_uj(spec, grid, n_terms + 1).matrix @ qs[n_terms]
    for j in range(1, n_terms + 1):
        rhs += discretize_uj(spec, grid, j).matrix @ (qs[j] - qs[j - 1])
    assert np.abs(lhs - rhs).max() < 1e-10


def test_summation_by_parts_residual_vectorized():
    spec = reference_spec()
    grid = Grid(dim=2, points_per_axis=64, half_width=2.0)
    assert summation_by_parts_residual(spec, grid, 3, n_vectors=5) < 1e-10


def test_decay_table_rows_and_fits():
    spec = reference_spec()
    grid = Grid(dim=2, points_per_axis=64, half_width=2.0)
    rows = decay_table(spec, grid, jmax=3, kmax=1, pairs=("11", "oooo"),
                       families=("TjQj", "TjPjk"))
    families = {r.family for r in rows}
    assert families == {"TjQj", "TjPjk"}
    fit = fit_decay_rows(rows, "TjQj", "11")
    assert fit.slope < 0  # decay, even on a coarse grid
    with pytest.raises(ValueError):
        fit_decay_rows(rows, "TjQj", "11", over="k")
