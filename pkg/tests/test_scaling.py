import math
from fractions import Fraction

import numpy as np
import pytest

from anisoradon.errors import DilationCapError
from anisoradon.scaling import (MultiIndex, Scale, Weights, aniso_ratio,
                                dilate, dilate_exact, isotropic_weights,
                                scaled_norm)


def test_dilate_identity_case():
    assert np.allclose(dilate(MultiIndex([1, 2]), 0, [3, 4]), [3, 4])


def test_dilate_direct_definition():
    assert np.allclose(dilate(MultiIndex([1, 2]), 1, [1, 1]), [2, 4])
    assert np.allclose(dilate(MultiIndex([1]), -3, [8]), [1])


def test_dilate_length_mismatch():
    with pytest.raises(ValueError):
        dilate(MultiIndex([1, 2]), 1, [1.0])


def test_dilate_group_law_exact():
    rng = np.random.default_rng(11)
    for _ in range(50):
        gamma = MultiIndex(rng.integers(-5, 6, size=3))
        j, k = int(rng.integers(-40, 41)), int(rng.integers(-40, 41))
        z = rng.standard_normal(3)
        once = dilate(gamma, j + k, z)
        twice = dilate(gamma, j, dilate(gamma, k, z))
        assert np.array_equal(once, twice)  # binary scaling is exact


def test_dilate_exact_matches_float():
    gamma = MultiIndex([2, -1])
    z = (Fraction(3, 4), Fraction(5, 8))
    exact = dilate_exact(gamma, 3, z)
    assert exact == (Fraction(3, 4) * 64, Fraction(5, 8) / 8)
    assert np.allclose(dilate(gamma, 3, [0.75, 0.625]),
                       [float(v) for v in exact])


def test_dilation_cap():
    with pytest.raises(DilationCapError):
        dilate(MultiIndex([10]), 100, [1.0])


def test_scaled_norm_euclidean_case():
    assert scaled_norm(Scale([0, 0]), [3, 4]) == pytest.approx(5.0)


def test_scaled_norm_direct_definition():
    assert scaled_norm(Scale([1, 0]), [3, 4]) == pytest.approx(math.sqrt(52))


def test_scaled_norm_zero_case():
    for k in (-7, 0, 13):
        assert scaled_norm(Scale([k]), [0.0]) == 0.0


def test_scaled_norm_recompute():
    rng = np.random.default_rng(5)
    for _ in range(30):
        s = Scale(rng.integers(-6, 7, size=4))
        v = rng.standard_normal(4)
        direct = math.sqrt(sum((2.0 ** si * vi) ** 2
                               for si, vi in zip(s, v)))
        assert scaled_norm(s, v) == pytest.approx(direct, rel=1e-14)


def test_scaled_norm_length_mismatch():
    with pytest.raises(ValueError):
        scaled_norm(Scale([1]), [1.0, 2.0])


def test_aniso_ratio_direct():
    assert aniso_ratio(MultiIndex([2, 3]), MultiIndex([1, 2])) == 2


def test_aniso_ratio_identity():
    g = MultiIndex([3, 5, 2])
    assert aniso_ratio(g, g) == 1


def test_aniso_ratio_negative_entry():
    # ratios are -1/2 and 1/2; the max is 1/2
    assert aniso_ratio(MultiIndex([-1, 4]), MultiIndex([2, 8])) == Fraction(1, 2)


def test_aniso_ratio_rejects_nonpositive_gamma():
    with pytest.raises(ValueError):
        aniso_ratio(MultiIndex([1]), MultiIndex([0]))


def test_aniso_ratio_componentwise_bound():
    rng = np.random.default_rng(17)
    for _ in range(50):
        delta = MultiIndex(rng.integers(-9, 10, size=4))
        gamma = MultiIndex(rng.integers(1, 7, size=4))
        rho = aniso_ratio(delta, gamma)
        assert all(d <= rho * g for d, g in zip(delta, gamma))
        assert any(d == rho * g for d, g in zip(delta, gamma))


def test_weights_validation():
    with pytest.raises(ValueError):
        Weights(MultiIndex([1, 0]), MultiIndex([1]), MultiIndex([1, 1]))
    with pytest.raises(ValueError):
        Weights(MultiIndex([1]), MultiIndex([1]), MultiIndex([1, 1]))


def test_weights_concatenations():
    w = Weights(MultiIndex([1, 2]), MultiIndex([3]), MultiIndex([4, 5]))
    bdd = MultiIndex([7])
    assert tuple(w.alpha) == (1, 2, 3)
    assert tuple(w.alpha_tilde(bdd)) == (1, 2, 7)
    assert tuple(w.beta(bdd)) == (4, 5, 7)
    assert w.n_prime == 2 and w.n_dprime == 1


def test_multiindex_order():
    assert MultiIndex([1, -3, 2]).order == 0
    assert isotropic_weights(3, 2).alpha_prime.order == 3
