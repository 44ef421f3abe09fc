from fractions import Fraction

import numpy as np
import pytest

from anisoradon.errors import NoPrincipalPart
from anisoradon.polynomials import (Monomial, Polynomial, is_quasihomogeneous,
                                    lambda_basis, principal_part,
                                    quasidegree_decompose)
from anisoradon.scaling import MultiIndex, Weights, isotropic_weights

W11 = isotropic_weights(1, 1)


def poly(n_p, n_d, *terms):
    return Polynomial.from_monomials(
        n_p, n_d,
        [Monomial(Fraction(c), tuple(a), tuple(b), tuple(d))
         for c, a, b, d in terms])


def random_poly(rng, n_p, n_d, max_terms=6, max_exp=3):
    terms = []
    for _ in range(rng.integers(1, max_terms + 1)):
        coeff = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        if coeff == 0:
            coeff = Fraction(1)
        terms.append(Monomial(coeff,
                              tuple(int(v) for v in rng.integers(0, max_exp, n_p)),
                              tuple(int(v) for v in rng.integers(0, max_exp, n_d)),
                              tuple(int(v) for v in rng.integers(0, max_exp, n_p))))
    return Polynomial.from_monomials(n_p, n_d, terms)


def random_weights(rng, n_p, n_d):
    return Weights(MultiIndex(rng.integers(1, 4, size=n_p)),
                   MultiIndex(rng.integers(1, 4, size=n_d)),
                   MultiIndex(rng.integers(1, 4, size=n_p)))


# -- decomposition -------------------------------------------------------------

def test_decompose_two_buckets():
    p = poly(1, 1, (1, [1], [0], [1]), (1, [2], [0], [2]))
    d = quasidegree_decompose(p, W11)
    assert d.degrees() == [2, 4]
    assert d.parts[2] == poly(1, 1, (1, [1], [0], [1]))
    assert d.parts[4] == poly(1, 1, (1, [2], [0], [2]))


def test_decompose_mixed_blocks():
    p = poly(1, 1, (1, [0], [1], [0]), (1, [1], [0], [1]))
    d = quasidegree_decompose(p, W11)
    assert d.degrees() == [1, 2]
    assert d.parts[1] == poly(1, 1, (1, [0], [1], [0]))


def test_decompose_zero():
    assert quasidegree_decompose(Polynomial.zero(1, 1), W11).parts == {}


def test_decompose_reconstruction_random():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n_p, n_d = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        p = random_poly(rng, n_p, n_d)
        w = random_weights(rng, n_p, n_d)
        d = quasidegree_decompose(p, w)
        assert d.reconstruct(n_p, n_d) == p
        for deg, part in d.parts.items():
            assert is_quasihomogeneous(part, w, deg)


def test_bucket_scaling_law_random():
    # composing a bucket with the weight dilation multiplies it by 2**(j*l)
    rng = np.random.default_rng(3)
    for _ in range(20):
        n_p, n_d = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        p = random_poly(rng, n_p, n_d)
        w = random_weights(rng, n_p, n_d)
        for deg, part in quasidegree_decompose(p, w).parts.items():
            for j in range(-2, 3):
                assert part.dilated(w, j) == part * Fraction(2) ** (j * deg)


# -- principal part -------------------------------------------------------------

def test_principal_part_minimal_bucket():
    p = poly(1, 1, (1, [1], [0], [1]), (1, [2], [0], [2]))
    assert principal_part(p, W11) == (2, poly(1, 1, (1, [1], [0], [1])))


def test_principal_part_already_homogeneous():
    p = poly(1, 1, (3, [0], [0], [3]))
    assert principal_part(p, W11) == (3, p)


def test_principal_part_mixed():
    p = poly(1, 1, (1, [0], [1], [0]), (1, [1], [0], [1]))
    assert principal_part(p, W11) == (1, poly(1, 1, (1, [0], [1], [0])))


def test_principal_part_of_zero_raises():
    with pytest.raises(NoPrincipalPart):
        principal_part(Polynomial.zero(1, 1), W11)


# -- weighted monomial basis -----------------------------------------------------

def test_lambda_basis_degree_two():
    basis = lambda_basis(W11, 2)
    got = {(m.exp_x, m.exp_xx, m.exp_y) for m in basis}
    assert got == {((2,), (0,), (0,)), ((1,), (1,), (0,)), ((1,), (0,), (1,)),
                   ((0,), (2,), (0,)), ((0,), (1,), (1,)), ((0,), (0,), (2,))}
    assert len(basis) == 6
    assert all(m.coeff == 1 for m in basis)


def test_lambda_basis_degree_zero_and_one():
    assert [(m.exp_x, m.exp_xx, m.exp_y) for m in lambda_basis(W11, 0)] \
        == [((0,), (0,), (0,))]
    assert len(lambda_basis(W11, 1)) == 3


def test_lambda_basis_concentrated_at_target():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n_p, n_d = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        w = random_weights(rng, n_p, n_d)
        target = int(rng.integers(0, 7))
        for m in lambda_basis(w, target):
            p = Polynomial.from_monomials(n_p, n_d, [m])
            d = quasidegree_decompose(p, w)
            assert d.degrees() == [target]


def test_lambda_basis_deterministic_order():
    w = Weights(MultiIndex([1, 2]), MultiIndex([2]), MultiIndex([1, 3]))
    b1 = lambda_basis(w, 5)
    b2 = lambda_basis(w, 5)
    assert [(m.exp_x, m.exp_xx, m.exp_y) for m in b1] \
        == [(m.exp_x, m.exp_xx, m.exp_y) for m in b2]
    degs = [m.total_degree for m in b1]
    assert degs == sorted(degs)  # graded order


# -- calculus ---------------------------------------------------------------------

def test_partial_derivative_examples():
    p = poly(1, 1, (1, [2], [0], [1]))
    assert p.partial_derivative("x", 0) == poly(1, 1, (2, [1], [0], [1]))
    q = poly(1, 1, (1, [0], [1], [0]))
    assert q.partial_derivative("y", 0).is_zero()
    r = poly(1, 1, (1, [1], [0], [1]), (1, [0], [0], [3]))
    second = r.partial_derivative("x", 0).partial_derivative("y", 0)
    assert second == Polynomial.constant(1, 1, 1)


def test_partial_derivative_lowers_quasidegree():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n_p, n_d = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        w = random_weights(rng, n_p, n_d)
        target = int(rng.integers(2, 7))
        basis = lambda_basis(w, target)
        if not basis:
            continue
        p = Polynomial.from_monomials(n_p, n_d, basis[:3])
        for block, idx, wt in (("x", 0, w.alpha_prime[0]),
                               ("xx", 0, w.alpha_dprime[0]),
                               ("y", 0, w.beta_prime[0])):
            d = p.partial_derivative(block, idx)
            if not d.is_zero():
                assert is_quasihomogeneous(d, w, target - wt)


def test_evaluate_examples():
    p = poly(1, 1, (1, [1], [0], [1]), (1, [2], [0], [2]))
    assert p.evaluate([2], [0], [3]) == 42
    q = poly(1, 1, (5, [0], [0], [0]), (1, [1], [0], [1]))
    assert q.evaluate([0], [0], [0]) == 5
    r = poly(1, 1, (1, [1], [0], [1]))
    assert r.evaluate([Fraction(1, 3)], [0], [Fraction(3, 5)]) == Fraction(1, 5)


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError):
        poly(1, 1, (1, [1], [0], [0])).evaluate([1, 2], [0], [0])


def test_ring_ops_and_order():
    a = poly(1, 1, (1, [1], [0], [0]))
    b = poly(1, 1, (1, [0], [0], [1]))
    prod = a * b
    assert prod == poly(1, 1, (1, [1], [0], [1]))
    assert (a + b - a) == b
    assert (a * 0).is_zero()
    # canonical order: graded-lex on (total degree, exp_x, exp_xx, exp_y)
    c = poly(1, 1, (1, [0], [0], [2]), (1, [1], [0], [0]), (2, [0], [1], [1]))
    degrees = [m.total_degree for m in c.monomials()]
    assert degrees == sorted(degrees)
