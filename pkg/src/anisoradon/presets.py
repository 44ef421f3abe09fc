"""Worked operator instances used by the docs, tests and CLI examples."""

from __future__ import annotations

from fractions import Fraction

from .exponents import OperatorSpec
from .polynomials import Monomial, Polynomial
from .scaling import MultiIndex, isotropic_weights


def _poly(n_prime: int, n_dprime: int, *terms) -> Polynomial:
    monos = [Monomial(Fraction(c), tuple(ex), tuple(exx), tuple(ey))
             for c, ex, exx, ey in terms]
    return Polynomial.from_monomials(n_prime, n_dprime, monos)


def reference_spec(psi_radius: float = 0.3) -> OperatorSpec:
    """Parabola averages: S = (y'^2), all-ones weights, beta'' = (2).

    The workhorse example: |alpha'| = |beta'| = 1, |beta''| = 2, so the
    box-pair exponent is 4 and the first boundary line has coefficients
    (|beta|, |alpha~|, |beta'|) = (3, 3, 1).
    """
    s = _poly(1, 1, (1, [0], [0], [2]))
    return OperatorSpec(weights=isotropic_weights(1, 1),
                        beta_dprime=MultiIndex([2]), s=(s,),
                        psi_radius=psi_radius)


def rank_one_spec(psi_radius: float = 0.5) -> OperatorSpec:
    """Bilinear shear: S = (x' y'), all-ones weights, beta'' = (2).

    The mixed Hessian is the nonzero constant eta'', so the rank condition
    holds with r = 1 everywhere.
    """
    s = _poly(1, 1, (1, [1], [0], [1]))
    return OperatorSpec(weights=isotropic_weights(1, 1),
                        beta_dprime=MultiIndex([2]), s=(s,),
                        psi_radius=psi_radius)


def dual_contraction_spec(psi_radius: float = 0.3) -> OperatorSpec:
    """S = (x' y' + x''^2 y'): the x''-dependence makes the dual shear differ
    from the forward one at every finite scale, with deviation contracting
    by 1/2 per dyadic step."""
    s = _poly(1, 1, (1, [1], [0], [1]), (1, [0], [2], [1]))
    return OperatorSpec(weights=isotropic_weights(1, 1),
                        beta_dprime=MultiIndex([2]), s=(s,),
                        psi_radius=psi_radius)
