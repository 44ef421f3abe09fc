"""Exact calculators for the three theorem statements.

Everything here is driven by five integers: the weight sums |alpha'|, |beta'|,
|beta''|, the codimension n'' and the Hessian rank r.  The Lebesgue-exponent
region lives in the (1/p, 1/q) unit square and is evaluated with exact
rational arithmetic; the only real-valued output is the genericity threshold
(a square root), which is reported with a directed-rounding honesty interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .errors import (DegenerateDenominator, HomogeneityViolation,
                     VanishingPrincipalPart, WeightOrderViolation)
from .polynomials import Polynomial, quasidegree_decompose
from .scaling import MultiIndex, Weights


@dataclass(frozen=True)
class OperatorSpec:
    """Complete description of one Radon-like averaging operator.

    ``s`` holds the n'' components of the shear polynomial S(x', x'', y');
    ``psi_radius`` is the plateau radius of the tensor cutoff used by the
    discretization (the cutoff is identically one on the box of that radius
    and supported on twice it).
    """

    weights: Weights
    beta_dprime: MultiIndex
    s: tuple[Polynomial, ...]
    psi_radius: float = 0.3

    def __post_init__(self):
        if len(self.beta_dprime) != self.weights.n_dprime:
            raise ValueError("beta'' length must equal n''")
        if any(b < 1 for b in self.beta_dprime):
            raise ValueError("beta'' entries must be positive")
        if len(self.s) != self.weights.n_dprime:
            raise ValueError("expected one S component per x'' coordinate")
        for poly in self.s:
            if (poly.n_prime, poly.n_dprime) != (self.n_prime, self.n_dprime):
                raise ValueError("S component dimensions do not match weights")
        if not self.psi_radius > 0:
            raise ValueError("psi_radius must be positive")

    @property
    def n_prime(self) -> int:
        return self.weights.n_prime

    @property
    def n_dprime(self) -> int:
        return self.weights.n_dprime

    def weight_sums(self) -> tuple[int, int, int]:
        """(|alpha'|, |beta'|, |beta''|)."""
        return (self.weights.alpha_prime.order, self.weights.beta_prime.order,
                self.beta_dprime.order)


def check_homogeneity(spec: OperatorSpec) -> tuple[Polynomial, ...]:
    """Validate the homogeneity conditions and return the principal parts.

    Succeeds iff the output weights strictly dominate the x''-weights, every
    monomial of every component sits at quasidegree >= its target (otherwise
    the rescaling limit diverges), and the graded parts at the target degrees
    are not all identically zero.
    """
    w = spec.weights
    for i, (b, a) in enumerate(zip(spec.beta_dprime, w.alpha_dprime)):
        if b <= a:
            raise WeightOrderViolation(
                f"beta''[{i}] = {b} must exceed alpha''[{i}] = {a}")
    principal = []
    any_nonzero = False
    for l, (poly, target) in enumerate(zip(spec.s, spec.beta_dprime)):
        decomp = quasidegree_decompose(poly, w)
        low = [d for d in decomp.parts if d < target]
        if low:
            raise HomogeneityViolation(
                f"component {l} has monomials at quasidegree {min(low)} "
                f"below the target {target}; the rescaling limit diverges")
        part = decomp.parts.get(target, Polynomial.zero(spec.n_prime,
                                                        spec.n_dprime))
        principal.append(part)
        any_nonzero = any_nonzero or not part.is_zero()
    if not any_nonzero:
        raise VanishingPrincipalPart(
            "every principal-part component is identically zero")
    return tuple(principal)


# -- Lebesgue exponent region -------------------------------------------------

Classification = Literal["strong", "restricted-weak", "outside"]


@dataclass(frozen=True)
class RieszRegion:
    """The exponent region of the L^p -> L^q theorem for one (sums, n'', r)."""

    alpha_prime_sum: int
    beta_prime_sum: int
    beta_dprime_sum: int
    n_dprime: int
    rank: int
    hypothesis_holds: bool
    alpha_tilde_sum: int
    beta_sum: int
    delta1: int
    delta2: int
    vertex1: tuple[Fraction, Fraction] | None
    vertex2: tuple[Fraction, Fraction] | None

    def condition1(self, inv_p: Fraction, inv_q: Fraction) -> tuple[Fraction, Fraction]:
        """(lhs, rhs) of |beta|/p - |alpha~|/q <= |beta'| at (1/p, 1/q)."""
        lhs = self.beta_sum * inv_p - self.alpha_tilde_sum * inv_q
        return lhs, Fraction(self.beta_prime_sum)

    def condition2(self, inv_p: Fraction, inv_q: Fraction) -> tuple[Fraction, Fraction]:
        """(lhs, rhs) of |1/p + 1/q - 1| <= 1 - (2n''+r)/r (1/p - 1/q)."""
        lhs = abs(inv_p + inv_q - 1)
        rhs = 1 - Fraction(2 * self.n_dprime + self.rank, self.rank) \
            * (inv_p - inv_q)
        return lhs, rhs


def riesz_region(alpha_prime_sum: int, beta_prime_sum: int,
                 beta_dprime_sum: int, n_dprime: int, rank: int) -> RieszRegion:
    """Exponent region with its two restricted-weak-type vertices.

    The vertices solve the balance system of the dyadic min-sum (the point
    where all three norm bounds coincide); they are exact rationals and are
    re-verified against both boundary conditions at equality before being
    returned.  When the rank hypothesis fails the region (without endpoint
    vertices) is still described.
    """
    if rank < 1 or n_dprime < 1:
        raise ValueError("rank and n'' must be positive")
    a_p, b_p, b_dd = alpha_prime_sum, beta_prime_sum, beta_dprime_sum
    at = a_p + b_dd
    bt = b_p + b_dd
    hypothesis = Fraction(rank, n_dprime) > Fraction(a_p + b_p, b_dd)
    delta1 = at * rank + (a_p - b_p) * n_dprime
    delta2 = bt * rank + (b_p - a_p) * n_dprime
    if not hypothesis:
        return RieszRegion(a_p, b_p, b_dd, n_dprime, rank, False, at, bt,
                           delta1, delta2, None, None)
    if delta1 <= 0 or delta2 <= 0:
        raise DegenerateDenominator(
            f"vertex denominators ({delta1}, {delta2}) must be positive "
            "under the rank hypothesis")
    v1 = (1 - Fraction(a_p * n_dprime, delta1),
          1 - Fraction(a_p * (n_dprime + rank), delta1))
    v2 = (Fraction(b_p * (n_dprime + rank), delta2),
          Fraction(b_p * n_dprime, delta2))
    region = RieszRegion(a_p, b_p, b_dd, n_dprime, rank, True, at, bt,
                         delta1, delta2, v1, v2)
    for v in (v1, v2):
        l1, r1 = region.condition1(*v)
        l2, r2 = region.condition2(*v)
        if l1 != r1 or l2 != r2:
            raise DegenerateDenominator(
                f"vertex {v} fails the boundary identities; this indicates "
                "an inconsistent parameter tuple")
    return region


def classify_pq(region: RieszRegion, inv_p: Fraction,
                inv_q: Fraction) -> Classification:
    """Classify an exponent pair against the region, exactly.

    Strong type requires both conditions with at most one equality;
    both-equalities is the restricted weak-type corner case.  When the rank
    hypothesis fails, equality in the first condition is excluded, so only
    strict points classify as strong.
    """
    inv_p, inv_q = Fraction(inv_p), Fraction(inv_q)
    if not (0 <= inv_p <= 1 and 0 <= inv_q <= 1):
        raise ValueError("exponent pair must lie in the unit square")
    l1, r1 = region.condition1(inv_p, inv_q)
    l2, r2 = region.condition2(inv_p, inv_q)
    if l1 > r1 or l2 > r2:
        return "outside"
    eq1, eq2 = l1 == r1, l2 == r2
    if not region.hypothesis_holds:
        return "outside" if eq1 else "strong"
    if eq1 and eq2:
        return "restricted-weak"
    return "strong"


# -- Sobolev smoothing ---------------------------------------------------------

@dataclass(frozen=True)
class SobolevBound:
    p: Fraction
    s_supremum: Fraction
    attained: bool
    binding_constraint: Literal["condition3", "condition4"]


def sobolev_smoothing(alpha_prime_sum: int, beta_prime_sum: int,
                      beta_dprime: MultiIndex, rank: int,
                      p: Fraction) -> SobolevBound:
    """Supremum of admissible Sobolev orders s at a fixed p in (1, oo).

    The order must satisfy a closed constraint s * max(beta'') <=
    |alpha'|/p + |beta'|(1 - 1/p) and an open one s/r < 1/2 - |1/2 - 1/p|;
    the supremum is attained only when the closed constraint binds strictly
    below the open one.
    """
    p = Fraction(p)
    if not p > 1:
        raise ValueError("p must lie in (1, oo)")
    inv_p = 1 / p
    bound3 = (alpha_prime_sum * inv_p + beta_prime_sum * (1 - inv_p)) \
        / max(beta_dprime)
    bound4 = rank * (Fraction(1, 2) - abs(Fraction(1, 2) - inv_p))
    if bound3 < bound4:
        return SobolevBound(p, bound3, True, "condition3")
    return SobolevBound(p, bound4, False, "condition4")


# -- genericity ----------------------------------------------------------------

@dataclass(frozen=True)
class GenericityReport:
    """The arithmetic quantities controlling generic Hessian rank.

    k1 is the lcm of the fixed weight entries, lambda_set the residues mod k1
    of the sums alpha'_i + beta'_j, and k2 their count.  The rank threshold
    n' - sqrt((1 - 1/k2) n'^2 + 2(n' + n'')) applies to every beta'' whose
    entries are congruent mod k1 to some residue in lambda_set; such beta''
    have lower density at least k1**(-n'').
    """

    n_prime: int
    n_dprime: int
    k1: int
    lambda_set: frozenset[int]
    k2: int
    density_lower_bound: Fraction

    def _radicand(self, n_prime: int, n_dprime: int) -> Fraction:
        return (Fraction(self.k2 - 1, self.k2) * n_prime ** 2
                + 2 * (n_prime + n_dprime))

    def threshold(self, n_prime: int | None = None,
                  n_dprime: int | None = None) -> float:
        n_p = self.n_prime if n_prime is None else n_prime
        n_d = self.n_dprime if n_dprime is None else n_dprime
        x = self._radicand(n_p, n_d)
        return n_p - math.sqrt(x.numerator / x.denominator)

    def threshold_interval(self, n_prime: int | None = None,
                           n_dprime: int | None = None) -> tuple[float, float]:
        """Honest enclosure of the threshold (sqrt bracketed by isqrt)."""
        n_p = self.n_prime if n_prime is None else n_prime
        n_d = self.n_dprime if n_dprime is None else n_dprime
        x = self._radicand(n_p, n_d)
        scale = 10 ** 17
        lo_i = math.isqrt(x.numerator * scale * scale // x.denominator)
        sqrt_lo = lo_i / scale
        sqrt_hi = (lo_i + 1) / scale
        return (math.nextafter(n_p - sqrt_hi, -math.inf),
                math.nextafter(n_p - sqrt_lo, math.inf))

    def threshold_exceeds(self, r: int, n_prime: int | None = None,
                          n_dprime: int | None = None) -> bool:
        """Exact test of r < threshold (no floating point)."""
        n_p = self.n_prime if n_prime is None else n_prime
        n_d = self.n_dprime if n_dprime is None else n_dprime
        if r >= n_p:
            return False
        return Fraction((n_p - r) ** 2) > self._radicand(n_p, n_d)

    def admissible(self, beta_dprime: MultiIndex) -> bool:
        return all(b % self.k1 in self.lambda_set for b in beta_dprime)


def genericity_report(w: Weights) -> GenericityReport:
    k1 = 1
    for e in (tuple(w.alpha_prime) + tuple(w.alpha_dprime)
              + tuple(w.beta_prime)):
        k1 = k1 * e // math.gcd(k1, e)
    residues = frozenset((a + b) % k1 for a in w.alpha_prime
                         for b in w.beta_prime)
    return GenericityReport(
        n_prime=w.n_prime, n_dprime=w.n_dprime, k1=k1, lambda_set=residues,
        k2=len(residues),
        density_lower_bound=Fraction(1, k1 ** w.n_dprime))


# -- numeric min-sum oracle for the vertices -----------------------------------

def minsum_vertex_regression(alpha_prime_sum: int, beta_prime_sum: int,
                             beta_dprime_sum: int, n_dprime: int, rank: int,
                             vertex: int, peaks: Sequence[tuple[int, int]] = (),
                             pad: int = 40) -> tuple[float, float]:
    """Fit the (|E|, |F|) exponents of the dyadic min-sum directly.

    Sums min{2^(j|b''|+k n'') E F, 2^(-j a) E or F, 2^(-j(a+b)/2 - k r/2)
    sqrt(E F)} over the (j, k) lattice for a family of (E, F) pairs chosen so
    the balance point sits at prescribed positive (j0, k0), then regresses
    log2 of the sum on (log2 E, log2 F).  Returns the fitted pair
    (E-exponent, F-exponent) = (1/p, 1 - 1/q); independent of the
    closed-form vertex solution.
    """
    a_p, b_p, b_dd = alpha_prime_sum, beta_prime_sum, beta_dprime_sum
    at, bt = a_p + b_dd, b_p + b_dd
    if vertex not in (1, 2):
        raise ValueError("vertex must be 1 or 2")
    if not peaks:
        peaks = [(j0, k0) for j0 in range(4, 13, 2) for k0 in range(6, 19, 3)]
    rows, targets = [], []
    jmax = max(j0 for j0, _ in peaks) + pad
    kmax = max(k0 for _, k0 in peaks) + pad
    jj, kk = np.meshgrid(np.arange(jmax + 1), np.arange(kmax + 1),
                         indexing="ij")
    for j0, k0 in peaks:
        if vertex == 1:
            v = -(j0 * at + k0 * n_dprime)
            u = v + j0 * (a_p - b_p) - k0 * rank
        else:
            u = -(j0 * bt + k0 * n_dprime)
            v = u - j0 * (a_p - b_p) - k0 * rank
        term1 = jj * b_dd + kk * n_dprime + u + v
        if vertex == 1:
            term2 = -jj * a_p + u
        else:
            term2 = -jj * b_p + v
        term3 = -jj * (a_p + b_p) / 2.0 - kk * rank / 2.0 + (u + v) / 2.0
        m = np.minimum(term1, np.minimum(term2, term3))
        peak = m.max()
        log_sum = peak + math.log2(np.sum(np.exp2(m - peak)))
        rows.append([u, v, 1.0])
        targets.append(log_sum)
    sol, *_ = np.linalg.lstsq(np.array(rows, dtype=float),
                              np.array(targets, dtype=float), rcond=None)
    return float(sol[0]), float(sol[1])
