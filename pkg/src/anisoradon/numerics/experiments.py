"""Decay-law measurements, box-pair (Knapp) integrals, duality checks and the
grid-level operator identities.

The decay tables measure norms of the dyadic pieces T_j Q_j and T_j P_jk and
fit log2(norm) against the slab index; comparisons against the predicted
exponents happen in the caller (tests, CLI).  Each row carries a resolution
flag: a frequency projection is only meaningful while its symbol support fits
inside the grid's frequency range, and fits of frequency-side growth laws
must be restricted to the resolved rows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError, ResolutionError, SingularMapError
from ..exponents import OperatorSpec, check_homogeneity
from .cutoffs import phi0, phi_radial
from .grid import Grid
from .norms import decay_slope, normalize_pair, operator_norm
from .operators import (ComposedOperator, _broadcast_ydd, _eval_poly_mesh,
                        _scaled_ydd_radius, discretize_tj, discretize_uj,
                        pjk_multiplier, qj_multiplier)

BOX_UNDERFLOW = 2.0 ** -40


# -- resolution flags -----------------------------------------------------------

def q_resolved(grid: Grid, beta_dprime, j: int) -> bool:
    """True when the Qj symbol support (radius 2^(j max beta'')) sits inside
    the grid's frequency range."""
    return np.ldexp(1.0, j * max(beta_dprime)) <= grid.max_frequency


def p_shell_resolved(grid: Grid, beta_dprime, j: int, k: int) -> bool:
    """True when the Pjk shell (outer radius 2^(j max beta'' + k + 1)) sits
    inside the grid's frequency range."""
    return np.ldexp(1.0, j * max(beta_dprime) + k + 1) <= grid.max_frequency


# -- decay tables ----------------------------------------------------------------

@dataclass(frozen=True)
class DecayRow:
    family: str          # "TjQj" or "TjPjk"
    j: int
    k: int | None
    pair: str
    value: float
    resolved: bool
    context: str


def _predicted_context(spec: OperatorSpec, family: str, pair: str,
                       rank: int | None) -> str:
    a_p, b_p, b_dd = spec.weight_sums()
    n_dd = spec.n_dprime
    if pair == "11":
        return f"j-slope<=-|alpha'|={-a_p}"
    if pair == "oooo":
        return f"j-slope<=-|beta'|={-b_p}"
    if pair == "1oo":
        if family == "TjQj":
            return f"j-slope=+|beta''|={b_dd}"
        return f"j-slope=+|beta''|={b_dd};k-slope=+n''={n_dd}"
    if pair == "22":
        base = f"j-slope<=-(|alpha'|+|beta'|)/2={-(a_p + b_p) / 2}"
        if family == "TjPjk" and rank is not None:
            base += f";k-slope<=-r/2={-rank / 2}"
        return base
    return ""


def _norm_with_flag(comp, pair: str, tol: float) -> tuple[float, str]:
    """Norm value plus a flag when power iteration stopped at its cap
    (the last iterate is still reported, as a bound estimate)."""
    try:
        return operator_norm(comp, pair, tol=tol), ""
    except NumericalError as exc:
        if exc.last_value is None:
            raise
        return float(exc.last_value), ";unconverged"


def decay_table(spec: OperatorSpec, grid: Grid, jmax: int, kmax: int = 0,
                pairs: tuple[str, ...] = ("11", "oooo", "1oo"),
                families: tuple[str, ...] = ("TjQj",),
                rank: int | None = None, jmin: int = 1,
                power_tol: float = 1e-6) -> list[DecayRow]:
    """Measure norms of the dyadic pieces over a (j, k) range."""
    pairs = tuple(normalize_pair(p) for p in pairs)
    rows: list[DecayRow] = []
    for j in range(jmin, jmax + 1):
        tj = discretize_tj(spec, grid, j)
        if "TjQj" in families:
            qj = qj_multiplier(grid, spec.n_prime, spec.beta_dprime, j)
            comp = ComposedOperator(tj, qj)
            res = q_resolved(grid, spec.beta_dprime, j)
            for pair in pairs:
                value, flag = _norm_with_flag(comp, pair, power_tol)
                ctx = _predicted_context(spec, "TjQj", pair, rank) + flag
                rows.append(DecayRow("TjQj", j, None, pair, value, res, ctx))
        if "TjPjk" in families:
            for k in range(kmax + 1):
                pjk = pjk_multiplier(grid, spec.n_prime, spec.beta_dprime,
                                     j, k)
                comp = ComposedOperator(tj, pjk)
                res = p_shell_resolved(grid, spec.beta_dprime, j, k)
                for pair in pairs:
                    value, flag = _norm_with_flag(comp, pair, power_tol)
                    ctx = _predicted_context(spec, "TjPjk", pair, rank) + flag
                    rows.append(DecayRow("TjPjk", j, k, pair, value, res,
                                         ctx))
    return rows


def fit_decay_rows(rows: list[DecayRow], family: str, pair: str,
                   over: str = "j", fixed_j: int | None = None,
                   resolved_only: bool = False,
                   drop_zero: bool = True):
    """Least-squares slope of log2(norm) in j (or in k at fixed j)."""
    pair = normalize_pair(pair)
    samples = []
    for row in rows:
        if row.family != family or row.pair != pair:
            continue
        if resolved_only and not row.resolved:
            continue
        if over == "j":
            if row.k not in (None, 0):
                continue
            idx = row.j
        elif over == "k":
            if fixed_j is None or row.j != fixed_j or row.k is None:
                continue
            idx = row.k
        else:
            raise ValueError("over must be 'j' or 'k'")
        if drop_zero and row.value == 0.0:
            continue
        samples.append((idx, row.value))
    return decay_slope(samples)


# -- operator identities -----------------------------------------------------------

def partition_check(grid: Grid, n_prime: int, beta_dprime, j: int,
                    kmax: int) -> dict:
    """Telescoping of Qj + sum_k Pjk against the widened low-pass, and
    against the identity once the widened support covers the grid."""
    qj = qj_multiplier(grid, n_prime, beta_dprime, j)
    total = qj.symbol.copy()
    for k in range(kmax + 1):
        total = total + pjk_multiplier(grid, n_prime, beta_dprime, j, k).symbol
    # the telescoped sum equals the low-pass widened by 2^(kmax+1)
    rad = _scaled_ydd_radius(grid, n_prime, beta_dprime, j)
    block = phi_radial(np.ldexp(rad, -(kmax + 1)))
    widened_sym = _broadcast_ydd(grid, n_prime, block)
    telescope_dev = float(np.abs(total - widened_sym).max())
    covers = np.ldexp(1.0, kmax + j * min(beta_dprime)) \
        >= 2.0 * grid.max_frequency
    identity_dev = float(np.abs(total - 1.0).max()) if covers else None
    return {"telescope_deviation": telescope_dev,
            "covers_grid": bool(covers),
            "identity_deviation": identity_dev}


def summation_by_parts_residual(spec: OperatorSpec, grid: Grid, n_terms: int,
                                n_vectors: int = 20, seed: int = 0) -> float:
    """Max deviation, on random unit vectors, between
    sum_{j<=N} T_j Q_j and U_0 Q_0 - U_{N+1} Q_N + sum_{1<=j<=N} U_j (Q_j - Q_{j-1})."""
    tjs = [discretize_tj(spec, grid, j) for j in range(n_terms + 1)]
    ujs = [discretize_uj(spec, grid, j) for j in range(n_terms + 2)]
    qjs = [qj_multiplier(grid, spec.n_prime, spec.beta_dprime, j)
           for j in range(n_terms + 1)]
    rng = np.random.Generator(np.random.Philox(
        key=np.array([np.uint64(seed), np.uint64(7)], dtype=np.uint64)))
    worst = 0.0
    for _ in range(n_vectors):
        v = rng.standard_normal(grid.size)
        v /= np.linalg.norm(v)
        lhs = np.zeros(grid.size)
        for j in range(n_terms + 1):
            lhs += tjs[j].apply(qjs[j].apply(v))
        q_last = qjs[n_terms].apply(v)
        rhs = ujs[0].apply(qjs[0].apply(v)) - ujs[n_terms + 1].apply(q_last)
        for j in range(1, n_terms + 1):
            rhs += ujs[j].apply(qjs[j].apply(v) - qjs[j - 1].apply(v))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


# -- box-pair (Knapp) integrals ------------------------------------------------------

def knapp_integral(spec: OperatorSpec, t: float, epsilon_box: float = 0.5,
                   nodes_per_axis: int = 16) -> float:
    """Quadrature of <chi_F, T chi_E> for the anisotropic box pair at
    parameter t <= -1.

    The boxes have side lengths epsilon_box * 2^(alpha~_i t) (the x-side) and
    epsilon_box * 2^(beta_i t) (the function-side); the quadrature lives at
    the box scale (midpoint nodes per axis), not on any fixed global grid,
    because the sides collapse as t -> -infinity.
    """
    if t > -1:
        raise ValueError("the box parameter t must be <= -1")
    if not 0 < epsilon_box <= 1:
        raise ValueError("epsilon_box must lie in (0, 1]")
    w = spec.weights
    n_p, n_d = spec.n_prime, spec.n_dprime
    # side lengths per quadrature axis: x' (alpha'), x'' (beta''), y' (beta')
    sides = ([epsilon_box * 2.0 ** (a * t) for a in w.alpha_prime]
             + [epsilon_box * 2.0 ** (b * t) for b in spec.beta_dprime]
             + [epsilon_box * 2.0 ** (b * t) for b in w.beta_prime])
    if min(sides) < BOX_UNDERFLOW:
        raise ResolutionError(
            f"box side underflow below 2^-40 at t={t}")
    axes = []
    ndims = 2 * n_p + n_d
    for d, side in enumerate(sides):
        pts = (np.arange(nodes_per_axis) + 0.5) / nodes_per_axis - 0.5
        arr = (pts * side).reshape((1,) * d + (-1,) + (1,) * (ndims - d - 1))
        axes.append(arr)
    shape = (nodes_per_axis,) * ndims

    integrand = np.ones(shape)
    rho = spec.psi_radius
    for d in range(ndims):
        integrand = integrand * phi0(axes[d] / rho)
    for l in range(n_d):
        s_vals = _eval_poly_mesh(spec.s[l], axes, shape)
        target = axes[n_p + l] + s_vals
        half = epsilon_box * 2.0 ** (spec.beta_dprime[l] * t) / 2.0
        integrand = integrand * (np.abs(target) <= half)
    volume = 1.0
    for side in sides:
        volume *= side
    return float(integrand.mean() * volume)


def knapp_exponent_table(spec: OperatorSpec, t_min: int, t_max: int,
                         epsilon_box: float = 0.5,
                         nodes_per_axis: int = 16) -> list[dict]:
    """Successive-ratio estimates of the box-pair scaling exponent.

    Row at t reports value(t) and the implied exponent
    log2(value(t) / value(t-1)), to be compared against
    |alpha'| + |beta'| + |beta''|.
    """
    if t_max > -1 or t_min > t_max:
        raise ValueError("need t_min <= t_max <= -1")
    values = {t: knapp_integral(spec, t, epsilon_box, nodes_per_axis)
              for t in range(t_min - 1, t_max + 1)}
    rows = []
    for t in range(t_min, t_max + 1):
        v, vm = values[t], values[t - 1]
        implied = math.log2(v / vm) if vm > 0 and v > 0 else float("nan")
        rows.append({"t": t, "value": v, "implied_exponent": implied})
    return rows


# -- duality ----------------------------------------------------------------------

def _newton_invert_shear(spec: OperatorSpec, xp: np.ndarray, yp: np.ndarray,
                         target: np.ndarray, tol: float = 1e-12,
                         max_steps: int = 50) -> np.ndarray:
    """Solve x'' + S(x', x'', y') = target for x'' by Newton iteration."""
    n_d = spec.n_dprime
    partials = [[spec.s[l].partial_derivative("xx", m) for m in range(n_d)]
                for l in range(n_d)]
    xdd = target.copy()
    for _ in range(max_steps):
        s_val = np.array([float(spec.s[l].evaluate(xp, xdd, yp))
                          for l in range(n_d)])
        residual = xdd + s_val - target
        if np.max(np.abs(residual)) <= tol:
            return xdd
        jac = np.eye(n_d)
        for l in range(n_d):
            for m in range(n_d):
                jac[l, m] += float(partials[l][m].evaluate(xp, xdd, yp))
        try:
            step = np.linalg.solve(jac, residual)
        except np.linalg.LinAlgError as exc:
            raise SingularMapError(f"singular shear Jacobian: {exc}") from exc
        xdd = xdd - step
        if not np.all(np.isfinite(xdd)):
            raise SingularMapError("Newton iterate diverged")
    raise SingularMapError(
        f"Newton inversion did not reach tolerance {tol} in {max_steps} steps")


def dual_principal_check(spec: OperatorSpec, j: int, sample_points: int,
                         seed: int = 0, box: float = 0.5) -> float:
    """Max deviation between the rescaled dual shear and minus the principal
    part.

    For each sample (x', y'', y') the forward shear is inverted by Newton
    iteration at the dilated scale, the dual shear
    S*(x', y'', y') = -S(x', Phi^{-1}(y''), y') is formed, and the deviation
    | 2^(j beta'') S*(2^(-j alpha') x', 2^(-j alpha'') y'', 2^(-j beta') y')
      + S^P(x', y'', y') | is maximized over the samples.
    """
    principal = check_homogeneity(spec)
    w = spec.weights
    n_p, n_d = spec.n_prime, spec.n_dprime
    rng = np.random.Generator(np.random.Philox(
        key=np.array([np.uint64(seed), np.uint64(11)], dtype=np.uint64)))
    worst = 0.0
    for _ in range(sample_points):
        xp = rng.uniform(-box, box, size=n_p)
        ydd = rng.uniform(-box, box, size=n_d)
        yp = rng.uniform(-box, box, size=n_p)
        xp_s = np.ldexp(xp, [-j * a for a in w.alpha_prime])
        ydd_s = np.ldexp(ydd, [-j * a for a in w.alpha_dprime])
        yp_s = np.ldexp(yp, [-j * b for b in w.beta_prime])
        xdd_sol = _newton_invert_shear(spec, xp_s, yp_s, ydd_s)
        for l in range(n_d):
            dual = -float(spec.s[l].evaluate(xp_s, xdd_sol, yp_s))
            scaled = np.ldexp(dual, j * spec.beta_dprime[l])
            ref = float(principal[l].evaluate(xp, ydd, yp))
            worst = max(worst, abs(scaled + ref))
    return worst
