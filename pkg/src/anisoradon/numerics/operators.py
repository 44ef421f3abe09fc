"""Discretized operator pieces: dyadic slabs of the averaging operator and
frequency-side multipliers.

The averaging pieces act on grid functions by midpoint quadrature of the
defining y'-integral, with the shifted argument x'' + S(x, y') evaluated by
periodic multilinear interpolation (in the x''-slot only; y' lands on grid
nodes).  Multilinear interpolation keeps the matrices entrywise nonnegative
wherever the cutoff is, which the box-counting experiments rely on.

Frequency multipliers are matrix-free: forward FFT, multiply by the exact
symbol at each discrete frequency, inverse FFT.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import DilationCapError
from ..exponents import OperatorSpec
from ..polynomials import Polynomial
from ..scaling import DILATION_EXPONENT_CAP, MultiIndex
from .cutoffs import band_annulus, phi0, phi_radial
from .grid import Grid


# -- operator containers -------------------------------------------------------

class SparseKernelOperator:
    """Explicit (sparse) matrix acting on flattened grid functions."""

    def __init__(self, grid: Grid, matrix: sp.spmatrix, meta: dict | None = None):
        self.grid = grid
        self.matrix = matrix.tocsr()
        self.meta = meta or {}
        self._csc = None

    @property
    def matrix_csc(self) -> sp.csc_matrix:
        if self._csc is None:
            self._csc = self.matrix.tocsc()
        return self._csc

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.T @ v

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


class FourierMultiplier:
    """Multiplication by a real symbol at each discrete frequency.

    ``ydd_block`` is set when the symbol depends on the y''-frequencies only;
    it stores that dependence as an array over the trailing n'' axes, which
    is what the streaming norm computations need.
    """

    def __init__(self, grid: Grid, symbol: np.ndarray,
                 ydd_block: np.ndarray | None = None,
                 meta: dict | None = None):
        if symbol.shape != grid.shape():
            raise ValueError("symbol shape does not match the grid")
        self.grid = grid
        self.symbol = symbol
        self.ydd_block = ydd_block
        self.meta = meta or {}
        self._flipped = None

    def apply(self, v: np.ndarray) -> np.ndarray:
        field = np.asarray(v, dtype=float).reshape(self.grid.shape())
        out = np.fft.ifftn(np.fft.fftn(field) * self.symbol)
        return out.real.ravel()

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        if self._flipped is None:
            flipped = self.symbol
            for ax in range(self.grid.dim):
                flipped = np.roll(np.flip(flipped, ax), 1, ax)
            self._flipped = flipped
        field = np.asarray(v, dtype=float).reshape(self.grid.shape())
        out = np.fft.ifftn(np.fft.fftn(field) * self._flipped)
        return out.real.ravel()

    def ydd_kernel_matrix(self) -> np.ndarray:
        """Dense convolution matrix of the y''-only factor (the y'-factor is
        the identity)."""
        if self.ydd_block is None:
            raise ValueError("symbol is not a pure y''-multiplier")
        n = self.grid.points_per_axis
        n_dd = self.ydd_block.ndim
        kernel = np.fft.ifftn(self.ydd_block).real
        idx = [np.arange(n)] * n_dd
        if n_dd == 1:
            a = idx[0][:, None] - idx[0][None, :]
            return kernel[a % n]
        if n ** (2 * n_dd) > 64_000_000:
            raise MemoryError("y''-kernel matrix too large to materialize")
        flat_a = np.arange(n ** n_dd)
        coords = np.unravel_index(flat_a, (n,) * n_dd)
        out = np.empty((n ** n_dd, n ** n_dd))
        for b in flat_a:
            bc = np.unravel_index(b, (n,) * n_dd)
            sel = tuple((ca - cb) % n for ca, cb in zip(coords, bc))
            out[:, b] = kernel[sel]
        return out

    def to_dense(self) -> np.ndarray:
        kernel = np.fft.ifftn(self.symbol).real
        shape = self.grid.shape()
        size = self.grid.size
        if size * size > 64_000_000:
            raise MemoryError("multiplier too large to materialize")
        flat = np.arange(size)
        coords = np.unravel_index(flat, shape)
        out = np.empty((size, size))
        for b in flat:
            bc = np.unravel_index(b, shape)
            sel = tuple((ca - cb) % self.grid.points_per_axis
                        for ca, cb in zip(coords, bc))
            out[:, b] = kernel[sel]
        return out


class ComposedOperator:
    """left o right, applied right-to-left."""

    def __init__(self, left, right, meta: dict | None = None):
        self.left = left
        self.right = right
        self.grid = left.grid
        self.meta = meta or {}

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.left.apply(self.right.apply(v))

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        return self.right.apply_transpose(self.left.apply_transpose(v))

    def to_dense(self) -> np.ndarray:
        right = self.right.to_dense()
        if isinstance(self.left, SparseKernelOperator):
            return self.left.matrix @ right
        return self.left.to_dense() @ right


# -- averaging-piece discretization --------------------------------------------

def _axis_weights(spec: OperatorSpec) -> list[int]:
    """Dilation weight of each mesh coordinate, order (x', x'', y')."""
    w = spec.weights
    return (list(w.alpha_prime) + list(w.alpha_dprime) + list(w.beta_prime))


def _eval_poly_mesh(poly: Polynomial, axes: Sequence[np.ndarray],
                    shape: tuple[int, ...]) -> np.ndarray:
    """Evaluate a polynomial on broadcast coordinate arrays."""
    total = np.zeros(shape)
    powcache: list[dict[int, np.ndarray]] = [dict() for _ in axes]

    def power(i: int, e: int) -> np.ndarray:
        cache = powcache[i]
        if e not in cache:
            cache[e] = axes[i] ** e
        return cache[e]

    for m in poly.monomials():
        term = None
        for i, e in enumerate(m.exp_x + m.exp_xx + m.exp_y):
            if e:
                term = power(i, e) if term is None else term * power(i, e)
        coeff = float(m.coeff)
        if term is None:
            total += coeff
        else:
            total += coeff * term
    return total


def _discretize(spec: OperatorSpec, grid: Grid, j: int,
                shell: bool) -> SparseKernelOperator:
    n_p, n_d = spec.n_prime, spec.n_dprime
    n = n_p + n_d
    if grid.dim != n:
        raise ValueError(f"grid dimension {grid.dim} != n' + n'' = {n}")
    weights = _axis_weights(spec)
    if (j + 1) * max(weights) > DILATION_EXPONENT_CAP:
        raise DilationCapError(f"slab index {j} exceeds the dilation cap")
    if j < 0:
        raise ValueError("slab index must be nonnegative")

    N = grid.points_per_axis
    h = grid.spacing
    L = grid.half_width
    rho = spec.psi_radius
    nodes = grid.nodes()
    ndims = n + n_p  # mesh dims: x' x'' then y'

    # per-axis windows limited by supp(psi) (2 rho) and the outer phi shell
    windows: list[np.ndarray] = []
    for c in range(ndims):
        wgt = weights[c] if c < n else weights[n + (c - n)]
        extent = min(2.0 * rho, np.ldexp(4.0 * rho, -j * wgt), L)
        idx = np.nonzero(np.abs(nodes) <= extent + 1e-12)[0]
        windows.append(idx)
    if any(len(w) == 0 for w in windows):
        empty = sp.csr_matrix((grid.size, grid.size))
        return SparseKernelOperator(grid, empty,
                                    meta={"j": j, "shell": shell, "empty": True})

    def shaped(arr: np.ndarray, dim: int) -> np.ndarray:
        return arr.reshape((1,) * dim + (-1,) + (1,) * (ndims - dim - 1))

    axes = [shaped(nodes[windows[c]], c) for c in range(ndims)]
    mesh_shape = tuple(len(w) for w in windows)

    def product_cutoff(scale_j: int | None) -> np.ndarray:
        out = np.ones(mesh_shape)
        for c in range(ndims):
            wgt = weights[c] if c < n else weights[n + (c - n)]
            t = axes[c]
            if scale_j is None:
                out = out * phi0(t / rho)
            else:
                out = out * phi0(np.ldexp(t, scale_j * wgt) / (2.0 * rho))
        return out

    psi = product_cutoff(None)
    if shell:
        cutoff = psi * (product_cutoff(j) - product_cutoff(j + 1))
    else:
        cutoff = psi * product_cutoff(j)

    mask = cutoff != 0.0
    if not mask.any():
        empty = sp.csr_matrix((grid.size, grid.size))
        return SparseKernelOperator(grid, empty,
                                    meta={"j": j, "shell": shell, "empty": True})

    # flat row index over the x-axes, flat y'-part of the column index
    row_flat = np.zeros(mesh_shape, dtype=np.int64)
    for c in range(n):
        row_flat = row_flat + shaped(windows[c].astype(np.int64), c) \
            * N ** (n - 1 - c)
    col_yprime = np.zeros(mesh_shape, dtype=np.int64)
    for i in range(n_p):
        c = n + i
        col_yprime = col_yprime + shaped(windows[c].astype(np.int64), c) \
            * N ** (n - 1 - i)

    # interpolation data per x''-slot
    corner_idx: list[tuple[np.ndarray, np.ndarray]] = []
    corner_wgt: list[tuple[np.ndarray, np.ndarray]] = []
    for l in range(n_d):
        s_vals = _eval_poly_mesh(spec.s[l], axes, mesh_shape)
        target = axes[n_p + l] + s_vals
        pos = (target + L) / h - 0.5
        i0 = np.floor(pos)
        frac = pos - i0
        i0 = i0.astype(np.int64) % N
        i1 = (i0 + 1) % N
        corner_idx.append((i0, i1))
        corner_wgt.append((1.0 - frac, frac))

    base_val = cutoff * h ** n_p
    rows_out, cols_out, vals_out = [], [], []
    for combo in itertools.product((0, 1), repeat=n_d):
        val = base_val
        col = col_yprime
        for l, side in enumerate(combo):
            val = val * corner_wgt[l][side]
            col = col + corner_idx[l][side] * N ** (n_d - 1 - l)
        rows_out.append(np.broadcast_to(row_flat, mesh_shape)[mask])
        cols_out.append(col[mask])
        vals_out.append(val[mask])

    coo = sp.coo_matrix(
        (np.concatenate(vals_out),
         (np.concatenate(rows_out), np.concatenate(cols_out))),
        shape=(grid.size, grid.size))
    return SparseKernelOperator(grid, coo.tocsr(),
                                meta={"j": j, "shell": shell})


def discretize_tj(spec: OperatorSpec, grid: Grid, j: int) -> SparseKernelOperator:
    """The j-th dyadic slab of the averaging operator (shell cutoff)."""
    return _discretize(spec, grid, j, shell=True)


def discretize_uj(spec: OperatorSpec, grid: Grid, j: int) -> SparseKernelOperator:
    """The tail operator: everything at scales j and beyond (ball cutoff)."""
    return _discretize(spec, grid, j, shell=False)


# -- frequency multipliers ------------------------------------------------------

def _scaled_ydd_radius(grid: Grid, n_prime: int, beta_dprime: MultiIndex,
                       j: int, extra_log2: int = 0) -> np.ndarray:
    """|2^(-j beta'') xi''| (times 2**extra_log2) on the y''-frequency axes."""
    freq = grid.frequencies()
    n_dd = len(beta_dprime)
    r2 = np.zeros((grid.points_per_axis,) * n_dd)
    for l, b in enumerate(beta_dprime):
        scaled = np.ldexp(freq, -j * b + extra_log2)
        r2 = r2 + scaled.reshape((1,) * l + (-1,) + (1,) * (n_dd - 1 - l)) ** 2
    return np.sqrt(r2)


def _broadcast_ydd(grid: Grid, n_prime: int, block: np.ndarray) -> np.ndarray:
    shape = (1,) * n_prime + block.shape
    return np.broadcast_to(block.reshape(shape), grid.shape()).copy()


def qj_multiplier(grid: Grid, n_prime: int, beta_dprime: MultiIndex,
                  j: int) -> FourierMultiplier:
    """Low-pass in xi'' at the anisotropic scale 2^(j beta'')."""
    block = phi_radial(_scaled_ydd_radius(grid, n_prime, beta_dprime, j))
    return FourierMultiplier(grid, _broadcast_ydd(grid, n_prime, block),
                             ydd_block=block, meta={"kind": "Qj", "j": j})


def pjk_multiplier(grid: Grid, n_prime: int, beta_dprime: MultiIndex,
                   j: int, k: int) -> FourierMultiplier:
    """Isotropic dyadic shell at radius 2^k on top of the Qj scaling."""
    rad = _scaled_ydd_radius(grid, n_prime, beta_dprime, j)
    block = phi_radial(np.ldexp(rad, -k - 1)) - phi_radial(np.ldexp(rad, -k))
    return FourierMultiplier(grid, _broadcast_ydd(grid, n_prime, block),
                             ydd_block=block,
                             meta={"kind": "Pjk", "j": j, "k": k})


def bessel_multiplier(grid: Grid, s: float, gamma: MultiIndex) -> FourierMultiplier:
    """Nonisotropic fractional-differentiation symbol.

    The dyadic sum is truncated at the first index whose difference term
    vanishes identically on the grid's frequency range; by construction every
    term is nonnegative for real s >= 0.
    """
    if len(gamma) != grid.dim:
        raise ValueError("gamma must have one entry per grid axis")
    if any(g < 1 for g in gamma):
        raise ValueError("gamma entries must be strictly positive")
    freq = grid.frequencies()

    def phi_prod_at(scale_j: int) -> np.ndarray:
        out = np.ones(grid.shape())
        for ax, g in enumerate(gamma):
            vals = phi0(np.ldexp(freq, -scale_j * g))
            out = out * vals.reshape((1,) * ax + (-1,)
                                     + (1,) * (grid.dim - ax - 1))
        return out

    prev = phi_prod_at(0)
    symbol = prev.copy()
    jj = 1
    while True:
        cur = phi_prod_at(jj)
        diff = cur - prev
        if not np.any(diff):
            break
        symbol = symbol + np.exp2(float(s) * jj) * diff
        prev = cur
        jj += 1
        if jj > 100000:  # unreachable: the grid frequency range is finite
            raise RuntimeError("dyadic sum failed to terminate")
    return FourierMultiplier(grid, symbol,
                             meta={"kind": "Bessel", "s": float(s),
                                   "gamma": tuple(gamma), "terms": jj - 1})


def plambda_multiplier(grid: Grid, n_prime: int, lam: float,
                       axis: int) -> FourierMultiplier:
    """Single-band projection onto lam <= |xi''_axis| <= 2 lam."""
    n_dd = grid.dim - n_prime
    if not 0 <= axis < n_dd:
        raise ValueError("axis out of range for the x''-block")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    freq = grid.frequencies()
    vals = band_annulus(freq / lam)
    block = np.broadcast_to(
        vals.reshape((1,) * axis + (-1,) + (1,) * (n_dd - 1 - axis)),
        (grid.points_per_axis,) * n_dd).copy()
    return FourierMultiplier(grid, _broadcast_ydd(grid, n_prime, block),
                             ydd_block=block,
                             meta={"kind": "Plambda", "lam": lam, "axis": axis})


def frequency_multiplier(kind: str, spec: OperatorSpec, grid: Grid,
                         **params) -> FourierMultiplier:
    """Tagged dispatcher mirroring the experiment configuration surface."""
    if kind == "Qj":
        return qj_multiplier(grid, spec.n_prime, spec.beta_dprime, params["j"])
    if kind == "Pjk":
        return pjk_multiplier(grid, spec.n_prime, spec.beta_dprime,
                              params["j"], params["k"])
    if kind == "Bessel":
        return bessel_multiplier(grid, params["s"], params["gamma"])
    if kind == "Plambda":
        return plambda_multiplier(grid, spec.n_prime, params["lam"],
                                  params["axis"])
    raise ValueError(f"unknown multiplier kind {kind!r}")
