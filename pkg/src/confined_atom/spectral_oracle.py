"""Brute-force sum-over-states oracle on a finite-difference grid.

The Hamiltonian -1/2 d^2/dx^2 - Z delta(x) is discretised on [-a, L] with
Dirichlet walls, the delta becoming -Z/h on the grid point at the origin.
The resulting symmetric tridiagonal matrix is small enough to diagonalise
completely at desk scale, which gives an answer that shares nothing with the
analytic routes except the Hamiltonian itself.

Computing all eigenvectors with LAPACK costs O(N^3) memory traffic, too slow
for the test matrix of the package. Only the dipole column x_{0n} is needed,
so the default route is:

* all eigenvalues with the root-free QL/QR iteration (``sterf``),
* the ground state by bisection plus inverse iteration,
* every excited state by the three-term recurrence of the matrix itself,
  started at the left wall. All excited states lie in the band of the free
  stencil, where the recurrence is oscillatory and hence stable; the result
  agrees with full LAPACK vectors to about 1e-10.

``diagonalize(model, vectors=True)`` keeps the full LAPACK route for small
grids and for orthonormality tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .bound_state import solve_bound_state, supports_bound_state
from .core import AtomConfig, ConfinedAtomError

DEFAULT_N = 8000
MIN_N = 500
DEFAULT_ISOLATED_HALF_WIDTH = 40.0
_CHUNK_BYTES = 64 * 2**20


class GridError(ConfinedAtomError, ValueError):
    pass


@dataclass(frozen=True)
class SpectralModel:
    """Grid, tridiagonal Hamiltonian and, once diagonalised, its spectrum.

    ``dipoles[n]`` is x_{0n} = h sum_i psi_0 x psi_n; ``dipoles[0]`` is <x>.
    ``eigenvectors`` (columns, normalised so that h sum psi^2 = 1) is only
    filled by the full LAPACK route.
    """

    x: np.ndarray
    h: float
    left: float
    right: float
    diagonal: np.ndarray
    off_diagonal: float
    eigenvalues: Optional[np.ndarray] = None
    ground: Optional[np.ndarray] = None
    dipoles: Optional[np.ndarray] = None
    eigenvectors: Optional[np.ndarray] = None

    @property
    def n_points(self) -> int:
        return self.x.size

    @property
    def diagonalized(self) -> bool:
        return self.eigenvalues is not None and self.dipoles is not None

    def matrix(self) -> np.ndarray:
        """Dense copy of the Hamiltonian (small grids only)."""
        n = self.n_points
        return (
            np.diag(self.diagonal)
            + np.diag(np.full(n - 1, self.off_diagonal), 1)
            + np.diag(np.full(n - 1, self.off_diagonal), -1)
        )


def default_box(cfg: AtomConfig) -> float:
    """Right edge L = max(40, 20/k_b) of the default box."""
    k = solve_bound_state(cfg).k_b if supports_bound_state(cfg) else cfg.Z
    return max(40.0, 20.0 / k)


def build_hamiltonian(cfg: AtomConfig, L: Optional[float] = None, N: int = DEFAULT_N) -> SpectralModel:
    """Tridiagonal Hamiltonian on N interior points of [-a, L].

    The spacing is chosen as a/n with n an integer so that x = 0 is a grid
    point; L is stretched (by less than one spacing per point) to fit N
    points. The isolated atom uses a symmetric box [-L, L].
    """
    if N < MIN_N:
        raise GridError(f"need at least {MIN_N} grid points, got {N}")
    if L is None:
        L = default_box(cfg)
    if not L > 0:
        raise GridError("box edge L must be positive")
    a = L if cfg.isolated else cfg.a
    n_left = int(round(a * (N + 1) / (a + L)))
    if n_left < 1 or n_left > N:
        raise GridError("grid must contain origin: wall distance below one grid spacing")
    h = a / n_left
    x = -a + h * np.arange(1, N + 1)
    i0 = n_left - 1
    if x[i0] != 0.0:
        # Rounding in -a + h*n; pin the site so the delta sits exactly at 0.
        if abs(x[i0]) > 1e-9 * h:
            raise GridError("grid must contain origin")
        x[i0] = 0.0
    diag = np.full(N, 1.0 / h**2)
    diag[i0] -= cfg.Z / h
    return SpectralModel(
        x=x, h=h, left=-a, right=h * (N + 1) - a, diagonal=diag, off_diagonal=-0.5 / h**2
    )


def _excited_dipoles(model: SpectralModel, energies: np.ndarray, ground: np.ndarray) -> np.ndarray:
    d, e, x = model.diagonal, model.off_diagonal, model.x
    n = x.size
    weight = ground * x
    out = np.empty(energies.size)
    chunk = max(1, _CHUNK_BYTES // (8 * 6))
    for start in range(0, energies.size, chunk):
        lam = energies[start:start + chunk]
        prev = np.zeros_like(lam)
        cur = np.ones_like(lam)
        norm = np.ones_like(lam)
        dip = weight[0] * cur
        for i in range(n - 1):
            nxt = ((lam - d[i]) * cur - e * prev) / e
            prev, cur = cur, nxt
            norm += cur * cur
            dip += weight[i + 1] * cur
        out[start:start + chunk] = dip * math.sqrt(model.h) / np.sqrt(norm)
    return out


def _fix_sign(v: np.ndarray) -> np.ndarray:
    # Deterministic phase: largest-magnitude entry positive.
    return v if v[np.argmax(np.abs(v))] >= 0 else -v


def diagonalize(model: SpectralModel, vectors: bool = False) -> SpectralModel:
    """Return a copy of ``model`` with eigenvalues, ground state and dipoles."""
    d, n = model.diagonal, model.n_points
    e = np.full(n - 1, model.off_diagonal)
    h = model.h
    if vectors:
        w, v = eigh_tridiagonal(d, e)
        v = v / math.sqrt(h)
        v = np.apply_along_axis(_fix_sign, 0, v)
        g = v[:, 0]
        dip = h * (g * model.x) @ v
        return replace(model, eigenvalues=w, ground=g, dipoles=dip, eigenvectors=v)
    w = eigvalsh_tridiagonal(d, e, lapack_driver="sterf")
    _, g = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    g = _fix_sign(g[:, 0]) / math.sqrt(h)
    # Eigenvalues below the band of the free stencil would make the left-wall
    # recurrence unstable; a single delta binds only one state.
    if n > 1 and w[1] < 0:
        raise ConfinedAtomError("more than one bound state on the grid; recurrence route unusable")
    dip = np.empty(n)
    dip[0] = h * np.sum(g * g * model.x)
    dip[1:] = _excited_dipoles(model, w[1:], g)
    return replace(model, eigenvalues=w, ground=g, dipoles=dip)


def spectral_model(cfg: AtomConfig, L: Optional[float] = None, N: int = DEFAULT_N, vectors: bool = False) -> SpectralModel:
    """Build and diagonalise in one call."""
    return diagonalize(build_hamiltonian(cfg, L, N), vectors=vectors)


def _require(model: SpectralModel) -> None:
    if not model.diagonalized:
        raise ValueError("model must be diagonalized first")


def static_alpha_oracle(model: SpectralModel) -> float:
    """2 sum_{n>0} |x_{0n}|^2 / (E_n - E_0)."""
    _require(model)
    w, x0n = model.eigenvalues, model.dipoles
    return float(2.0 * np.sum(x0n[1:] ** 2 / (w[1:] - w[0])))


def dynamic_alpha_oracle(model: SpectralModel, omega: float, eta: float) -> complex:
    """Kramers-Heisenberg sum with the drive frequency shifted to omega + i eta."""
    _require(model)
    if not eta > 0:
        raise ValueError("broadening eta must be positive")
    wc = complex(omega, eta)
    gap = model.eigenvalues[1:] - model.eigenvalues[0]
    s = model.dipoles[1:] ** 2
    return complex(np.sum(s / (gap - wc)) + np.sum(s / (gap + wc)))


def trk_sum(model: SpectralModel) -> float:
    """sum_n 2 (E_n - E_0) |x_{0n}|^2, equal to 1 for a complete dipole basis."""
    _require(model)
    return float(2.0 * np.sum((model.eigenvalues[1:] - model.eigenvalues[0]) * model.dipoles[1:] ** 2))


def dipole_completeness(model: SpectralModel) -> tuple:
    """(sum_n |x_{0n}|^2, <0|x^2|0>) for the closure sum rule."""
    _require(model)
    lhs = float(np.sum(model.dipoles**2))
    rhs = float(model.h * np.sum(model.ground**2 * model.x**2))
    return lhs, rhs
