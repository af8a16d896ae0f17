"""Exact fast solvers for the implicit sub-steps on uniform box grids.

The 5/7-point Neumann Laplacian at cell centers is diagonalized by the DCT-II
basis, and each staggered velocity component (zero wall-normal faces, ghost
reflection for the tangential walls) by a mixed DST-I/DST-II basis.  The
transform solves therefore return the exact solution of the discrete system
up to rounding, which the per-step residual contracts rely on.
"""

from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from .fields import Grid


def _neumann_eigs_1d(n: int, h: float) -> np.ndarray:
    k = np.arange(n)
    return (2.0 * np.cos(np.pi * k / n) - 2.0) / h**2


def _dirichlet_node_eigs_1d(n: int, h: float) -> np.ndarray:
    # interior face nodes 1..n-1, zero at both walls (DST-I modes)
    k = np.arange(1, n)
    return (2.0 * np.cos(np.pi * k / n) - 2.0) / h**2


def _dirichlet_half_eigs_1d(n: int, h: float) -> np.ndarray:
    # cell-center nodes with ghost reflection (wall value zero, DST-II modes)
    k = np.arange(1, n + 1)
    return (2.0 * np.cos(np.pi * k / n) - 2.0) / h**2


def _broadcast_sum(eigs: list[np.ndarray]) -> np.ndarray:
    dim = len(eigs)
    total = np.zeros(tuple(len(e) for e in eigs))
    for ax, e in enumerate(eigs):
        shape = [1] * dim
        shape[ax] = len(e)
        total = total + e.reshape(shape)
    return total


class SpectralSolver:
    """Cached transform plans and eigenvalues for one grid."""

    def __init__(self, grid: Grid):
        self.grid = grid
        h = grid.h
        self._neu_eigs = _broadcast_sum(
            [_neumann_eigs_1d(n, h[ax]) for ax, n in enumerate(grid.cells)])
        # per velocity component: own axis uses interior DST-I nodes,
        # the other axes use half-offset DST-II nodes
        self._vel_eigs = []
        for comp in range(grid.dim):
            eigs = []
            for ax, n in enumerate(grid.cells):
                if ax == comp:
                    eigs.append(_dirichlet_node_eigs_1d(n, h[ax]))
                else:
                    eigs.append(_dirichlet_half_eigs_1d(n, h[ax]))
            self._vel_eigs.append(_broadcast_sum(eigs))

    # --------------------------------------------------------
    # Neumann scalar solves (cell-centered)
    # --------------------------------------------------------

    def solve_helmholtz_neumann(self, rhs: np.ndarray, a: float) -> np.ndarray:
        """Solve (I - a*Lap_N) f = rhs exactly.

        The solve is done on the fluctuation around the mean so the mean of
        the output matches the mean of the input to near machine precision
        (the mass-conservation monitors depend on this).
        """
        if a == 0.0:
            return rhs.copy()
        mean = rhs.mean()
        fluct = rhs - mean
        coeff = sfft.dctn(fluct, type=2)
        coeff /= (1.0 - a * self._neu_eigs)
        out = sfft.idctn(coeff, type=2)
        out += mean
        return out

    def solve_poisson_neumann(self, rhs: np.ndarray) -> np.ndarray:
        """Solve Lap_N f = rhs with the zero-mean gauge; the k=0 mode is dropped."""
        coeff = sfft.dctn(rhs, type=2)
        eigs = self._neu_eigs.copy()
        flat0 = (0,) * self.grid.dim
        eigs[flat0] = 1.0
        coeff /= eigs
        coeff[flat0] = 0.0
        return sfft.idctn(coeff, type=2)

    # --------------------------------------------------------
    # No-slip velocity component solves (face-staggered)
    # --------------------------------------------------------

    def _component_interior(self, comp: int):
        sl = [slice(None)] * self.grid.dim
        sl[comp] = slice(1, -1)
        return tuple(sl)

    def solve_helmholtz_velocity(self, comp: int, rhs: np.ndarray, a: float) -> np.ndarray:
        """Solve (I - a*Lap_D) v = rhs for one velocity component, walls at zero.

        `rhs` is the full face array; wall-normal boundary faces are ignored and
        the result has zeros there.
        """
        out = np.zeros_like(rhs)
        interior = rhs[self._component_interior(comp)]
        if a == 0.0:
            out[self._component_interior(comp)] = interior
            return out
        coeff = interior
        for ax in range(self.grid.dim):
            t = 1 if ax == comp else 2
            coeff = sfft.dst(coeff, type=t, axis=ax)
        coeff = coeff / (1.0 - a * self._vel_eigs[comp])
        for ax in range(self.grid.dim):
            t = 1 if ax == comp else 2
            coeff = sfft.idst(coeff, type=t, axis=ax)
        out[self._component_interior(comp)] = coeff
        return out
