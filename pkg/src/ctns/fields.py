"""Structured rectangular grids, discrete fields, and boundary-aware operators.

Scalars (cell population density, chemical signal) live at cell centers with
homogeneous Neumann boundaries; the velocity is face-staggered (MAC layout)
with homogeneous Dirichlet (no-slip) walls.  All reductions use numpy's
pairwise summation, so results are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FieldError(ValueError):
    """Invalid field data or incompatible grids."""


class SolverError(RuntimeError):
    """Iterative solver failed to reach its tolerance."""


# ============================================================
# Grid
# ============================================================

@dataclass(frozen=True)
class Grid:
    """Uniform box grid: `cells[i]` cells of spacing `h[i]` spanning `extents[i]`."""

    extents: tuple[float, ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        if len(self.extents) != len(self.cells):
            raise FieldError("extents and cells must have equal length")
        if len(self.cells) not in (2, 3):
            raise FieldError(f"dim must be 2 or 3, got {len(self.cells)}")
        if any(L <= 0 for L in self.extents):
            raise FieldError("extents must be positive")
        if any(int(n) != n or n < 4 for n in self.cells):
            raise FieldError("need at least 4 cells per direction")
        object.__setattr__(self, "extents", tuple(float(L) for L in self.extents))
        object.__setattr__(self, "cells", tuple(int(n) for n in self.cells))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.extents, self.cells))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    @property
    def volume(self) -> float:
        return float(np.prod(self.extents))

    def cell_centers(self, axis: int) -> np.ndarray:
        n, h = self.cells[axis], self.h[axis]
        return (np.arange(n) + 0.5) * h

    def face_coords(self, axis: int) -> np.ndarray:
        n, h = self.cells[axis], self.h[axis]
        return np.arange(n + 1) * h

    def face_shape(self, axis: int) -> tuple[int, ...]:
        shape = list(self.cells)
        shape[axis] += 1
        return tuple(shape)

    def meshgrid(self):
        axes = [self.cell_centers(ax) for ax in range(self.dim)]
        return np.meshgrid(*axes, indexing="ij")


# ============================================================
# Fields
# ============================================================

class ScalarField:
    """Cell-centered scalar with homogeneous Neumann boundary handling."""

    __slots__ = ("grid", "data")

    def __init__(self, grid: Grid, data: np.ndarray):
        data = np.asarray(data, dtype=np.float64)
        if data.shape != grid.shape:
            raise FieldError(f"data shape {data.shape} != grid shape {grid.shape}")
        self.grid = grid
        self.data = data

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "ScalarField":
        return cls(grid, np.asarray(fn(*grid.meshgrid()), dtype=np.float64))

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.data.copy())

    def check_finite(self):
        if not np.all(np.isfinite(self.data)):
            raise FieldError("non-finite values in scalar field")


class VectorField:
    """Face-staggered (MAC) velocity with no-slip walls.

    Component `ax` has shape `grid.face_shape(ax)`; the first/last slices along
    its own axis are wall-normal faces and are always held at zero.
    """

    __slots__ = ("grid", "components", "solenoidal")

    def __init__(self, grid: Grid, components, solenoidal: bool = False):
        if len(components) != grid.dim:
            raise FieldError("need one component per dimension")
        comps = []
        for ax, comp in enumerate(components):
            comp = np.asarray(comp, dtype=np.float64)
            if comp.shape != grid.face_shape(ax):
                raise FieldError(
                    f"component {ax} shape {comp.shape} != {grid.face_shape(ax)}")
            comps.append(comp)
        self.grid = grid
        self.components = comps
        self.solenoidal = solenoidal

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, [np.zeros(grid.face_shape(ax)) for ax in range(grid.dim)])

    @classmethod
    def from_stream(cls, grid: Grid, psi_fn) -> "VectorField":
        """2D: u = (d_y psi, -d_x psi) from corner samples; discretely divergence-free."""
        if grid.dim != 2:
            raise FieldError("from_stream is 2D only")
        hx, hy = grid.h
        x = grid.face_coords(0)[:, None]
        y = grid.face_coords(1)[None, :]
        psi = np.asarray(psi_fn(x, y), dtype=np.float64)
        ux = (psi[:, 1:] - psi[:, :-1]) / hy
        uy = -(psi[1:, :] - psi[:-1, :]) / hx
        v = cls(grid, [ux, uy], solenoidal=True)
        v.enforce_noslip_normal()
        return v

    def copy(self) -> "VectorField":
        return VectorField(self.grid, [c.copy() for c in self.components],
                           self.solenoidal)

    def enforce_noslip_normal(self):
        for ax, comp in enumerate(self.components):
            sl_lo = [slice(None)] * self.grid.dim
            sl_lo[ax] = 0
            sl_hi = [slice(None)] * self.grid.dim
            sl_hi[ax] = -1
            comp[tuple(sl_lo)] = 0.0
            comp[tuple(sl_hi)] = 0.0

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(c))) for c in self.components)

    def check_solenoidal(self, report: bool = False):
        """Check the divergence against the stored-field tolerance."""
        div = divergence(self).data
        dmax = float(np.max(np.abs(div)))
        tol = 1e-8 * max(self.max_abs(), 0.0) + 1e-14
        if report:
            return dmax, tol
        if dmax > tol:
            raise FieldError(f"divergence {dmax:.3e} exceeds tolerance {tol:.3e}")


# ============================================================
# Differential operators
# ============================================================

def gradient(f: ScalarField) -> list[np.ndarray]:
    """Centered differences at interior faces; Neumann walls give zero normal gradient."""
    grid = f.grid
    out = []
    for ax in range(grid.dim):
        g = np.zeros(grid.face_shape(ax))
        inner = [slice(None)] * grid.dim
        inner[ax] = slice(1, -1)
        lo = [slice(None)] * grid.dim
        lo[ax] = slice(None, -1)
        hi = [slice(None)] * grid.dim
        hi[ax] = slice(1, None)
        g[tuple(inner)] = (f.data[tuple(hi)] - f.data[tuple(lo)]) / grid.h[ax]
        out.append(g)
    return out


def divergence(u: VectorField) -> ScalarField:
    """Cell-centered flux differences; exact adjoint of `gradient` for no-slip data."""
    grid = u.grid
    out = np.zeros(grid.shape)
    for ax, comp in enumerate(u.components):
        hi = [slice(None)] * grid.dim
        hi[ax] = slice(1, None)
        lo = [slice(None)] * grid.dim
        lo[ax] = slice(None, -1)
        out += (comp[tuple(hi)] - comp[tuple(lo)]) / grid.h[ax]
    return ScalarField(grid, out)


def _pad_ghost(data: np.ndarray, bc: str) -> np.ndarray:
    # Neumann ghost mirrors the wall cell; Dirichlet ghost negates it so the
    # interpolated wall value is zero.
    if bc == "neumann":
        return np.pad(data, 1, mode="edge")
    if bc == "dirichlet":
        padded = np.pad(data, 1, mode="edge")
        dim = data.ndim
        for ax in range(dim):
            lo = [slice(1, -1)] * dim
            lo[ax] = 0
            lo_in = [slice(1, -1)] * dim
            lo_in[ax] = 1
            hi = [slice(1, -1)] * dim
            hi[ax] = -1
            hi_in = [slice(1, -1)] * dim
            hi_in[ax] = -2
            padded[tuple(lo)] = -padded[tuple(lo_in)]
            padded[tuple(hi)] = -padded[tuple(hi_in)]
        # corners are never touched by the 5/7-point stencil
        return padded
    raise FieldError(f"unknown boundary condition {bc!r}")


def laplacian_array(data: np.ndarray, h: tuple[float, ...], bc: str = "neumann") -> np.ndarray:
    """Standard 5/7-point Laplacian with ghost-cell boundary handling."""
    dim = data.ndim
    padded = _pad_ghost(data, bc)
    out = np.zeros_like(data)
    core = tuple([slice(1, -1)] * dim)
    for ax in range(dim):
        hi = [slice(1, -1)] * dim
        hi[ax] = slice(2, None)
        lo = [slice(1, -1)] * dim
        lo[ax] = slice(None, -2)
        out += (padded[tuple(hi)] - 2.0 * padded[core] + padded[tuple(lo)]) / h[ax] ** 2
    return out


def laplacian(f: ScalarField, bc: str = "neumann") -> ScalarField:
    return ScalarField(f.grid, laplacian_array(f.data, f.grid.h, bc))


def laplacian_solve(f_rhs: ScalarField, a: float, bc: str = "neumann",
                    tol: float = 1e-10, max_iters: int = 20000) -> ScalarField:
    """Solve (I - a*Lap)f = f_rhs by conjugate gradients.

    The operator is SPD for a >= 0; the Neumann solve preserves the mean of
    the right-hand side up to the solver residual.
    """
    if a < 0:
        raise FieldError("a must be nonnegative")
    grid = f_rhs.grid
    b = f_rhs.data
    if a == 0.0:
        return ScalarField(grid, b.copy())

    def apply_op(x):
        return x - a * laplacian_array(x, grid.h, bc)

    x = b.copy()
    r = b - apply_op(x)
    p = r.copy()
    rs = float(np.vdot(r, r))
    bnorm = float(np.sqrt(np.vdot(b, b)))
    if bnorm == 0.0:
        return ScalarField.zeros(grid)
    for _ in range(max_iters):
        if np.sqrt(rs) <= tol * bnorm:
            return ScalarField(grid, x)
        Ap = apply_op(p)
        alpha = rs / float(np.vdot(p, Ap))
        x += alpha * p
        r -= alpha * Ap
        rs_new = float(np.vdot(r, r))
        p = r + (rs_new / rs) * p
        rs = rs_new
    raise SolverError(
        f"CG did not reach tol {tol:g}; relative residual {np.sqrt(rs) / bnorm:.3e}")


# ============================================================
# Reductions
# ============================================================

def integrate(f: ScalarField) -> float:
    """Midpoint-rule cell sum."""
    return float(np.sum(f.data)) * f.grid.cell_volume


def lp_norm(f: ScalarField, p: float) -> float:
    if p < 1:
        raise FieldError("p must be >= 1")
    return float(np.sum(np.abs(f.data) ** p) * f.grid.cell_volume) ** (1.0 / p)


def linf_norm(f: ScalarField) -> float:
    return float(np.max(np.abs(f.data)))
