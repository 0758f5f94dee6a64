"""Quasi-norms of the lattice function spaces.

``mixed_norm`` is the plain weighted discrete mixed norm of an index array
(no Riemann factors), matching the discrete sequence spaces. The modulation
and Fourier-modulation norms apply it to the STFT table; the Wiener amalgam
norm glues local Riemann L^p norms with an outer l^q sum over partition cells.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .lattice import Grid, LatticeSignal, as_float_p, plateau_profile
from .transforms import stft
from .weights import MixedNormSpec, SeparableWeight


def _reduce_lp(arr: np.ndarray, p: float, axes: tuple[int, ...]) -> np.ndarray:
    """(sum |arr|^p over axes)^(1/p), sup for p = inf; arr is nonnegative."""
    if not axes:
        return arr
    if math.isinf(p):
        return arr.max(axis=axes)
    return (arr ** p).sum(axis=axes) ** (1.0 / p)


def mixed_norm(a: np.ndarray, spec: MixedNormSpec) -> float:
    """Weighted mixed norm with the leading ``inner_dims`` axes measured in l^p."""
    a = np.asarray(a)
    if a.ndim != spec.ambient_dim:
        raise ValueError(f"array has {a.ndim} axes, spec expects {spec.ambient_dim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("mixed norm requires finite entries")
    mags = np.abs(a).astype(float)
    if spec.weight is not None:
        mags = mags * _weight_mesh(spec.weight, a.shape)
    p = spec.p.value()
    q = spec.q.value()
    inner_axes = tuple(range(spec.inner_dims))
    inner = _reduce_lp(mags, p, inner_axes)
    outer = _reduce_lp(inner, q, tuple(range(inner.ndim)))
    return float(outer)


def _weight_mesh(w: SeparableWeight, shape: tuple[int, ...]) -> np.ndarray:
    """Weight table over an index grid, using signed (centered) representatives."""
    axes = []
    for n in shape:
        idx = np.arange(n)
        axes.append(np.where(idx < (n + 1) // 2, idx, idx - n))
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack(mesh, axis=-1).astype(float)
    return w.eval_mesh(coords)


def stft_mixed_norm(V: np.ndarray, d: int, p, q,
                    weight: SeparableWeight | None = None,
                    frequency_inner: bool = False) -> float:
    """Mixed norm of an STFT table with x inner (or xi inner when flagged)."""
    pf, qf = as_float_p(p), as_float_p(q)
    mags = np.abs(V).astype(float)
    if weight is not None:
        mags = mags * _weight_mesh(weight, V.shape)
    if frequency_inner:
        inner_axes = tuple(range(d, 2 * d))
    else:
        inner_axes = tuple(range(d))
    inner = _reduce_lp(mags, pf, inner_axes)
    return float(_reduce_lp(inner, qf, tuple(range(inner.ndim))))


def modulation_norm(f: LatticeSignal, window: LatticeSignal, p, q,
                    weight: SeparableWeight | None = None) -> float:
    """Mixed norm of V_window f with x inner (l^p) and xi outer (l^q)."""
    if not np.any(window.values):
        raise ValueError("window must not be identically zero")
    V = stft(f, window)
    return stft_mixed_norm(V, f.grid.d, p, q, weight)


def fourier_modulation_norm(f: LatticeSignal, window: LatticeSignal, p, q,
                            weight: SeparableWeight | None = None) -> float:
    """Mixed norm of V_window f(xi, -x): the modulation norm read after swapping
    the transform's arguments."""
    if not np.any(window.values):
        raise ValueError("window must not be identically zero")
    d = f.grid.d
    V = stft(f, window)
    # G(x-axes, xi-axes) = V(xi, -x)
    G = np.moveaxis(V, list(range(2 * d)), list(range(d, 2 * d)) + list(range(d)))
    G = np.flip(G, axis=tuple(range(d)))
    G = np.roll(G, shift=(1,) * d, axis=tuple(range(d)))  # index negation: -k = N - k
    return stft_mixed_norm(G, d, p, q, weight)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Smooth periodic partition sum_k sigma_0(. - k*step) = 1."""

    grid: Grid
    step: int
    sigma0: np.ndarray

    def __post_init__(self) -> None:
        if self.step < 1 or self.grid.N % self.step != 0:
            raise ValueError(f"step {self.step} must divide N = {self.grid.N}")
        arr = np.asarray(self.sigma0, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "sigma0", arr)

    @property
    def num_cells(self) -> int:
        return self.grid.N // self.step

    def member(self, k) -> np.ndarray:
        if isinstance(k, (int, np.integer)):
            k = (int(k),) * self.grid.d
        return np.roll(self.sigma0, shift=tuple(self.step * int(c) for c in k),
                       axis=tuple(range(self.grid.d)))

    def partition_sum(self) -> np.ndarray:
        acc = np.zeros(self.grid.shape)
        for k in itertools.product(range(self.num_cells), repeat=self.grid.d):
            acc = acc + self.member(k)
        return acc


def make_partition(grid: Grid, step: int) -> PartitionOfUnity:
    """Bump partition: plateau on the step cell, support inside 3/2 of it."""
    if step < 1 or grid.N % step != 0:
        raise ValueError(f"step {step} must divide N = {grid.N}")
    if grid.N // step < 2:
        raise ValueError("need at least two partition cells")
    axis = grid.centered_axis().astype(float)
    rho = np.ones(grid.shape)
    for ax in range(grid.d):
        shape = [1] * grid.d
        shape[ax] = grid.N
        prof = plateau_profile(axis / step, plateau=0.5, support=0.75)
        rho = rho * prof.reshape(shape)
    total = np.zeros(grid.shape)
    for k in itertools.product(range(grid.N // step), repeat=grid.d):
        total = total + np.roll(rho, shift=tuple(step * int(c) for c in k),
                                axis=tuple(range(grid.d)))
    return PartitionOfUnity(grid, step, rho / total)


def default_partition_step(grid: Grid) -> int:
    """Divisor of N closest to one physical unit (1/alpha indices)."""
    target = 1.0 / grid.alpha
    divisors = [s for s in range(1, grid.N // 2 + 1) if grid.N % s == 0]
    return min(divisors, key=lambda s: (abs(s - target), s))


def wiener_amalgam_norm(f: LatticeSignal, part: PartitionOfUnity, p, q,
                        mu: SeparableWeight | None = None) -> float:
    """( sum_k ||sigma_k f||_p^q mu(k)^q )^(1/q), sup over cells for q = inf."""
    if part.grid != f.grid:
        raise ValueError("partition and signal grids differ")
    pf, qf = as_float_p(p), as_float_p(q)
    d = f.grid.d
    n_cells = part.num_cells
    half = (n_cells + 1) // 2
    locals_ = []
    weights = []
    for k in itertools.product(range(n_cells), repeat=d):
        piece = LatticeSignal(f.grid, f.values * part.member(k))
        locals_.append(piece.lp_norm(pf))
        if mu is not None:
            centered = tuple(c if c < half else c - n_cells for c in k)
            weights.append(mu(np.array(centered, dtype=float)))
    arr = np.asarray(locals_)
    if mu is not None:
        arr = arr * np.asarray(weights)
    if math.isinf(qf):
        return float(arr.max())
    return float((arr ** qf).sum() ** (1.0 / qf))
