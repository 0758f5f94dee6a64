"""Periodic lattice grids and complex-valued signals on them.

A signal lives on (Z mod N)^d with physical grid spacing ``alpha``; index k
corresponds to the point alpha*k. The dual grid (where discrete Fourier
transforms land) has spacing ``beta = 1/(alpha*N)``, so that one period covers
exactly the reciprocal cell. On a *balanced* grid alpha = N**-0.5 and the two
spacings coincide.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


def as_float_p(p) -> float:
    """Coerce an exponent-like argument to a float in (0, inf]."""
    from .exponents import ExtendedExponent

    if isinstance(p, ExtendedExponent):
        return p.value()
    if isinstance(p, str):
        return ExtendedExponent.from_value(p).value()
    p = float(p)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    return p


@dataclass(frozen=True)
class Grid:
    """A periodic lattice (Z mod N)^d with spacing alpha."""

    d: int
    N: int
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.N < 1:
            raise ValueError(f"period must be >= 1, got {self.N}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"grid spacing must be positive and finite, got {self.alpha}")

    @classmethod
    def balanced(cls, d: int, N: int) -> "Grid":
        """Grid with alpha = N**-0.5, making time and frequency spacings equal."""
        return cls(d, N, N ** -0.5)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def size(self) -> int:
        return self.N ** self.d

    @property
    def beta(self) -> float:
        """Dual grid spacing 1/(alpha*N)."""
        return 1.0 / (self.alpha * self.N)

    @property
    def cell_measure(self) -> float:
        """Riemann weight alpha^d of one lattice cell."""
        return self.alpha ** self.d

    @property
    def extent(self) -> float:
        """Physical side length alpha*N of the fundamental cell."""
        return self.alpha * self.N

    def dual(self) -> "Grid":
        return Grid(self.d, self.N, self.beta)

    def centered_axis(self) -> np.ndarray:
        """Signed representatives of Z mod N, aligned with index order 0..N-1."""
        idx = np.arange(self.N)
        return np.where(idx < (self.N + 1) // 2, idx, idx - self.N)

    def is_balanced(self, rel_tol: float = 1e-9) -> bool:
        return math.isclose(self.alpha, self.N ** -0.5, rel_tol=rel_tol)


def _as_values(grid: Grid, values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.size == grid.size and arr.shape != grid.shape:
        arr = arr.reshape(grid.shape)
    if arr.shape != grid.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid shape {grid.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("signal values must all be finite")
    return arr


@dataclass(frozen=True)
class LatticeSignal:
    """Immutable complex signal on a periodic lattice."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = _as_values(self.grid, self.values).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    # -- periodic access -----------------------------------------------------

    def at(self, k: Sequence[int]) -> complex:
        """Value at index k with periodic wraparound."""
        if isinstance(k, (int, np.integer)):
            k = (int(k),)
        if len(k) != self.grid.d:
            raise ValueError(f"index has {len(k)} coords, grid is {self.grid.d}-dimensional")
        idx = tuple(int(c) % self.grid.N for c in k)
        return complex(self.values[idx])

    # -- norms and pairings ---------------------------------------------------

    def lp_norm(self, p) -> float:
        """Lattice L^p norm with the Riemann factor alpha^(d/p); sup norm for p = inf."""
        pf = as_float_p(p)
        mags = np.abs(self.values)
        if math.isinf(pf):
            return float(mags.max()) if mags.size else 0.0
        total = float((mags ** pf).sum())
        return (self.grid.cell_measure * total) ** (1.0 / pf)

    def inner(self, other: "LatticeSignal") -> complex:
        """<f, g> = alpha^d * sum f * conj(g), conjugate-linear in the second slot."""
        self._check_same_grid(other)
        return complex(self.grid.cell_measure * np.vdot(other.values, self.values))

    def _check_same_grid(self, other: "LatticeSignal") -> None:
        if self.grid != other.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "LatticeSignal") -> "LatticeSignal":
        self._check_same_grid(other)
        return LatticeSignal(self.grid, self.values + other.values)

    def __sub__(self, other: "LatticeSignal") -> "LatticeSignal":
        self._check_same_grid(other)
        return LatticeSignal(self.grid, self.values - other.values)

    def __mul__(self, c) -> "LatticeSignal":
        if isinstance(c, LatticeSignal):
            self._check_same_grid(c)
            return LatticeSignal(self.grid, self.values * c.values)
        return LatticeSignal(self.grid, self.values * c)

    __rmul__ = __mul__

    # -- serialization ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        flat = self.values.reshape(-1)
        return {
            "d": self.grid.d,
            "N": self.grid.N,
            "alpha": self.grid.alpha,
            "re": flat.real.tolist(),
            "im": flat.imag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "LatticeSignal":
        grid = Grid(int(data["d"]), int(data["N"]), float(data.get("alpha", 1.0)))
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        if re.shape != im.shape:
            raise ValueError("re and im arrays must have equal length")
        return cls(grid, (re + 1j * im).reshape(grid.shape))

    @classmethod
    def from_json(cls, text: str) -> "LatticeSignal":
        return cls.from_json_dict(json.loads(text))


# -- constructors ----------------------------------------------------------------


def zero_signal(grid: Grid) -> LatticeSignal:
    return LatticeSignal(grid, np.zeros(grid.shape, dtype=np.complex128))


def delta_signal(grid: Grid, at: Sequence[int] | int = 0) -> LatticeSignal:
    vals = np.zeros(grid.shape, dtype=np.complex128)
    if isinstance(at, (int, np.integer)):
        at = (int(at),) * grid.d
    vals[tuple(int(c) % grid.N for c in at)] = 1.0
    return LatticeSignal(grid, vals)


def constant_signal(grid: Grid, c: complex = 1.0) -> LatticeSignal:
    return LatticeSignal(grid, np.full(grid.shape, c, dtype=np.complex128))


def random_signal(grid: Grid, seed: int, complex_valued: bool = True) -> LatticeSignal:
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(grid.shape)
    if complex_valued:
        vals = vals + 1j * rng.standard_normal(grid.shape)
    return LatticeSignal(grid, vals)


# -- smooth bump machinery ---------------------------------------------------------
#
# All compactly supported test functions are built from the standard C-infinity
# profile exp(-1/(1-u^2)); partitions of unity use its plateau variant.


def bump_profile(u: np.ndarray) -> np.ndarray:
    """exp(-1/(1-u^2)) on |u| < 1, zero outside; peak value exp(-1)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)

    def psi(x):
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = np.exp(-1.0 / x[pos])
        return out

    a = psi(t)
    b = psi(1.0 - t)
    return a / (a + b)


def plateau_profile(u: np.ndarray, plateau: float, support: float) -> np.ndarray:
    """Profile equal to 1 on |u| <= plateau, 0 on |u| >= support, smooth between."""
    if not 0 < plateau < support:
        raise ValueError("need 0 < plateau < support")
    u = np.abs(np.asarray(u, dtype=float))
    return _smooth_step((support - u) / (support - plateau))


def bump_signal(grid: Grid, radius_phys: float, center: Sequence[int] | int = 0,
                mass: float | None = None) -> LatticeSignal:
    """Smooth bump supported in the physical ball of the given radius.

    With ``mass`` set, the lattice integral alpha^d * sum equals ``mass``.
    The support must fit inside the fundamental cell (no wraparound).
    """
    if 2 * radius_phys > grid.extent:
        raise ValueError(
            f"bump of radius {radius_phys} does not fit in the cell of extent {grid.extent}")
    axis = grid.centered_axis() * grid.alpha
    vals = np.ones(grid.shape, dtype=float)
    for ax in range(grid.d):
        shape = [1] * grid.d
        shape[ax] = grid.N
        vals = vals * bump_profile(axis / radius_phys).reshape(shape)
    if isinstance(center, (int, np.integer)):
        center = (int(center),) * grid.d
    vals = np.roll(vals, shift=tuple(center), axis=tuple(range(grid.d)))
    if mass is not None:
        total = vals.sum() * grid.cell_measure
        if total <= 0:
            raise ValueError("bump has no mass on this grid; increase N or radius")
        vals = vals * (mass / total)
    return LatticeSignal(grid, vals)


def default_window(grid: Grid, radius_phys: float | None = None) -> LatticeSignal:
    """Deterministic bump window, normalized to unit lattice L^2 norm.

    The default radius is a quarter of the cell extent; pass a radius to pin
    the window to a fixed physical shape across grid refinements.
    """
    w = bump_signal(grid, grid.extent / 4.0 if radius_phys is None else radius_phys)
    scale = w.lp_norm(2)
    return LatticeSignal(grid, w.values / scale)


def reference_window(grid: Grid) -> LatticeSignal:
    """Window of physical radius min(1, extent/4): the same continuum bump on
    every balanced grid, so norm ratios converge under refinement."""
    return default_window(grid, min(1.0, grid.extent / 4.0))
