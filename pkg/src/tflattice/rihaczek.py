"""Multilinear Rihaczek distributions, their STFT product formula, and the
Kohn-Nirenberg quantization they are dual to.

A phase-space signal is a function of (x, xi_1, .., xi_m) on the (m+1)d-torus:
the x block carries the signal spacing alpha, each xi block the dual spacing
beta = 1/(alpha*N). Its cell measure alpha^d * beta^{m d} is the weight that
makes the pairing <K_sigma(f), g> = <sigma, R_m(g, f)> an exact identity on
every grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentTuple
from .lattice import Grid, LatticeSignal, as_float_p, reference_window
from .norms import (_reduce_lp, _weight_mesh, default_partition_step,
                    make_partition, wiener_amalgam_norm)
from .transforms import dft, stft
from .weights import SeparableWeight


@dataclass(frozen=True)
class PhaseSpaceSignal:
    """Complex function of (x, xi_1..xi_m) sampled on the (m+1)d index grid."""

    grid: Grid  # the base d-dimensional signal grid
    m: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        shape = (self.grid.N,) * ((self.m + 1) * self.grid.d)
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.size == self.grid.N ** len(shape) and arr.shape != shape:
            arr = arr.reshape(shape)
        if arr.shape != shape:
            raise ValueError(f"values shape {arr.shape} != {shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("phase-space values must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return self.grid.d

    @property
    def ndim(self) -> int:
        return (self.m + 1) * self.grid.d

    @property
    def cell_measure(self) -> float:
        g = self.grid
        return g.alpha ** g.d * g.beta ** (self.m * g.d)

    @property
    def dual_cell_measure(self) -> float:
        g = self.grid
        return g.beta ** g.d * g.alpha ** (self.m * g.d)

    def inner(self, other: "PhaseSpaceSignal") -> complex:
        if self.grid != other.grid or self.m != other.m:
            raise ValueError("phase-space grid mismatch")
        return complex(self.cell_measure * np.vdot(other.values, self.values))

    def to_json_dict(self) -> dict:
        flat = self.values.reshape(-1)
        return {"d": self.grid.d, "N": self.grid.N, "alpha": self.grid.alpha,
                "m": self.m, "re": flat.real.tolist(), "im": flat.imag.tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PhaseSpaceSignal":
        grid = Grid(int(data["d"]), int(data["N"]), float(data.get("alpha", 1.0)))
        m = int(data["m"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        return cls(grid, m, re + 1j * im)


def _check_common_grid(signals: list[LatticeSignal]) -> Grid:
    grid = signals[0].grid
    for s in signals[1:]:
        if s.grid != grid:
            raise ValueError(f"grid mismatch: {s.grid} vs {grid}")
    return grid


def _axis_index(N: int, total_axes: int, axis: int) -> np.ndarray:
    """Index coordinate along one axis, shaped for broadcasting."""
    shape = [1] * total_axes
    shape[axis] = N
    return np.arange(N).reshape(shape)


def rihaczek(g: LatticeSignal, fs: list[LatticeSignal]) -> PhaseSpaceSignal:
    """R_m(g, f)(x, xi) = g(x) conj(prod_j fhat_j(xi_j)) e^{-2 pi i x.(sum xi_j)/N}."""
    grid = _check_common_grid([g, *fs])
    m, d, N = len(fs), grid.d, grid.N
    if m < 1:
        raise ValueError("need at least one argument signal")
    total = (m + 1) * d
    out = np.ones((N,) * total, dtype=np.complex128)
    out = out * g.values.reshape(grid.shape + (1,) * (m * d))
    for j, f in enumerate(fs):
        fhat = np.conj(dft(f).values)
        shape = [1] * total
        shape[(j + 1) * d:(j + 2) * d] = [N] * d
        out = out * fhat.reshape(shape)
    phase = np.zeros((N,) * total)
    for ax in range(d):
        x_ax = _axis_index(N, total, ax)
        xi_sum = sum(_axis_index(N, total, (j + 1) * d + ax) for j in range(m))
        phase = phase + x_ax * xi_sum
    out = out * np.exp(-2j * np.pi * phase / N)
    return PhaseSpaceSignal(grid, m, out)


def phase_space_stft(F: PhaseSpaceSignal, Phi: PhaseSpaceSignal) -> np.ndarray:
    """Direct STFT of a phase-space signal against a phase-space window.

    Output is indexed by (z-axes..., zeta-axes...), 2(m+1)d axes total, with
    the mixed Riemann prefactor alpha^d * beta^{m d}. Desk-scale only: the
    output has N^{2(m+1)d} entries.
    """
    if F.grid != Phi.grid or F.m != Phi.m:
        raise ValueError("phase-space grid mismatch")
    N, D = F.grid.N, F.ndim
    pref = F.cell_measure
    out = np.empty((N,) * (2 * D), dtype=np.complex128)
    axes = tuple(range(D))
    for z in itertools.product(range(N), repeat=D):
        win = np.roll(Phi.values, shift=z, axis=axes)
        out[z] = np.fft.fftn(F.values * np.conj(win)) * pref
    return out


def rihaczek_stft_closed_form(g: LatticeSignal, fs: list[LatticeSignal],
                              windows: list[LatticeSignal]) -> np.ndarray:
    """Product formula for the STFT of R_m(g, f) with window R_m(phi_0, phi).

    Evaluates e^{-2 pi i z.zeta/N} V_{phi_0}g(z_0, zeta_0 + sum z_j) *
    prod_j conj(V_{phi_j}f_j(z_0 + zeta_j, z_j)) on the full index grid;
    agrees with :func:`phase_space_stft` applied to the assembled distribution.
    """
    grid = _check_common_grid([g, *fs, *windows])
    m, d, N = len(fs), grid.d, grid.N
    if len(windows) != m + 1:
        raise ValueError(f"need m+1 = {m + 1} windows, got {len(windows)}")
    total = 2 * (m + 1) * d
    # axis layout: z0 | z_1..z_m | zeta0 | zeta_1..zeta_m, d axes each
    V0 = stft(g, windows[0])
    Vj = [stft(f, w) for f, w in zip(fs, windows[1:])]

    idx = [_axis_index(N, total, ax) for ax in range(total)]

    out = np.ones((N,) * total, dtype=np.complex128)
    # V_{phi_0} g evaluated at (z0, zeta0 + sum_j z_j)
    coords = []
    for ax in range(d):
        coords.append(idx[ax])
    for ax in range(d):
        acc = idx[(m + 1) * d + ax]
        for j in range(m):
            acc = acc + idx[(j + 1) * d + ax]
        coords.append(acc % N)
    out = out * _gather(V0, coords, N)
    # each factor conj(V_{phi_j} f_j(z0 + zeta_j, z_j))
    for j in range(m):
        coords = []
        for ax in range(d):
            coords.append((idx[ax] + idx[(m + 1 + j + 1) * d + ax]) % N)
        for ax in range(d):
            coords.append(idx[(j + 1) * d + ax])
        out = out * np.conj(_gather(Vj[j], coords, N))
    # phase e^{-2 pi i zvec.zetavec / N}
    phase = np.zeros((N,) * total)
    for j in range(m):
        for ax in range(d):
            phase = phase + idx[(j + 1) * d + ax] * idx[(m + 1 + j + 1) * d + ax]
    out = out * np.exp(-2j * np.pi * phase / N)
    return out


def _gather(table: np.ndarray, coords: list[np.ndarray], N: int) -> np.ndarray:
    """table[coords...] with broadcasting over the full output grid."""
    return table[tuple(np.broadcast_arrays(*[c % N for c in coords]))]


def rihaczek_identity_residual(g: LatticeSignal, fs: list[LatticeSignal],
                               windows: list[LatticeSignal]) -> float:
    """Max |closed form - direct phase-space STFT of R_m(g, f)|."""
    R = rihaczek(g, fs)
    Phi = rihaczek(windows[0], list(windows[1:]))
    direct = phase_space_stft(R, Phi)
    closed = rihaczek_stft_closed_form(g, fs, windows)
    return float(np.abs(direct - closed).max())


# -- Kohn-Nirenberg quantization --------------------------------------------------


def kohn_nirenberg_apply(sigma: PhaseSpaceSignal,
                         fs: list[LatticeSignal]) -> LatticeSignal:
    """K_sigma(f)(x) = beta^{m d} sum_xi sigma(x, xi) prod_j fhat_j(xi_j)
    e^{+2 pi i x.(sum xi_j)/N}."""
    grid = _check_common_grid(fs)
    m, d, N = sigma.m, grid.d, grid.N
    if len(fs) != m:
        raise ValueError(f"symbol is {m}-linear but got {len(fs)} arguments")
    if sigma.grid != grid:
        raise ValueError("symbol grid does not match argument grids")
    total = m * d
    fprod = np.ones((N,) * total, dtype=np.complex128)
    for j, f in enumerate(fs):
        fhat = dft(f).values
        shape = [1] * total
        shape[j * d:(j + 1) * d] = [N] * d
        fprod = fprod * fhat.reshape(shape)
    pref = grid.beta ** (m * d)
    out = np.empty(grid.shape, dtype=np.complex128)
    xi_sum_axes = []
    for ax in range(d):
        xi_sum_axes.append(sum(_axis_index(N, total, j * d + ax) for j in range(m)))
    for x in itertools.product(range(N), repeat=d):
        phase = np.zeros((N,) * total)
        for ax in range(d):
            phase = phase + x[ax] * xi_sum_axes[ax]
        integrand = sigma.values[x] * fprod * np.exp(2j * np.pi * phase / N)
        out[x] = pref * integrand.sum()
    return LatticeSignal(grid, out)


def duality_residual(sigma: PhaseSpaceSignal, fs: list[LatticeSignal],
                     g: LatticeSignal) -> float:
    """|<K_sigma(f), g> - <sigma, R_m(g, f)>| with Riemann-weighted pairings."""
    lhs = kohn_nirenberg_apply(sigma, fs).inner(g)
    rhs = sigma.inner(rihaczek(g, fs))
    return abs(lhs - rhs)


# -- phase-space modulation norms ---------------------------------------------------


def _component_stfts(g: LatticeSignal, fs: list[LatticeSignal],
                     windows: list[LatticeSignal] | None) -> tuple[np.ndarray, list[np.ndarray]]:
    grid = _check_common_grid([g, *fs])
    if windows is None:
        w = reference_window(grid)
        windows = [w] * (len(fs) + 1)
    A = np.abs(stft(g, windows[0]))
    Bs = [np.abs(stft(f, w)) for f, w in zip(fs, windows[1:])]
    return A, Bs


def phase_space_modulation_norm(g: LatticeSignal, fs: list[LatticeSignal],
                                p, q, windows: list[LatticeSignal] | None = None,
                                target: str = "modulation",
                                weight: SeparableWeight | None = None,
                                riemann: bool = True) -> float:
    """M^{p,q} (or Fourier-M^{p,q}) norm of R_m(g, f) via the STFT product formula.

    ``riemann=True`` weights the mixed norm by the phase-space cell measures so
    values converge to their continuum counterparts under grid refinement; with
    ``riemann=False`` the plain discrete mixed norm is returned.

    Fast paths: any m with p == q; m == 1 with general (p, q); the Fourier
    target factorizes for all (p, q). A weight forces the dense small-N path.
    """
    if target not in ("modulation", "fourier_modulation"):
        raise ValueError(f"unknown target {target!r}")
    grid = _check_common_grid([g, *fs])
    m, d, N = len(fs), grid.d, grid.N
    pf, qf = as_float_p(p), as_float_p(q)
    cell = grid.alpha ** d * grid.beta ** (m * d)
    dual_cell = grid.beta ** d * grid.alpha ** (m * d)
    if riemann:
        inner_meas = cell if target == "modulation" else dual_cell
        outer_meas = dual_cell if target == "modulation" else cell
    else:
        inner_meas = outer_meas = 1.0
    inner_scale = inner_meas ** (0.0 if math.isinf(pf) else 1.0 / pf)
    outer_scale = outer_meas ** (0.0 if math.isinf(qf) else 1.0 / qf)
    scale = inner_scale * outer_scale

    if weight is not None:
        return scale * _dense_phase_space_norm(g, fs, pf, qf, windows, target, weight)

    A, Bs = _component_stfts(g, fs, windows)

    if target == "fourier_modulation":
        # inner l^p over (zeta0, zetavec) factorizes slot by slot
        factor0 = _reduce_lp(_reduce_lp(A, pf, tuple(range(d, 2 * d))), qf,
                             tuple(range(d)))
        total = float(factor0)
        for B in Bs:
            fj = _reduce_lp(_reduce_lp(B, pf, tuple(range(d))), qf,
                            tuple(range(d)))
            total *= float(fj)
        return scale * total

    if pf == qf:
        total = float(_reduce_lp(A, pf, tuple(range(2 * d))))
        for B in Bs:
            total *= float(_reduce_lp(B, pf, tuple(range(2 * d))))
        return scale * total

    if m == 1:
        return scale * _bilinear_mixed_norm(A, Bs[0], d, pf, qf)

    return scale * _dense_phase_space_norm(g, fs, pf, qf, windows, target, None)


def _bilinear_mixed_norm(A: np.ndarray, B: np.ndarray, d: int,
                         pf: float, qf: float) -> float:
    """m = 1 mixed norm: inner over (z0, z1) of A(z0, zeta0+z1) B(z0+zeta1, z1)."""
    if math.isinf(pf):
        N = A.shape[0]
        vals = np.empty((N,) * (2 * d), dtype=float)
        for zeta in itertools.product(range(N), repeat=2 * d):
            zeta0, zeta1 = zeta[:d], zeta[d:]
            Ashift = np.roll(A, shift=tuple(-c for c in zeta0), axis=tuple(range(d, 2 * d)))
            Bshift = np.roll(B, shift=tuple(-c for c in zeta1), axis=tuple(range(d)))
            vals[zeta] = (Ashift * Bshift).max()
        return float(_reduce_lp(vals, qf, tuple(range(vals.ndim))))
    Ap = A ** pf
    Bp = B ** pf
    # D(s, t) = sum_{a,b} Ap(a, b+t) Bp(a+s, b): circular cross-correlation
    X = np.fft.ifftn(np.conj(np.fft.fftn(Ap)) * np.fft.fftn(Bp)).real
    axes_t = tuple(range(d, 2 * d))
    D = np.flip(X, axis=axes_t)
    D = np.roll(D, shift=(1,) * d, axis=axes_t)
    D = np.maximum(D, 0.0)
    inner = D ** (1.0 / pf)
    return float(_reduce_lp(inner, qf, tuple(range(inner.ndim))))


def _dense_phase_space_norm(g: LatticeSignal, fs: list[LatticeSignal],
                            pf: float, qf: float,
                            windows: list[LatticeSignal] | None,
                            target: str,
                            weight: SeparableWeight | None) -> float:
    """Materialize |V_Phi R| on the full 2(m+1)d grid (small N only)."""
    grid = _check_common_grid([g, *fs])
    m, d, N = len(fs), grid.d, grid.N
    total = 2 * (m + 1) * d
    if N ** total > 20_000_000:
        raise ValueError(
            f"dense phase-space norm needs N^{total} = {N ** total} entries; reduce N")
    if windows is None:
        w = reference_window(grid)
        windows = [w] * (m + 1)
    mags = np.abs(rihaczek_stft_closed_form(g, fs, windows))
    if weight is not None:
        mags = mags * _weight_mesh(weight, mags.shape)
    D = (m + 1) * d
    if target == "fourier_modulation":
        inner_axes = tuple(range(D, 2 * D))
    else:
        inner_axes = tuple(range(D))
    inner = _reduce_lp(mags, pf, inner_axes)
    return float(_reduce_lp(inner, qf, tuple(range(inner.ndim))))


def boundedness_ratio(g: LatticeSignal, fs: list[LatticeSignal],
                      tup: ExponentTuple, target: str = "modulation",
                      windows: list[LatticeSignal] | None = None,
                      partition_step: int | None = None,
                      weight: SeparableWeight | None = None) -> float:
    """Target norm of R_m(g, f) over the product of amalgam norms of the inputs."""
    grid = _check_common_grid([g, *fs])
    if tup.m != len(fs):
        raise ValueError(f"tuple is {tup.m}-linear but got {len(fs)} argument signals")
    num = phase_space_modulation_norm(g, fs, tup.p, tup.q, windows=windows,
                                      target=target, weight=weight)
    step = default_partition_step(grid) if partition_step is None else partition_step
    part = make_partition(grid, step)
    den = wiener_amalgam_norm(g, part, tup.pj[0], tup.qj[0])
    for f, pj, qj in zip(fs, tup.pj[1:], tup.qj[1:]):
        den *= wiener_amalgam_norm(f, part, pj, qj)
    if den == 0:
        raise ValueError("zero denominator: some input signal vanishes")
    return num / den
