"""Discrete Fourier transform, time-frequency shifts, STFT, and Gabor frames.

Conventions. The forward transform of a signal with spacing alpha is

    F(n) = alpha^d * sum_k f(k) exp(-2*pi*i*k.n/N),

and F lives on the dual grid with spacing beta = 1/(alpha*N). The inverse
applies the same rule with the opposite phase sign, so inverse(forward(f))
recovers f exactly, including its grid. All continuum phases exp(-2*pi*i*x.xi)
appear here as index phases exp(-2*pi*i*k.n/N).

The fast path delegates to numpy's FFT; ``dft_direct`` is the naive O(N^2)
reference summation that the fast path is tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lattice import Grid, LatticeSignal


def dft(f: LatticeSignal, inverse: bool = False) -> LatticeSignal:
    """Forward or inverse transform onto the dual grid."""
    scale = f.grid.cell_measure
    if inverse:
        vals = np.fft.ifftn(f.values) * (f.grid.size * scale)
    else:
        vals = np.fft.fftn(f.values) * scale
    return LatticeSignal(f.grid.dual(), vals)


def dft_direct(f: LatticeSignal, inverse: bool = False) -> LatticeSignal:
    """Naive O(N^2) reference transform; must agree with :func:`dft` to 1e-12."""
    N, d = f.grid.N, f.grid.d
    sign = 1.0 if inverse else -1.0
    k = np.arange(N)
    phase1d = np.exp(sign * 2j * np.pi * np.outer(k, k) / N)
    out = f.values
    for axis in range(d):
        out = np.tensordot(out, phase1d, axes=([0], [0]))
        # tensordot moves the contracted axis to the end; after d steps the
        # axis order is restored.
    out = out * f.grid.cell_measure
    return LatticeSignal(f.grid.dual(), out)


def translate(f: LatticeSignal, x) -> LatticeSignal:
    """(T_x f)(t) = f(t - x), periodic."""
    if isinstance(x, (int, np.integer)):
        x = (int(x),) * f.grid.d
    return LatticeSignal(f.grid, np.roll(f.values, shift=tuple(int(c) for c in x),
                                         axis=tuple(range(f.grid.d))))


def modulate(f: LatticeSignal, xi) -> LatticeSignal:
    """(M_xi f)(t) = exp(2*pi*i*t.xi/N) f(t)."""
    if isinstance(xi, (int, np.integer)):
        xi = (int(xi),) * f.grid.d
    N = f.grid.N
    phase = np.zeros(f.grid.shape)
    for ax, c in enumerate(xi):
        shape = [1] * f.grid.d
        shape[ax] = N
        phase = phase + (np.arange(N) * int(c)).reshape(shape)
    return LatticeSignal(f.grid, f.values * np.exp(2j * np.pi * phase / N))


def _windowed_fft(fvals: np.ndarray, gvals: np.ndarray, d: int, N: int,
                  prefactor: float) -> np.ndarray:
    """STFT core: out[x, xi] = prefactor * sum_t f(t) conj(g(t-x)) e^{-2pi i t.xi/N}."""
    if d == 1:
        t = np.arange(N)
        shifted = gvals[(t[None, :] - t[:, None]) % N]  # shifted[x, t] = g(t - x)
        return prefactor * np.fft.fft(fvals[None, :] * np.conj(shifted), axis=1)
    out = np.empty((N,) * (2 * d), dtype=np.complex128)
    axes = tuple(range(d))
    for x in itertools.product(range(N), repeat=d):
        win = np.roll(gvals, shift=x, axis=axes)
        out[x] = np.fft.fftn(fvals * np.conj(win)) * prefactor
    return out


def stft(f: LatticeSignal, g: LatticeSignal) -> np.ndarray:
    """V_g f(x, xi) = alpha^d sum_t f(t) conj(g(t-x)) e^{-2pi i t.xi/N}.

    Returns a 2d-dimensional array indexed by (x-axes..., xi-axes...).
    """
    f._check_same_grid(g)
    return _windowed_fft(f.values, g.values, f.grid.d, f.grid.N, f.grid.cell_measure)


def stft_support_box(f: LatticeSignal, g: LatticeSignal) -> set[tuple[int, ...]]:
    """{x : some xi has V_g f(x, xi) != 0}, as signed index representatives.

    Equals supp f - supp g whenever both supports fit in the fundamental cell;
    for symmetric windows this coincides with supp f + supp g.
    """
    f._check_same_grid(g)
    N, d = f.grid.N, f.grid.d
    fnz = np.abs(f.values) > 0
    gnz = np.abs(g.values) > 0
    out: set[tuple[int, ...]] = set()
    centered = f.grid.centered_axis()
    for x in itertools.product(range(N), repeat=d):
        win = np.roll(gnz, shift=x, axis=tuple(range(d)))
        if np.any(fnz & win):
            out.add(tuple(int(centered[c]) for c in x))
    return out


def stft_translation_covariance_residual(f: LatticeSignal, g: LatticeSignal, x0) -> float:
    """Max deviation of V_g(T_{x0} f) from the phase-shifted translate of V_g f."""
    if isinstance(x0, (int, np.integer)):
        x0 = (int(x0),) * f.grid.d
    x0 = tuple(int(c) for c in x0)
    d, N = f.grid.d, f.grid.N
    lhs = stft(translate(f, x0), g)
    V = stft(f, g)
    shifted = np.roll(V, shift=x0, axis=tuple(range(d)))
    phase = np.zeros((N,) * d)
    for ax, c in enumerate(x0):
        shape = [1] * d
        shape[ax] = N
        phase = phase + (np.arange(N) * c).reshape(shape)
    factor = np.exp(-2j * np.pi * phase / N)
    rhs = shifted * factor.reshape((1,) * d + (N,) * d)
    return float(np.abs(lhs - rhs).max())


# -- Gabor systems -------------------------------------------------------------------


@dataclass(frozen=True)
class GaborSystem:
    """Time-frequency shift family {T_{a k} M_{b n} g} on the lattice."""

    window: LatticeSignal
    a_step: int
    b_step: int

    def __post_init__(self) -> None:
        N = self.window.grid.N
        if self.a_step < 1 or N % self.a_step != 0:
            raise ValueError(f"a_step {self.a_step} must divide N = {N}")
        if self.b_step < 1 or N % self.b_step != 0:
            raise ValueError(f"b_step {self.b_step} must divide N = {N}")

    @property
    def grid(self) -> Grid:
        return self.window.grid

    def atom(self, k, n) -> LatticeSignal:
        """T_{a k} M_{b n} g."""
        d = self.grid.d
        if isinstance(k, (int, np.integer)):
            k = (int(k),) * d
        if isinstance(n, (int, np.integer)):
            n = (int(n),) * d
        return translate(modulate(self.window, tuple(self.b_step * c for c in n)),
                         tuple(self.a_step * c for c in k))


def gabor_analysis(f: LatticeSignal, sys: GaborSystem) -> np.ndarray:
    """Coefficients c(k, n) = <f, T_{a k} M_{b n} g>."""
    f._check_same_grid(sys.window)
    d, N = f.grid.d, f.grid.N
    nk, nn = N // sys.a_step, N // sys.b_step
    V = stft(f, sys.window)
    # <f, T_x M_xi g> = e^{2 pi i x.xi / N} V_g f(x, xi)
    out = np.empty((nk,) * d + (nn,) * d, dtype=np.complex128)
    for k in itertools.product(range(nk), repeat=d):
        for n in itertools.product(range(nn), repeat=d):
            x = tuple(sys.a_step * c for c in k)
            xi = tuple(sys.b_step * c for c in n)
            dot = sum(a * b for a, b in zip(x, xi))
            out[k + n] = V[x + xi] * np.exp(2j * np.pi * dot / N)
    return out


def gabor_synthesis(coeffs: np.ndarray, sys: GaborSystem,
                    window: LatticeSignal | None = None) -> LatticeSignal:
    """sum_{k,n} c(k,n) T_{a k} M_{b n} gamma (gamma defaults to the system window)."""
    gamma = sys.window if window is None else window
    gamma._check_same_grid(sys.window)
    d, N = sys.grid.d, sys.grid.N
    nk, nn = N // sys.a_step, N // sys.b_step
    if coeffs.shape != (nk,) * d + (nn,) * d:
        raise ValueError(f"coefficient shape {coeffs.shape} does not match system "
                         f"{(nk,) * d + (nn,) * d}")
    acc = np.zeros((N,) * d, dtype=np.complex128)
    sys_gamma = GaborSystem(gamma, sys.a_step, sys.b_step)
    for k in itertools.product(range(nk), repeat=d):
        for n in itertools.product(range(nn), repeat=d):
            c = coeffs[k + n]
            if c != 0:
                acc = acc + c * sys_gamma.atom(k, n).values
    return LatticeSignal(sys.grid, acc)


def gabor_frame_operator(f: LatticeSignal, sys: GaborSystem) -> LatticeSignal:
    return gabor_synthesis(gabor_analysis(f, sys), sys)


def frame_operator_matrix(sys: GaborSystem) -> np.ndarray:
    """Dense matrix of the frame operator, column by column."""
    from .lattice import delta_signal

    n = sys.grid.size
    mat = np.empty((n, n), dtype=np.complex128)
    for col in range(n):
        idx = np.unravel_index(col, sys.grid.shape)
        e = delta_signal(sys.grid, idx)
        mat[:, col] = gabor_frame_operator(e, sys).values.reshape(-1)
    return mat


def canonical_dual_window(sys: GaborSystem) -> LatticeSignal:
    """gamma = S^{-1} g; raises if the frame operator is singular."""
    S = frame_operator_matrix(sys)
    g = sys.window.values.reshape(-1)
    try:
        gamma = np.linalg.solve(S, g)
    except np.linalg.LinAlgError as exc:
        raise ValueError("frame operator is singular; no canonical dual") from exc
    return LatticeSignal(sys.grid, gamma.reshape(sys.grid.shape))


def stft_to_csv(V: np.ndarray, d: int) -> str:
    """CSV serialization of an STFT table: columns x..., xi..., re, im."""
    if V.ndim != 2 * d:
        raise ValueError(f"table has {V.ndim} axes, expected {2 * d}")
    header = ([f"x{a}" for a in range(d)] + [f"xi{a}" for a in range(d)]
              + ["re", "im"])
    lines = [",".join(header)]
    for idx in itertools.product(*[range(n) for n in V.shape]):
        v = complex(V[idx])
        lines.append(",".join([str(c) for c in idx]
                              + [repr(v.real), repr(v.imag)]))
    return "\n".join(lines) + "\n"


def walnut_frame_bounds(g: LatticeSignal, a_step: int) -> tuple[float, float]:
    """(min, max) over x of sum_k |g(x - a k)|^2; A > 0 certifies the frame hypothesis."""
    N, d = g.grid.N, g.grid.d
    if a_step < 1 or N % a_step != 0:
        raise ValueError(f"a_step {a_step} must divide N = {N}")
    power = np.abs(g.values) ** 2
    acc = np.zeros(g.grid.shape)
    for k in itertools.product(range(N // a_step), repeat=d):
        acc = acc + np.roll(power, shift=tuple(a_step * c for c in k),
                            axis=tuple(range(d)))
    return float(acc.min()), float(acc.max())
