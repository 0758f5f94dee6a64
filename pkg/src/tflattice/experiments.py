"""Extremal families and log-log slope experiments.

Each experiment produces a :class:`ScalingReport`: a strictly monotone
parameter list, the measured ratios, the fitted log-log slope, and the
predicted growth exponent for that family. Positive fitted slope means the
measured ratio grows, i.e. the corresponding mapping cannot be bounded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exponents import HALF, ONE, ExponentTuple, ExtendedExponent
from .lattice import Grid, LatticeSignal, as_float_p, bump_signal, default_window
from .regions import lambda_set
from .rihaczek import phase_space_modulation_norm
from .sequences import TruncatedSequence, star_convolve, tau_m, seq_mixed_norm
from .transforms import dft, stft


def fit_log_slope(xs, ys) -> dict:
    """Least-squares line through (log x, log y); returns slope, intercept, r2."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3:
        raise ValueError("need at least 3 points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive data")
    lx, ly = np.log(xs), np.log(ys)
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    pred = A @ coef
    ss_res = float(((ly - pred) ** 2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {"slope": slope, "intercept": intercept, "r2": r2}


@dataclass(frozen=True)
class ScalingReport:
    params: tuple[float, ...]
    ratios: tuple[float, ...]
    slope: float
    intercept: float
    r2: float
    predicted_slope: float
    tolerance: float
    passed: bool
    seed: int | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.params) < 4:
            raise ValueError("need at least 4 family members")
        diffs = np.diff(np.asarray(self.params))
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("parameter list must be strictly monotone")

    @property
    def max_fit_residual(self) -> float:
        lx = np.log(np.asarray(self.params))
        ly = np.log(np.asarray(self.ratios))
        return float(np.abs(ly - (self.slope * lx + self.intercept)).max())

    def to_json_dict(self) -> dict:
        return {
            "params": list(self.params), "ratios": list(self.ratios),
            "slope": self.slope, "intercept": self.intercept, "r2": self.r2,
            "predicted": self.predicted_slope, "tolerance": self.tolerance,
            "pass": self.passed, "seed": self.seed, "label": self.label,
            "max_fit_residual": self.max_fit_residual,
        }


def _report(params, ratios, predicted, tolerance, seed=None, label="") -> ScalingReport:
    fit = fit_log_slope(params, ratios)
    passed = abs(fit["slope"] - predicted) <= tolerance
    return ScalingReport(tuple(float(x) for x in params),
                         tuple(float(y) for y in ratios),
                         fit["slope"], fit["intercept"], fit["r2"],
                         float(predicted), float(tolerance), passed,
                         seed=seed, label=label)


# -- dilated bumps ------------------------------------------------------------------

DEFAULT_LAMBDAS = (1.0, 0.5, 0.25, 0.125, 0.0625)


def dilated_bump(lam: float, grid: Grid, base_radius: float | None = None) -> LatticeSignal:
    """h_lam(x) = lam^-d h(x/lam) for a fixed smooth bump h with integral 2.

    The dilation preserves the L^1 mass; the base radius defaults to a quarter
    of the cell extent and the dilated support must fit inside the cell.
    """
    if not 0 < lam <= 1:
        raise ValueError(f"dilation parameter must be in (0, 1], got {lam}")
    radius = grid.extent / 4.0 if base_radius is None else float(base_radius)
    if 2 * radius * lam > grid.extent:
        raise ValueError("dilated bump does not fit in the fundamental cell")
    base = bump_signal(grid, radius * lam, mass=2.0)
    return base


def dilated_norm_report(grid: Grid, p, lambdas=DEFAULT_LAMBDAS,
                        tolerance: float = 0.05,
                        base_radius: float | None = None) -> ScalingReport:
    """Fits ||h_lam||_p against lam; the law is lam^{d(1/p - 1)}."""
    pf = as_float_p(p)
    norms = [dilated_bump(lam, grid, base_radius).lp_norm(pf) for lam in lambdas]
    rp = 0.0 if math.isinf(pf) else 1.0 / pf
    predicted = grid.d * (rp - 1.0)
    return _report(lambdas, norms, predicted, tolerance, label=f"bump-norm-p={pf}")


def spectrum_plateau_radius(h: LatticeSignal, level: float = 1.0) -> int:
    """Largest centered box radius (in dual indices) where Re(hhat) >= level."""
    hhat = dft(h).values.real
    N, d = h.grid.N, h.grid.d
    radius = 0
    while radius + 1 <= N // 2 - 1:
        r = radius + 1
        box = itertools.product(range(-r, r + 1), repeat=d)
        if all(hhat[tuple(c % N for c in pt)] >= level for pt in box):
            radius = r
        else:
            break
    return radius


def predicted_local_growth(tup: ExponentTuple) -> float:
    """Growth exponent in 1/lam of the dilated-bump ratio for the local region:
    d * [ (|L|-1)/p + 1/q - sum_{j in L} (1 - 1/(p_j ^ 2)) ], and 0 when no
    slot is dilated (empty L makes the family constant)."""
    lam = lambda_set(tup)
    if not lam:
        return 0.0
    rp, rq = tup.p.reciprocal, tup.q.reciprocal
    total = (len(lam) - 1) * rp + rq
    total -= sum(ONE - max(tup.pj[j].reciprocal, HALF) for j in lam)
    return float(total)


def local_dilation_family(tup: ExponentTuple, grid: Grid,
                          lambdas=DEFAULT_LAMBDAS,
                          base_radius: float | None = None):
    """Family (param, g, fs): slots in Lambda get h_lam, the rest the fixed bump.

    The base bump sits well inside the analysis window (extent/16 vs the
    window's extent/4) so the asymptotic regime starts near lam = 1.
    """
    lam_set = lambda_set(tup)
    if base_radius is None:
        base_radius = grid.extent / 16.0
    members = []
    for lam in lambdas:
        sigs = [dilated_bump(lam if j in lam_set else 1.0, grid, base_radius)
                for j in range(tup.m + 1)]
        members.append((1.0 / lam, sigs[0], sigs[1:]))
    return members


def scaling_ratio_series(family, tup: ExponentTuple, target: str = "modulation",
                         tolerance: float = 0.2,
                         windows: list[LatticeSignal] | None = None,
                         predicted: float | None = None,
                         denominator: str = "local",
                         label: str = "") -> ScalingReport:
    """Measures the target norm of the distribution against the input norms.

    ``denominator="local"`` divides by prod_j ||arg_j||_{p_j ^ 2} (the
    single-cell normalization used by the dilation families); "amalgam"
    divides by the amalgam norms via :func:`tflattice.rihaczek.boundedness_ratio`.
    """
    params, ratios = [], []
    for param, g, fs in family:
        if windows is None:
            # wide analysis window: the dilated bumps must sit well inside it
            w = default_window(g.grid)
            windows = [w] * (tup.m + 1)
        if denominator == "local":
            num = phase_space_modulation_norm(g, fs, tup.p, tup.q,
                                              windows=windows, target=target)
            den = 1.0
            for sig, pj in zip([g, *fs], tup.pj):
                den *= sig.lp_norm(min(as_float_p(pj), 2.0))
            if den == 0:
                raise ValueError("zero denominator in scaling family")
            ratios.append(num / den)
        elif denominator == "amalgam":
            from .rihaczek import boundedness_ratio
            ratios.append(boundedness_ratio(g, fs, tup, target=target, windows=windows))
        else:
            raise ValueError(f"unknown denominator mode {denominator!r}")
        params.append(param)
    if predicted is None:
        predicted = predicted_local_growth(tup)
    return _report(params, ratios, predicted, tolerance,
                   label=label or f"dilation-{target}")


# -- truncated-ones sequence families -------------------------------------------------

DEFAULT_SIZES = (8, 16, 32, 64, 128)


def star_growth_series(q, qs, sizes=DEFAULT_SIZES, d: int = 1,
                       tolerance: float = 0.1) -> ScalingReport:
    """Shared-shift convolution of all-ones boxes [-2M, 2M]^d; the ratio grows
    like M^{d(1 + m/q) - d sum 1/q_j}."""
    qs = [ExtendedExponent.from_value(v) for v in qs]
    q = ExtendedExponent.from_value(q)
    m = len(qs) - 1
    params, ratios = [], []
    for M in sizes:
        a = TruncatedSequence.ones_box(d, 2 * M)
        bs = [TruncatedSequence.ones_box(d, 2 * M) for _ in range(m)]
        out = star_convolve(a, bs)
        num = out.lp_norm(q.value())
        den = a.lp_norm(qs[0].value())
        for b, qj in zip(bs, qs[1:]):
            den *= b.lp_norm(qj.value())
        params.append(float(M))
        ratios.append(num / den)
    rq = 0.0 if q.is_infinite else float(q.reciprocal)
    predicted = d * (1 + m * rq) - d * float(sum(v.reciprocal for v in qs))
    return _report(params, ratios, predicted, tolerance, label="star-ones")


def conv_growth_series(q, qs, sizes=DEFAULT_SIZES, d: int = 1,
                       tolerance: float = 0.15) -> ScalingReport:
    """Ordinary iterated convolution of all-ones boxes; same ratio normalization."""
    qs = [ExtendedExponent.from_value(v) for v in qs]
    q = ExtendedExponent.from_value(q)
    m = len(qs) - 1
    params, ratios = [], []
    for M in sizes:
        seqs = [TruncatedSequence.ones_box(d, 2 * M) for _ in range(m + 1)]
        out = seqs[0]
        for b in seqs[1:]:
            out = star_convolve(out, [b])
        num = out.lp_norm(q.value())
        den = 1.0
        for s, qj in zip(seqs, qs):
            den *= s.lp_norm(qj.value())
        params.append(float(M))
        ratios.append(num / den)
    rq = 0.0 if q.is_infinite else float(q.reciprocal)
    predicted = d * (m + rq) - d * float(sum(v.reciprocal for v in qs))
    return _report(params, ratios, predicted, tolerance, label="conv-ones")


def tau_growth_series(p, q, qs, sizes=DEFAULT_SIZES, d: int = 1,
                      tolerance: float = 0.15) -> ScalingReport:
    """Shifted tensor of all-ones boxes measured in l^{p,q}; the ratio grows
    like M^{d(1/p + m/q - sum 1/q_j)}."""
    qs = [ExtendedExponent.from_value(v) for v in qs]
    p = ExtendedExponent.from_value(p)
    q = ExtendedExponent.from_value(q)
    m = len(qs) - 1
    params, ratios = [], []
    for M in sizes:
        seqs = [TruncatedSequence.ones_box(d, M) for _ in range(m + 1)]
        out = tau_m(seqs[0], seqs[1:])
        num = seq_mixed_norm(out, d, p.value(), q.value())
        den = 1.0
        for s, qj in zip(seqs, qs):
            den *= s.lp_norm(qj.value())
        params.append(float(M))
        ratios.append(num / den)
    rp = 0.0 if p.is_infinite else float(p.reciprocal)
    rq = 0.0 if q.is_infinite else float(q.reciprocal)
    predicted = d * (rp + m * rq) - d * float(sum(v.reciprocal for v in qs))
    return _report(params, ratios, predicted, tolerance, label="tau-ones")


# -- Fourier-target and smoothing-order families ---------------------------------------


def fm_dilation_series(tup: ExponentTuple, grid: Grid, slot: int = 1,
                       lambdas=DEFAULT_LAMBDAS, tolerance: float = 0.25,
                       base_radius: float | None = None) -> ScalingReport:
    """Dilate one argument slot and measure the Fourier-target norm ratio.

    For slot i >= 1 the predicted growth exponent in 1/lam is
    d * (1/q - 1 + 1/(p_i ^ 2)); for slot 0 replace 1/q by 1/p.
    """
    if base_radius is None:
        base_radius = grid.extent / 16.0
    members = []
    for lam in lambdas:
        sigs = [dilated_bump(lam if j == slot else 1.0, grid, base_radius)
                for j in range(tup.m + 1)]
        members.append((1.0 / lam, sigs[0], sigs[1:]))
    r_target = tup.p.reciprocal if slot == 0 else tup.q.reciprocal
    predicted = grid.d * float(r_target - 1 + max(tup.pj[slot].reciprocal, HALF))
    return scaling_ratio_series(members, tup, target="fourier_modulation",
                                tolerance=tolerance, predicted=predicted,
                                label=f"fm-dilation-slot{slot}")


def bessel_embedding_series(s_weight: float, pa, pb, grid: Grid,
                            lambdas=DEFAULT_LAMBDAS,
                            tolerance: float = 0.25,
                            base_radius: float = 1.0) -> ScalingReport:
    """Weighted spectral-product family behind the smoothing-order threshold:

    ratio(lam) = sum_xi |hhat_lam(xi)|^2 <xi>^s * beta^d
                 / (||h_lam||_{pa ^ 2} ||h_lam||_{pb ^ 2}),

    growing like (1/lam)^{(s+d) - d(2 - 1/(pa^2) - 1/(pb^2))}. The base bump
    must be narrow (its spectrum spread past |xi| = 1) for the bracket power
    law to be visible, so prefer large balanced grids here.
    """
    pa_f = min(as_float_p(pa), 2.0)
    pb_f = min(as_float_p(pb), 2.0)
    params, ratios = [], []
    for lam in lambdas:
        h = dilated_bump(lam, grid, base_radius=base_radius)
        hhat = dft(h)
        # centered_axis follows FFT storage order, so no reshuffle is needed
        axes = [h.grid.centered_axis() * h.grid.beta for _ in range(h.grid.d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        bracket = (1.0 + sum(m ** 2 for m in mesh)) ** (s_weight / 2.0)
        num = float((np.abs(hhat.values) ** 2 * bracket).sum()) * h.grid.beta ** h.grid.d
        den = h.lp_norm(pa_f) * h.lp_norm(pb_f)
        params.append(1.0 / lam)
        ratios.append(num / den)
    d = grid.d
    predicted = (s_weight + d) - d * (2.0 - 1.0 / pa_f - 1.0 / pb_f)
    return _report(params, ratios, predicted, tolerance, label="bessel-embedding")


# -- sign randomization --------------------------------------------------------------


def khinchin_empirical(a, p, trials: int = 200, seed: int = 0) -> dict:
    """Empirical E|sum a_k w_k|^p over random sign vectors, against (sum |a_k|^2)^{p/2}."""
    pf = as_float_p(p)
    if math.isinf(pf):
        raise ValueError("the sign-average comparison needs p < inf")
    if trials < 50:
        raise ValueError("need at least 50 trials")
    a = np.asarray(a, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(trials, a.size)) * 2 - 1
    sums = signs @ a
    mean_p = float((np.abs(sums) ** pf).mean())
    ref = float((np.abs(a) ** 2).sum() ** (pf / 2.0))
    return {"mean_p_norm": mean_p, "l2_reference": ref,
            "ratio": mean_p / ref if ref else float("nan"),
            "trials": trials, "seed": seed}


def khinchin_exhaustive(a, p) -> float:
    """Exact E|sum a_k w_k|^p by enumerating all sign vectors (len(a) <= 20)."""
    pf = as_float_p(p)
    a = np.asarray(a, dtype=np.complex128)
    n = a.size
    if n > 20:
        raise ValueError("exhaustive enumeration capped at 20 entries")
    total = 0.0
    for bits in range(1 << n):
        signs = np.array([1 if bits & (1 << k) else -1 for k in range(n)])
        total += abs(signs @ a) ** pf
    return total / (1 << n)


# -- modulated lattice sums ------------------------------------------------------------


def unit_cell_step(grid: Grid) -> int:
    """Indices per physical unit cell; requires 1/alpha to be an integer divisor of N."""
    step = round(1.0 / grid.alpha)
    if abs(step - 1.0 / grid.alpha) > 1e-9 or step < 1 or grid.N % step != 0:
        raise ValueError(
            f"grid spacing {grid.alpha} is not the reciprocal of a divisor of N")
    return step


def modulated_lattice_sum(b: TruncatedSequence, bump: LatticeSignal,
                          grid: Grid) -> LatticeSignal:
    """g(t) = sum_{(k0, n0)} b(k0, n0) e^{2 pi i t.(n0*M)/N} bump(t - k0*S)
    with S indices per unit cell and M = N/S its frequency counterpart.

    Coefficients are indexed by integer cell positions and integer unit
    frequencies; the bump must be supported in one quarter cell.
    """
    if bump.grid != grid:
        raise ValueError("bump must live on the target grid")
    d = grid.d
    if b.d != 2 * d:
        raise ValueError(f"coefficients must live on Z^{d} x Z^{d}")
    S = unit_cell_step(grid)
    M = grid.N // S
    support = np.argwhere(np.abs(bump.values) > 0)
    if support.size:
        centered = grid.centered_axis()
        span = np.abs(centered[support]).max()
        if span > S / 4.0:
            raise ValueError("bump support exceeds a quarter cell")
    acc = np.zeros(grid.shape, dtype=np.complex128)
    cells = grid.N // S
    for pt, v in b.data.items():
        k0, n0 = pt[:d], pt[d:]
        if any(abs(c) > cells // 2 for c in k0):
            raise ValueError(f"cell index {k0} outside the periodic cell range")
        shifted = np.roll(bump.values, shift=tuple(S * c for c in k0),
                          axis=tuple(range(d)))
        phase = np.zeros(grid.shape)
        for ax in range(d):
            shape = [1] * d
            shape[ax] = grid.N
            phase = phase + (np.arange(grid.N) * (n0[ax] * M)).reshape(shape)
        acc = acc + v * shifted * np.exp(2j * np.pi * phase / grid.N)
    return LatticeSignal(grid, acc)


def cell_sampling_residual(b: TruncatedSequence, bump: LatticeSignal,
                           grid: Grid, window: LatticeSignal) -> float:
    """Max |V_window g(k0*S, n0*M) - (isolated cell transform)| over the coefficients.

    The window must equal 1 on the half cell and vanish outside the cell, so
    sampling the windowed transform at lattice points reads off each cell's
    spectrum exactly.
    """
    g = modulated_lattice_sum(b, bump, grid)
    S = unit_cell_step(grid)
    M = grid.N // S
    d = grid.d
    V = stft(g, window)
    worst = 0.0
    cells = sorted({pt[:d] for pt in b.data})
    for k0 in cells:
        # isolated cell signal: only the coefficients of this cell
        sub = TruncatedSequence(2 * d, {pt: v for pt, v in b.data.items()
                                        if pt[:d] == k0})
        gk = modulated_lattice_sum(sub, bump, grid)
        ghat = dft(gk).values
        for n0 in itertools.product(range(-(M // 2), M // 2), repeat=d):
            sample = V[tuple((S * c) % grid.N for c in k0)
                       + tuple((M * c) % grid.N for c in n0)]
            direct = ghat[tuple((M * c) % grid.N for c in n0)]
            worst = max(worst, abs(sample - direct))
    return worst
