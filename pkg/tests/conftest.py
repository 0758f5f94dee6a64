"""Shared fixtures and independent reference oracles.

The oracles here are deliberately naive (plain loops over definitions) and
never call the code paths they are used to check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from tflattice.lattice import Grid, LatticeSignal


def stft_oracle(f: LatticeSignal, g: LatticeSignal) -> np.ndarray:
    """Direct summation of alpha^d sum_t f(t) conj(g(t-x)) e^{-2pi i t.xi/N}."""
    N, d = f.grid.N, f.grid.d
    out = np.zeros((N,) * (2 * d), dtype=np.complex128)
    pts = list(itertools.product(range(N), repeat=d))
    for x in pts:
        for xi in pts:
            acc = 0j
            for t in pts:
                tx = tuple((a - b) % N for a, b in zip(t, x))
                dot = sum(a * b for a, b in zip(t, xi))
                acc += (f.values[t] * np.conj(g.values[tx])
                        * np.exp(-2j * np.pi * dot / N))
            out[x + xi] = acc * f.grid.cell_measure
    return out


def mixed_norm_oracle(arr: np.ndarray, p: float, q: float, inner_dims: int,
                      weight_fn=None) -> float:
    """Plain-loop weighted mixed norm; inner l^p over the leading axes."""
    arr = np.asarray(arr)
    inner_shape = arr.shape[:inner_dims]
    outer_shape = arr.shape[inner_dims:]
    outer_vals = []
    for out_idx in itertools.product(*[range(n) for n in outer_shape]):
        terms = []
        for in_idx in itertools.product(*[range(n) for n in inner_shape]):
            v = abs(arr[in_idx + out_idx])
            if weight_fn is not None:
                v *= weight_fn(in_idx + out_idx)
            terms.append(v)
        if math.isinf(p):
            outer_vals.append(max(terms))
        else:
            outer_vals.append(sum(t ** p for t in terms) ** (1.0 / p))
    if math.isinf(q):
        return max(outer_vals)
    return sum(v ** q for v in outer_vals) ** (1.0 / q)


def sharp_cutoff_wiener(f: LatticeSignal, step: int, p: float, q: float) -> float:
    """Amalgam norm built from indicator cutoffs instead of smooth bumps."""
    N, d = f.grid.N, f.grid.d
    cells = N // step
    vals = []
    for k in itertools.product(range(cells), repeat=d):
        mask = np.zeros(f.grid.shape, dtype=bool)
        pieces = []
        for off in itertools.product(range(step), repeat=d):
            idx = tuple((k[a] * step + off[a] - step // 2) % N for a in range(d))
            pieces.append(abs(f.values[idx]))
        arr = np.asarray(pieces)
        if math.isinf(p):
            vals.append(arr.max())
        else:
            vals.append((f.grid.cell_measure * (arr ** p).sum()) ** (1.0 / p))
    arr = np.asarray(vals)
    if math.isinf(q):
        return float(arr.max())
    return float((arr ** q).sum() ** (1.0 / q))


@pytest.fixture
def grid8() -> Grid:
    return Grid(1, 8, 1.0)


@pytest.fixture
def grid16() -> Grid:
    return Grid(1, 16, 1.0)
