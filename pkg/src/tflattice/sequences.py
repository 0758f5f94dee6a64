"""Finitely supported sequence operators: the shifted tensor transform, the
shared-shift convolution, and the weighted phase-space convolution forms.

Sequences are stored sparsely as {integer point: complex value}; every
operator tracks supports exactly, so no ambient truncation is ever applied.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import as_float_p
from .weights import SeparableWeight

Point = tuple[int, ...]


@dataclass(frozen=True)
class TruncatedSequence:
    """Finitely supported complex sequence on Z^d."""

    d: int
    data: dict[Point, complex] = field(repr=False)

    def __post_init__(self) -> None:
        clean: dict[Point, complex] = {}
        for k, v in self.data.items():
            k = tuple(int(c) for c in k)
            if len(k) != self.d:
                raise ValueError(f"point {k} has {len(k)} coords, expected {self.d}")
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite value at {k}")
            if v != 0:
                clean[k] = v
        object.__setattr__(self, "data", clean)

    @property
    def support(self) -> set[Point]:
        return set(self.data)

    def __getitem__(self, k) -> complex:
        if isinstance(k, (int, np.integer)):
            k = (int(k),)
        return self.data.get(tuple(int(c) for c in k), 0j)

    def __len__(self) -> int:
        return len(self.data)

    def lp_norm(self, p, weight: SeparableWeight | None = None) -> float:
        pf = as_float_p(p)
        terms = []
        for k, v in self.data.items():
            w = 1.0 if weight is None else weight(np.array(k, dtype=float))
            terms.append(abs(v) * w)
        if not terms:
            return 0.0
        arr = np.asarray(terms)
        if math.isinf(pf):
            return float(arr.max())
        return float((arr ** pf).sum() ** (1.0 / pf))

    def abs(self) -> "TruncatedSequence":
        return TruncatedSequence(self.d, {k: abs(v) for k, v in self.data.items()})

    # -- serialization: {"d": d, "points": [[coords, re, im], ...]} ---------------

    def to_json_dict(self) -> dict:
        points = [[list(k), v.real, v.imag] for k, v in sorted(self.data.items())]
        return {"d": self.d, "points": points}

    @classmethod
    def from_json_dict(cls, data: dict) -> "TruncatedSequence":
        d = int(data["d"])
        out: dict[Point, complex] = {}
        for coords, re, im in data["points"]:
            out[tuple(int(c) for c in coords)] = complex(re, im)
        return cls(d, out)

    @classmethod
    def delta(cls, d: int, at: Point | int = 0) -> "TruncatedSequence":
        if isinstance(at, (int, np.integer)):
            at = (int(at),) * d
        return cls(d, {tuple(at): 1.0})

    @classmethod
    def ones_box(cls, d: int, radius: int) -> "TruncatedSequence":
        """All-ones sequence on the box [-radius, radius]^d."""
        pts = itertools.product(range(-radius, radius + 1), repeat=d)
        return cls(d, {p: 1.0 for p in pts})

    @classmethod
    def random(cls, d: int, radius: int, seed: int, density: float = 1.0) -> "TruncatedSequence":
        rng = np.random.default_rng(seed)
        out: dict[Point, complex] = {}
        for p in itertools.product(range(-radius, radius + 1), repeat=d):
            if rng.uniform() <= density:
                out[p] = complex(rng.standard_normal(), rng.standard_normal())
        return cls(d, out)


def _vadd(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def tau_m(b0: TruncatedSequence, bs: list[TruncatedSequence]) -> TruncatedSequence:
    """Shifted tensor transform on Z^{(m+1)d}:
    tau(k0, k) = b0(k0) * prod_j b_j(k_j + k0)."""
    d = b0.d
    if any(b.d != d for b in bs):
        raise ValueError("all sequences must share the base dimension")
    m = len(bs)
    out: dict[Point, complex] = {}
    for k0, v0 in b0.data.items():
        for combo in itertools.product(*[b.data.items() for b in bs]):
            val = v0
            key = list(k0)
            for (kj, vj) in combo:
                key.extend(_vsub(kj, k0))  # output coordinate k_j with k_j + k0 = kj
                val *= vj
            out_key = tuple(key)
            out[out_key] = out.get(out_key, 0j) + val
    return TruncatedSequence((m + 1) * d, out)


def star_convolve(a: TruncatedSequence, bs: list[TruncatedSequence]) -> TruncatedSequence:
    """Shared-shift convolution on Z^{md}:
    (a * b)(k) = sum_{k0} a(k0) prod_j b_j(k_j - k0); ordinary convolution at m = 1."""
    d = a.d
    if any(b.d != d for b in bs):
        raise ValueError("all sequences must share the base dimension")
    out: dict[Point, complex] = {}
    for k0, v0 in a.data.items():
        for combo in itertools.product(*[b.data.items() for b in bs]):
            val = v0
            key = []
            for (kj, vj) in combo:
                key.extend(_vadd(kj, k0))  # k_j - k0 = kj  =>  output k_j = kj + k0
                val *= vj
            out_key = tuple(key)
            out[out_key] = out.get(out_key, 0j) + val
    return TruncatedSequence(len(bs) * d, out)


def conv_star_2(rho: TruncatedSequence, c: TruncatedSequence) -> TruncatedSequence:
    """Convolution in the second index of a sequence on Z^d x Z^d:
    (rho *_2 c)(k0, n0) = sum_l rho(l) c(k0, n0 - l)."""
    if c.d != 2 * rho.d:
        raise ValueError(f"second argument must live on Z^{rho.d} x Z^{rho.d}")
    d = rho.d
    out: dict[Point, complex] = {}
    for l, w in rho.data.items():
        for (pt, v) in c.data.items():
            k0, n0 = pt[:d], pt[d:]
            key = k0 + _vadd(n0, l)
            out[key] = out.get(key, 0j) + w * v
    return TruncatedSequence(c.d, out)


def _pair_split(pt: Point, d: int) -> tuple[Point, Point]:
    return pt[:d], pt[d:]


def t_p_omega(a: TruncatedSequence, bs: list[TruncatedSequence], p,
              omega: SeparableWeight | None = None) -> dict[Point, float]:
    """Weighted convolution form over (n0, n):

    T(n0, n) = ( sum_{k0,k} |a(k0, n0 + sum k_j) prod_j b_j(n_j + k0, k_j)|^p
                 * Omega((k0,k),(n0,n))^p )^(1/p),

    returned sparsely on its exact support; max over shifts for p = inf.
    """
    d = a.d // 2
    if a.d != 2 * d or any(b.d != 2 * d for b in bs):
        raise ValueError("arguments must be sequences on Z^d x Z^d")
    m = len(bs)
    pf = as_float_p(p)
    acc: dict[Point, float] = {}
    for (apt, av) in a.data.items():
        k0, s = _pair_split(apt, d)
        for combo in itertools.product(*[b.data.items() for b in bs]):
            term = abs(av)
            kvec = []
            nvec = []
            for (bpt, bv) in combo:
                u, kj = _pair_split(bpt, d)
                kvec.append(kj)
                nvec.append(_vsub(u, k0))  # n_j + k0 = u
                term *= abs(bv)
            n0 = _vsub(s, tuple(sum(c[i] for c in kvec) for i in range(d)))
            key = n0 + tuple(itertools.chain.from_iterable(nvec))
            if omega is not None:
                zpt = k0 + tuple(itertools.chain.from_iterable(kvec)) + key
                term *= omega(np.array(zpt, dtype=float))
            if math.isinf(pf):
                acc[key] = max(acc.get(key, 0.0), term)
            else:
                acc[key] = acc.get(key, 0.0) + term ** pf
    if math.isinf(pf):
        return acc
    return {k: v ** (1.0 / pf) for k, v in acc.items()}


def s_p_omega(a: TruncatedSequence, bs: list[TruncatedSequence], p,
              omega: SeparableWeight | None = None) -> dict[Point, float]:
    """Companion convolution form with the roles of shifts and outputs exchanged:

    S(n0, n) = ( sum_{k0,k} |a(n0, -k0 + sum n_j) prod_j b_j(-k_j + n0, n_j)
                 * Omega((k0,k),(n0,n))|^p )^(1/p).
    """
    d = a.d // 2
    if a.d != 2 * d or any(b.d != 2 * d for b in bs):
        raise ValueError("arguments must be sequences on Z^d x Z^d")
    pf = as_float_p(p)
    acc: dict[Point, float] = {}
    for (apt, av) in a.data.items():
        n0, beta = _pair_split(apt, d)
        for combo in itertools.product(*[b.data.items() for b in bs]):
            term = abs(av)
            nvec = []
            kvec = []
            for (bpt, bv) in combo:
                gamma, nj = _pair_split(bpt, d)
                nvec.append(nj)
                kvec.append(_vsub(n0, gamma))  # -k_j + n0 = gamma
                term *= abs(bv)
            nsum = tuple(sum(c[i] for c in nvec) for i in range(d))
            k0 = _vsub(nsum, beta)  # -k0 + sum n_j = beta
            key = n0 + tuple(itertools.chain.from_iterable(nvec))
            if omega is not None:
                zpt = k0 + tuple(itertools.chain.from_iterable(kvec)) + key
                term *= omega(np.array(zpt, dtype=float))
            if math.isinf(pf):
                acc[key] = max(acc.get(key, 0.0), term)
            else:
                acc[key] = acc.get(key, 0.0) + term ** pf
    if math.isinf(pf):
        return acc
    return {k: v ** (1.0 / pf) for k, v in acc.items()}


def table_lq_norm(table: dict[Point, float], q) -> float:
    """Plain l^q norm of a sparse nonnegative table."""
    qf = as_float_p(q)
    if not table:
        return 0.0
    arr = np.asarray(list(table.values()))
    if math.isinf(qf):
        return float(arr.max())
    return float((arr ** qf).sum() ** (1.0 / qf))


def seq_mixed_norm(seq: TruncatedSequence, d: int, p, q,
                   weight: SeparableWeight | None = None) -> float:
    """l^{p,q} norm of a sequence on Z^d x Z^{md}: inner l^p over the first
    d coordinates, outer l^q over the remaining block."""
    if seq.d <= d:
        raise ValueError("sequence dimension must exceed the inner block")
    pf, qf = as_float_p(p), as_float_p(q)
    groups: dict[Point, list[float]] = {}
    for pt, v in seq.data.items():
        term = abs(v)
        if weight is not None:
            term *= weight(np.array(pt, dtype=float))
        groups.setdefault(pt[d:], []).append(term)
    inner_vals = []
    for terms in groups.values():
        arr = np.asarray(terms)
        if math.isinf(pf):
            inner_vals.append(float(arr.max()))
        else:
            inner_vals.append(float((arr ** pf).sum() ** (1.0 / pf)))
    arr = np.asarray(inner_vals)
    if arr.size == 0:
        return 0.0
    if math.isinf(qf):
        return float(arr.max())
    return float((arr ** qf).sum() ** (1.0 / qf))
