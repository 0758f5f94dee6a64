"""Separable polynomial weights <z>^s and mixed-norm space specifications.

A :class:`SeparableWeight` is a product of Japanese-bracket factors
``<z_i>^{s_i}`` over a contiguous partition of the coordinates, with
``<z> = (1 + |z|^2)^(1/2)``. These are the discrete stand-ins for moderate
weights: each is v-moderate with ``v(z) = <z>^{sum |s_i|}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exponents import ExtendedExponent

CONDITIONS = ("M0", "M1", "M2", "W0", "W1", "W2")


@dataclass(frozen=True)
class SeparableWeight:
    """w(z) = prod_i <z_(block_i)>^{s_i} over contiguous coordinate blocks."""

    block_dims: tuple[int, ...]
    s: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "block_dims", tuple(int(b) for b in self.block_dims))
        object.__setattr__(self, "s", tuple(float(v) for v in self.s))
        if len(self.block_dims) != len(self.s):
            raise ValueError("block_dims and s must have equal length")
        if any(b < 1 for b in self.block_dims):
            raise ValueError("block dimensions must be positive")

    @property
    def ambient_dim(self) -> int:
        return sum(self.block_dims)

    @classmethod
    def flat(cls, dim: int) -> "SeparableWeight":
        """The constant weight 1 on Z^dim."""
        return cls((dim,), (0.0,))

    @classmethod
    def bracket(cls, dim: int, s: float) -> "SeparableWeight":
        """Single-block weight <z>^s on Z^dim."""
        return cls((dim,), (float(s),))

    def __call__(self, z: Sequence[float]) -> float:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.ambient_dim,):
            raise ValueError(f"point has {z.shape} coords, weight ambient dim is {self.ambient_dim}")
        out = 1.0
        offset = 0
        for b, s in zip(self.block_dims, self.s):
            block = z[offset:offset + b]
            out *= (1.0 + float(block @ block)) ** (s / 2.0)
            offset += b
        return out

    def eval_mesh(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; ``coords`` has the coordinates on the last axis."""
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1] != self.ambient_dim:
            raise ValueError(f"mesh has {coords.shape[-1]} coords, expected {self.ambient_dim}")
        out = np.ones(coords.shape[:-1], dtype=float)
        offset = 0
        for b, s in zip(self.block_dims, self.s):
            block = coords[..., offset:offset + b]
            out *= (1.0 + (block ** 2).sum(axis=-1)) ** (s / 2.0)
            offset += b
        return out

    def moderating_exponent(self) -> float:
        """Exponent of the submultiplicative majorant v(z) = <z>^{sum |s_i|}."""
        return float(sum(abs(v) for v in self.s))

    def to_json_dict(self) -> dict:
        return {"blocks": list(self.block_dims), "s": list(self.s)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SeparableWeight":
        return cls(tuple(data["blocks"]), tuple(data["s"]))


def weight_eval(w: SeparableWeight, z: Sequence[float]) -> float:
    return w(z)


@dataclass(frozen=True)
class MixedNormSpec:
    """How an indexed array is measured: inner l^p block, outer l^q block, weight."""

    p: ExtendedExponent
    q: ExtendedExponent
    weight: SeparableWeight | None
    inner_dims: int
    outer_dims: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", ExtendedExponent.from_value(self.p))
        object.__setattr__(self, "q", ExtendedExponent.from_value(self.q))
        if self.inner_dims < 0 or self.outer_dims < 0:
            raise ValueError("axis counts must be nonnegative")
        if self.weight is not None and self.weight.ambient_dim != self.ambient_dim:
            raise ValueError("weight ambient dimension does not match inner+outer split")

    @property
    def ambient_dim(self) -> int:
        return self.inner_dims + self.outer_dims


# -- moderation probes --------------------------------------------------------------
#
# The probe evaluates one of the structural inequalities M0-M2 / W0-W2 for a weight
# on the phase-space coordinates ((z0, zvec), (zeta0, zetavec)); a condition holds
# when the LHS/RHS ratio stays bounded as the sampling box grows.


def _zeros(d: int) -> np.ndarray:
    return np.zeros(d)


def _embed(m: int, d: int, z0=None, zvec=None, zeta0=None, zetavec=None) -> np.ndarray:
    """Assemble the 2(m+1)d coordinate vector from block values (broadcastable)."""
    parts = []
    z0 = _zeros(d) if z0 is None else z0
    zeta0 = _zeros(d) if zeta0 is None else zeta0
    zvec = [None] * m if zvec is None else zvec
    zetavec = [None] * m if zetavec is None else zetavec
    parts.append(np.asarray(z0, dtype=float))
    for j in range(m):
        parts.append(_zeros(d) if zvec[j] is None else np.asarray(zvec[j], dtype=float))
    parts.append(np.asarray(zeta0, dtype=float))
    for j in range(m):
        parts.append(_zeros(d) if zetavec[j] is None else np.asarray(zetavec[j], dtype=float))
    shapes = [np.shape(p)[:-1] for p in parts if np.ndim(p) > 1]
    lead = np.broadcast_shapes(*shapes) if shapes else ()
    cols = []
    for p in parts:
        p = np.asarray(p, dtype=float)
        if p.ndim == 1:
            p = np.broadcast_to(p, lead + (d,)) if lead else p
        else:
            p = np.broadcast_to(p, lead + (d,))
        cols.append(p)
    return np.concatenate([c.reshape(lead + (d,)) for c in cols], axis=-1) if lead else np.concatenate(cols)


def _omega0_w(w, m, d, x, xi):
    """Omega_0(x, xi) = w((x, (xi,..,xi)), (xi, 0))."""
    return w.eval_mesh(_embed(m, d, z0=x, zvec=[xi] * m, zeta0=xi))


def _omegai_w(w, m, d, i, x, xi):
    """Omega_i(x, xi) = w((xi, (0,..,-x,..,0)), (0, (0,..,xi,..,0))), -x at slot i."""
    zvec = [None] * m
    zvec[i - 1] = -np.asarray(x, dtype=float)
    zetavec = [None] * m
    zetavec[i - 1] = xi
    return w.eval_mesh(_embed(m, d, z0=xi, zvec=zvec, zetavec=zetavec))


def moderate_condition_probe(w: SeparableWeight, condition: str, sample_box: int,
                             m: int, d: int = 1) -> dict:
    """Scan one of M0-M2 / W0-W2 on integer points of the given box radius.

    Returns ``{"max_ratio": float, "witness": tuple}`` where the witness is the
    maximizing point of the scanned variables. The weight must live on
    Z^{2(m+1)d}.
    """
    condition = condition.upper()
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; expected one of {CONDITIONS}")
    if w.ambient_dim != 2 * (m + 1) * d:
        raise ValueError(
            f"weight ambient dim {w.ambient_dim} != 2(m+1)d = {2 * (m + 1) * d}")

    r = np.arange(-sample_box, sample_box + 1, dtype=float)

    def mesh(nvars: int) -> list[np.ndarray]:
        grids = np.meshgrid(*([r] * (nvars * d)), indexing="ij")
        return [np.stack(grids[i * d:(i + 1) * d], axis=-1) for i in range(nvars)]

    eps = 0.0
    if condition == "M0":
        z0, zeta0, *rest = mesh(2 + 2 * m)
        zvec, zetavec = rest[:m], rest[m:]
        lhs = w.eval_mesh(_embed(m, d, z0=z0, zvec=zvec, zeta0=zeta0, zetavec=zetavec))
        rhs = (w.eval_mesh(_embed(m, d, z0=z0, zetavec=zetavec))
               * w.eval_mesh(_embed(m, d, zvec=zvec, zeta0=zeta0)))
        vars_ = [z0] + zvec + [zeta0] + zetavec
    elif condition == "M1":
        z0, *zetavec = mesh(1 + m)
        lhs = w.eval_mesh(_embed(m, d, z0=z0, zetavec=zetavec))
        rhs = w.eval_mesh(_embed(m, d, z0=z0, zetavec=[-z0] * m))
        for j in range(m):
            zv = [None] * m
            zv[j] = zetavec[j] + z0
            rhs = rhs * w.eval_mesh(_embed(m, d, zetavec=zv))
        vars_ = [z0] + zetavec
    elif condition == "M2":
        zeta0, *zvec = mesh(1 + m)
        lhs = w.eval_mesh(_embed(m, d, zvec=zvec, zeta0=zeta0))
        rhs = w.eval_mesh(_embed(m, d, zeta0=zeta0 + sum(zvec)))
        for j in range(m):
            zv = [None] * m
            zv[j] = zvec[j]
            rhs = rhs * w.eval_mesh(_embed(m, d, zvec=zv, zeta0=-zvec[j]))
        vars_ = [zeta0] + zvec
    elif condition == "W0":
        z0, zeta0, *rest = mesh(2 + 2 * m)
        zvec, zetavec = rest[:m], rest[m:]
        lhs = w.eval_mesh(_embed(
            m, d,
            z0=z0 + sum(zetavec),
            zvec=[zvec[j] + zeta0 for j in range(m)],
            zeta0=zeta0, zetavec=zetavec))
        rhs = _omega0_w(w, m, d, z0, zeta0)
        for i in range(1, m + 1):
            rhs = rhs * _omegai_w(w, m, d, i, -zvec[i - 1], zetavec[i - 1])
        vars_ = [z0] + zvec + [zeta0] + zetavec
    elif condition == "W1":
        x, xi = mesh(2)
        lhs = _omega0_w(w, m, d, x, xi)
        rhs = _omega0_w(w, m, d, x, _zeros(d)) * _omega0_w(w, m, d, _zeros(d), xi)
        vars_ = [x, xi]
    else:  # W2
        x, xi = mesh(2)
        best_ratio, best_witness = -np.inf, None
        for i in range(1, m + 1):
            lhs = _omegai_w(w, m, d, i, x, xi)
            rhs = (_omegai_w(w, m, d, i, x, _zeros(d))
                   * _omegai_w(w, m, d, i, _zeros(d), xi))
            ratio = lhs / rhs
            flat = int(np.argmax(ratio))
            if ratio.reshape(-1)[flat] > best_ratio:
                best_ratio = float(ratio.reshape(-1)[flat])
                idx = np.unravel_index(flat, ratio.shape)
                best_witness = tuple(float(v[idx + (c,)]) for v in (x, xi) for c in range(d))
        return {"max_ratio": best_ratio, "witness": best_witness, "condition": condition}

    ratio = lhs / rhs
    flat = int(np.argmax(ratio))
    idx = np.unravel_index(flat, ratio.shape)
    witness = tuple(float(v[idx + (c,)]) for v in vars_ for c in range(d))
    return {"max_ratio": float(ratio.reshape(-1)[flat]), "witness": witness,
            "condition": condition}
