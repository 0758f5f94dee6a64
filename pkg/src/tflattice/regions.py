"""Exact decision procedures for the sharp boundedness regions.

Every predicate is a finite family of linear inequalities in the exact
rational reciprocals of the exponents, so verdicts at boundary points are
deterministic. A verdict carries the identifiers of every violated condition
family and a diagnostic flag marking near-boundary (or exactly tight)
satisfied inequalities.

Condition tags follow the per-kind numbering documented on each predicate;
indexed families append the slot, e.g. ``cd3[i=1]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exponents import HALF, ONE, ExponentTuple, ExtendedExponent

BOUNDARY_EPS = Fraction(1, 10 ** 9)


class RegionKind(str, enum.Enum):
    BRWM = "brwm"
    BRWF = "brwf"
    CONV = "conv"
    STAR_CONV = "star-conv"
    TAU_EMBED = "tau-embed"
    LOCAL_BRWM = "local-brwm"
    BPWM_LINEAR = "bpwm"
    BPWF_LINEAR = "bpwf"
    BESSEL_BPWM = "bessel-bpwm"


#: Number of exponent slots each kind consumes (for interface validation).
REGION_ARITY = {
    RegionKind.BRWM: "ExponentTuple",
    RegionKind.BRWF: "ExponentTuple",
    RegionKind.CONV: "q, qj[m+1]",
    RegionKind.STAR_CONV: "q, qj[m+1]",
    RegionKind.TAU_EMBED: "p, q, qj[m+1]",
    RegionKind.LOCAL_BRWM: "p, q, pj[m+1]",
    RegionKind.BPWM_LINEAR: "p, q, p1, q1, p2, q2",
    RegionKind.BPWF_LINEAR: "p, q, p1, q1, p2, q2",
    RegionKind.BESSEL_BPWM: "s, d, p1, q1, p2, q2",
}


@dataclass(frozen=True)
class Verdict:
    bounded: bool
    failed_conditions: tuple[str, ...]
    boundary: bool

    def __post_init__(self) -> None:
        if self.bounded != (len(self.failed_conditions) == 0):
            raise ValueError("bounded flag inconsistent with failed_conditions")

    def to_json_dict(self) -> dict:
        return {"bounded": self.bounded,
                "failed": list(self.failed_conditions),
                "boundary": self.boundary}


class _Checker:
    """Accumulates inequality checks and builds the Verdict."""

    def __init__(self, eps: Fraction = BOUNDARY_EPS) -> None:
        self.failed: list[str] = []
        self.boundary = False
        self.eps = eps

    def require_le(self, tag: str, lhs: Fraction, rhs: Fraction) -> None:
        if lhs <= rhs:
            if rhs - lhs < self.eps:
                self.boundary = True
        else:
            self.failed.append(tag)

    def require_lt(self, tag: str, lhs: Fraction, rhs: Fraction) -> None:
        if lhs < rhs:
            if rhs - lhs < self.eps:
                self.boundary = True
        else:
            self.failed.append(tag)

    def verdict(self) -> Verdict:
        return Verdict(not self.failed, tuple(self.failed), self.boundary)


def _r(p: ExtendedExponent) -> Fraction:
    return p.reciprocal


def _rmeet2(p: ExtendedExponent) -> Fraction:
    """1/(p ^ 2) = max(1/p, 1/2)."""
    return max(_r(p), HALF)


def _rjoin2(p: ExtendedExponent) -> Fraction:
    """1/(p v 2) = min(1/p, 1/2)."""
    return min(_r(p), HALF)


def _require_classical(*ps: ExtendedExponent) -> None:
    for p in ps:
        if _r(p) > 1:
            raise ValueError(f"exponent {p} is below 1; this verdict needs [1, inf]")


def lambda_set(tup: ExponentTuple) -> set[int]:
    """{j : 1/p >= 1 - 1/(p_j ^ 2)}, the slots whose local growth couples to p."""
    rp = _r(tup.p)
    return {j for j in range(tup.m + 1) if rp >= ONE - _rmeet2(tup.pj[j])}


def brwm_verdict(tup: ExponentTuple) -> Verdict:
    """Amalgam-to-modulation boundedness of the m-linear phase-space distribution.

    cd1[i]: 1/q <= 1 - 1/(p_i ^ 2); cd2: the Lambda inequality; cd3[i]:
    1/q <= 1/q_i; cd4: 1/p + m/q <= sum 1/q_j.
    """
    ch = _Checker()
    rp, rq = _r(tup.p), _r(tup.q)
    for i in range(tup.m + 1):
        ch.require_le(f"cd1[i={i}]", rq, ONE - _rmeet2(tup.pj[i]))
    lam = lambda_set(tup)
    if lam:
        lhs = (len(lam) - 1) * rp + rq
        rhs = len(lam) - sum(_rmeet2(tup.pj[j]) for j in lam)
        ch.require_le("cd2", lhs, rhs)
    for i in range(tup.m + 1):
        ch.require_le(f"cd3[i={i}]", rq, _r(tup.qj[i]))
    ch.require_le("cd4", rp + tup.m * rq, sum(_r(v) for v in tup.qj))
    return ch.verdict()


def brwf_verdict(tup: ExponentTuple) -> Verdict:
    """Amalgam-to-Fourier-modulation boundedness.

    cd1: the slot-0 pair 1/p <= 1 - 1/(p_0 ^ 2) and 1/q <= 1/q_0;
    cd2[i]: for i >= 1, 1/q <= 1 - 1/(p_i ^ 2) and 1/p, 1/q <= 1/q_i.
    """
    ch = _Checker()
    rp, rq = _r(tup.p), _r(tup.q)
    sub = _Checker(ch.eps)
    sub.require_le("", rp, ONE - _rmeet2(tup.pj[0]))
    sub.require_le("", rq, _r(tup.qj[0]))
    if sub.failed:
        ch.failed.append("cd1")
    ch.boundary = ch.boundary or sub.boundary
    for i in range(1, tup.m + 1):
        sub = _Checker(ch.eps)
        sub.require_le("", rq, ONE - _rmeet2(tup.pj[i]))
        sub.require_le("", rp, _r(tup.qj[i]))
        sub.require_le("", rq, _r(tup.qj[i]))
        if sub.failed:
            ch.failed.append(f"cd2[i={i}]")
        ch.boundary = ch.boundary or sub.boundary
    return ch.verdict()


def conv_sharp_verdict(q: ExtendedExponent,
                       qs: Sequence[ExtendedExponent]) -> Verdict:
    """Sharp region of the (m+1)-fold sequence convolution into l^q.

    cd1[j]: 1/q <= 1/q_j; cd2: (|S|-1) + 1/q <= sum_{j in S} 1/q_j over
    S = {j : q_j >= 1}.
    """
    qs = [ExtendedExponent.from_value(v) for v in qs]
    q = ExtendedExponent.from_value(q)
    if len(qs) < 2:
        raise ValueError("need at least two factors (m >= 1)")
    ch = _Checker()
    rq = _r(q)
    for j, qj in enumerate(qs):
        ch.require_le(f"cd1[j={j}]", rq, _r(qj))
    S = [j for j, qj in enumerate(qs) if _r(qj) <= 1]
    if S:
        ch.require_le("cd2", Fraction(len(S) - 1) + rq,
                      sum(_r(qs[j]) for j in S))
    return ch.verdict()


def star_conv_verdict(q: ExtendedExponent,
                      qs: Sequence[ExtendedExponent]) -> Verdict:
    """Sharp region of the shared-shift convolution into l^q(Z^{md}).

    cd1[j]: 1/q <= 1/q_j; cd2: 1 + m/q <= sum_j 1/q_j.
    """
    qs = [ExtendedExponent.from_value(v) for v in qs]
    q = ExtendedExponent.from_value(q)
    if len(qs) < 2:
        raise ValueError("need at least two factors (m >= 1)")
    m = len(qs) - 1
    ch = _Checker()
    rq = _r(q)
    for j, qj in enumerate(qs):
        ch.require_le(f"cd1[j={j}]", rq, _r(qj))
    ch.require_le("cd2", ONE + m * rq, sum(_r(qj) for qj in qs))
    return ch.verdict()


def tau_embed_verdict(p: ExtendedExponent, q: ExtendedExponent,
                      qs: Sequence[ExtendedExponent]) -> Verdict:
    """Region of the shifted tensor embedding into l^{p,q}(Z^d x Z^{md}).

    cd1: 1/p + m/q <= sum_j 1/q_j; cd2[j]: 1/q <= 1/q_j.
    """
    qs = [ExtendedExponent.from_value(v) for v in qs]
    p, q = ExtendedExponent.from_value(p), ExtendedExponent.from_value(q)
    if len(qs) < 2:
        raise ValueError("need at least two factors (m >= 1)")
    m = len(qs) - 1
    ch = _Checker()
    rp, rq = _r(p), _r(q)
    ch.require_le("cd1", rp + m * rq, sum(_r(qj) for qj in qs))
    for j, qj in enumerate(qs):
        ch.require_le(f"cd2[j={j}]", rq, _r(qj))
    return ch.verdict()


def local_brwm_verdict(p: ExtendedExponent, q: ExtendedExponent,
                       ps: Sequence[ExtendedExponent]) -> Verdict:
    """Local (single-cell) version of the amalgam-to-modulation region.

    cd1[j]: 1/q <= 1 - 1/(p_j ^ 2); cd2: the Lambda inequality with
    Lambda = {j : 1/p >= 1 - 1/(p_j ^ 2)}.
    """
    ps = [ExtendedExponent.from_value(v) for v in ps]
    p, q = ExtendedExponent.from_value(p), ExtendedExponent.from_value(q)
    if len(ps) < 2:
        raise ValueError("need at least two slots (m >= 1)")
    ch = _Checker()
    rp, rq = _r(p), _r(q)
    for j, pj in enumerate(ps):
        ch.require_le(f"cd1[j={j}]", rq, ONE - _rmeet2(pj))
    lam = [j for j, pj in enumerate(ps) if rp >= ONE - _rmeet2(pj)]
    if lam:
        lhs = (len(lam) - 1) * rp + rq
        rhs = len(lam) - sum(_rmeet2(ps[j]) for j in lam)
        ch.require_le("cd2", lhs, rhs)
    return ch.verdict()


def bpwm_verdict(p, q, p1, q1, p2, q2) -> Verdict:
    """Linear quantization with modulation-class symbols, amalgam to amalgam.

    cd1[x]: q <= p1 ^ 2, p2' ^ 2, q1', q2;
    cd2: 1/p >= 1/q' + max(1/(p1 ^ 2) - 1/(p2 v 2), 1/q2 - 1/q1).
    """
    p, q, p1, q1, p2, q2 = (ExtendedExponent.from_value(v) for v in (p, q, p1, q1, p2, q2))
    _require_classical(p, q, p1, q1, p2, q2)
    ch = _Checker()
    rq = _r(q)
    ch.require_le("cd1[p1]", _rmeet2(p1), rq)
    ch.require_le("cd1[p2']", _rmeet2(p2.conjugate()), rq)
    ch.require_le("cd1[q1']", ONE - _r(q1), rq)
    ch.require_le("cd1[q2]", _r(q2), rq)
    gap = max(_rmeet2(p1) - _rjoin2(p2), _r(q2) - _r(q1))
    ch.require_le("cd2", (ONE - rq) + gap, _r(p))
    return ch.verdict()


def bpwf_verdict(p, q, p1, q1, p2, q2) -> Verdict:
    """Linear quantization with Fourier-modulation-class symbols.

    cd1[x]: q <= p1 ^ 2, q1', q2; cd2[x]: p <= p2' ^ 2, q1'.
    """
    p, q, p1, q1, p2, q2 = (ExtendedExponent.from_value(v) for v in (p, q, p1, q1, p2, q2))
    _require_classical(p, q, p1, q1, p2, q2)
    ch = _Checker()
    rp, rq = _r(p), _r(q)
    ch.require_le("cd1[p1]", _rmeet2(p1), rq)
    ch.require_le("cd1[q1']", ONE - _r(q1), rq)
    ch.require_le("cd1[q2]", _r(q2), rq)
    ch.require_le("cd2[p2']", _rmeet2(p2.conjugate()), rp)
    ch.require_le("cd2[q1']", ONE - _r(q1), rp)
    return ch.verdict()


def bessel_bpwm_verdict(s, d: int, p1, q1, p2, q2) -> Verdict:
    """Smoothing-order region for modulation-class symbols between amalgam spaces.

    cd1: s >= d*(1/(p1 ^ 2) - 1/(p2 v 2)), strict when p1 = 1 or p2 = inf;
    cd2: 1/q2 <= 1/q1.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    p1, q1, p2, q2 = (ExtendedExponent.from_value(v) for v in (p1, q1, p2, q2))
    _require_classical(p1, q1, p2, q2)
    if not isinstance(s, Fraction):
        s = Fraction(str(s)) if isinstance(s, str) else Fraction(s)
    ch = _Checker()
    threshold = d * (_rmeet2(p1) - _rjoin2(p2))
    strict = (_r(p1) == 1) or p2.is_infinite
    if strict:
        ch.require_lt("cd1", threshold, s)
    else:
        ch.require_le("cd1", threshold, s)
    ch.require_le("cd2", _r(q2), _r(q1))
    return ch.verdict()


def dual_exponents(tup: ExponentTuple) -> ExponentTuple:
    """Conjugate the target pair and slot 0: the map that turns a quantization
    boundedness question into a distribution boundedness question."""
    pj = (tup.pj[0].conjugate(),) + tup.pj[1:]
    qj = (tup.qj[0].conjugate(),) + tup.qj[1:]
    return ExponentTuple(tup.m, tup.p.conjugate(), tup.q.conjugate(), pj, qj)


def bpwm_as_brwm_tuple(p, q, p1, q1, p2, q2) -> ExponentTuple:
    """The bilinear-form tuple whose brwm verdict matches bpwm_verdict."""
    vals = [ExtendedExponent.from_value(v) for v in (p, q, p1, q1, p2, q2)]
    p, q, p1, q1, p2, q2 = vals
    base = ExponentTuple(1, p, q, (p2, p1), (q2, q1))
    return dual_exponents(base)


def cordero_nicola_diagonal(p, q, p0, q0) -> bool:
    """Independent description of the diagonal region:
    1/p >= |1/p0 - 1/2| + 1/q' and q <= p0, p0', q0, q0'."""
    p, q, p0, q0 = (ExtendedExponent.from_value(v) for v in (p, q, p0, q0))
    _require_classical(p, q, p0, q0)
    rp, rq, rp0, rq0 = _r(p), _r(q), _r(p0), _r(q0)
    gap = abs(rp0 - HALF)
    if rp < (ONE - rq) + gap:
        return False
    # q <= p0, p0', q0, q0'  in reciprocals: 1/q >= each reciprocal
    return all(rq >= v for v in (rp0, ONE - rp0, rq0, ONE - rq0))
