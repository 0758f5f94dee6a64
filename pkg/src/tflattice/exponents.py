"""Extended Lebesgue exponents p in (0, inf], stored by exact reciprocal.

Every region predicate in :mod:`tflattice.regions` is a finite set of linear
inequalities in the reciprocals 1/p, so keeping reciprocals as exact
`fractions.Fraction` values makes boundary membership exact and repeatable.
The value 1/p = 0 encodes p = inf; reciprocals above 1 encode the quasi-norm
range p < 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

HALF = Fraction(1, 2)
ONE = Fraction(1)

ExponentLike = Union["ExtendedExponent", int, float, str, Fraction]


@dataclass(frozen=True, slots=True)
class ExtendedExponent:
    """An exponent p in (0, inf] represented by its reciprocal 1/p >= 0."""

    reciprocal: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.reciprocal, Fraction):
            object.__setattr__(self, "reciprocal", Fraction(self.reciprocal))
        if self.reciprocal < 0:
            raise ValueError(f"reciprocal must be >= 0, got {self.reciprocal}")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_value(cls, value: ExponentLike) -> "ExtendedExponent":
        """Build from an exponent value: 'inf', a number, or a fraction 'a/b'.

        Strings parse exactly: ``"0.1"`` becomes 1/10, ``"4/3"`` becomes 4/3.
        """
        if isinstance(value, ExtendedExponent):
            return value
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("inf", "infinity", "oo"):
                return cls(Fraction(0))
            value = Fraction(text)
        if isinstance(value, float):
            if value == float("inf"):
                return cls(Fraction(0))
            value = Fraction(value)
        if isinstance(value, int):
            value = Fraction(value)
        if value <= 0:
            raise ValueError(f"exponent must be positive, got {value}")
        return cls(1 / value)

    @classmethod
    def from_reciprocal(cls, r: Union[int, float, str, Fraction]) -> "ExtendedExponent":
        if isinstance(r, str):
            r = Fraction(r.strip())
        return cls(Fraction(r))

    # -- views --------------------------------------------------------------

    @property
    def is_infinite(self) -> bool:
        return self.reciprocal == 0

    def value(self) -> float:
        """The exponent as a float (inf for 1/p = 0)."""
        if self.is_infinite:
            return float("inf")
        return float(1 / self.reciprocal)

    def __repr__(self) -> str:
        if self.is_infinite:
            return "ExtendedExponent(inf)"
        return f"ExtendedExponent({1 / self.reciprocal})"

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        p = 1 / self.reciprocal
        return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"

    # -- ordering (by exponent value; inf is largest) ------------------------

    def __lt__(self, other: "ExtendedExponent") -> bool:
        return self.reciprocal > other.reciprocal

    def __le__(self, other: "ExtendedExponent") -> bool:
        return self.reciprocal >= other.reciprocal

    def __gt__(self, other: "ExtendedExponent") -> bool:
        return self.reciprocal < other.reciprocal

    def __ge__(self, other: "ExtendedExponent") -> bool:
        return self.reciprocal <= other.reciprocal

    # -- arithmetic used by the region predicates ----------------------------

    def conjugate(self) -> "ExtendedExponent":
        """The dual exponent p' with 1/p + 1/p' = 1; defined for 1 <= p <= inf."""
        if self.reciprocal > 1:
            raise ValueError(f"conjugate undefined for p < 1 (reciprocal {self.reciprocal})")
        return ExtendedExponent(ONE - self.reciprocal)

    def meet2(self) -> "ExtendedExponent":
        """min(p, 2), i.e. reciprocal max(1/p, 1/2)."""
        return ExtendedExponent(max(self.reciprocal, HALF))

    def join2(self) -> "ExtendedExponent":
        """max(p, 2), i.e. reciprocal min(1/p, 1/2)."""
        return ExtendedExponent(min(self.reciprocal, HALF))


INF = ExtendedExponent(Fraction(0))
TWO = ExtendedExponent(HALF)


def meet2(p: ExponentLike) -> ExtendedExponent:
    return ExtendedExponent.from_value(p).meet2()


def join2(p: ExponentLike) -> ExtendedExponent:
    return ExtendedExponent.from_value(p).join2()


def conjugate(p: ExponentLike) -> ExtendedExponent:
    return ExtendedExponent.from_value(p).conjugate()


@dataclass(frozen=True, slots=True)
class ExponentTuple:
    """Exponent data (m; p, q; p_0..p_m; q_0..q_m) for the multilinear verdicts."""

    m: int
    p: ExtendedExponent
    q: ExtendedExponent
    pj: tuple[ExtendedExponent, ...]
    qj: tuple[ExtendedExponent, ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "pj", tuple(ExtendedExponent.from_value(v) for v in self.pj))
        object.__setattr__(self, "qj", tuple(ExtendedExponent.from_value(v) for v in self.qj))
        object.__setattr__(self, "p", ExtendedExponent.from_value(self.p))
        object.__setattr__(self, "q", ExtendedExponent.from_value(self.q))
        if len(self.pj) != self.m + 1 or len(self.qj) != self.m + 1:
            raise ValueError(
                f"pj and qj must each have m+1 = {self.m + 1} entries, "
                f"got {len(self.pj)} and {len(self.qj)}"
            )

    @classmethod
    def build(cls, m: int, p: ExponentLike, q: ExponentLike,
              pj: list, qj: list) -> "ExponentTuple":
        return cls(m, ExtendedExponent.from_value(p), ExtendedExponent.from_value(q),
                   tuple(ExtendedExponent.from_value(v) for v in pj),
                   tuple(ExtendedExponent.from_value(v) for v in qj))
