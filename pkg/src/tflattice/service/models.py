"""Request and response models shared by the HTTP service and the CLI.

All exponent fields are strings so clients can send exact values ("inf",
"4/3", "0.1"); unknown keys are rejected everywhere.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SignalPayload(StrictModel):
    d: int
    N: int
    alpha: float = 1.0
    re: list[float]
    im: list[float]


class PhaseSpacePayload(StrictModel):
    d: int
    N: int
    alpha: float = 1.0
    m: int
    re: list[float]
    im: list[float]


class WeightPayload(StrictModel):
    blocks: list[int]
    s: list[float]


class CheckRequest(StrictModel):
    kind: str
    m: Optional[int] = None
    p: Optional[str] = None
    q: Optional[str] = None
    pj: Optional[list[str]] = None
    qj: Optional[list[str]] = None
    p1: Optional[str] = None
    q1: Optional[str] = None
    p2: Optional[str] = None
    q2: Optional[str] = None
    s: Optional[str] = None
    d: Optional[int] = None


class VerdictResponse(StrictModel):
    bounded: bool
    failed: list[str]
    boundary: bool


class SweepSpec(StrictModel):
    name: str
    start: str
    stop: str
    count: int = Field(ge=1)


class ScanRequest(StrictModel):
    kind: str
    sweeps: list[SweepSpec]
    fixed: dict[str, str] = Field(default_factory=dict)
    m: Optional[int] = None
    d: Optional[int] = None


class ScanResponse(StrictModel):
    header: list[str]
    rows: list[list[str]]
    csv: str


class NormRequest(StrictModel):
    space: Literal["modulation", "fourier-modulation", "wiener", "mixed", "lp"]
    p: str = "2"
    q: str = "2"
    signal: SignalPayload
    window: Optional[SignalPayload] = None
    weight: Optional[WeightPayload] = None
    step: Optional[int] = None
    inner_dims: Optional[int] = None


class NormResponse(StrictModel):
    value: float
    space: str


class RihaczekRequest(StrictModel):
    mode: Literal["compute", "check-identity"] = "compute"
    g: Optional[SignalPayload] = None
    fs: Optional[list[SignalPayload]] = None
    m: int = 1
    N: int = 8
    d: int = 1
    alpha: float = 1.0
    seed: int = 0
    trials: int = 1
    tolerance: float = 1e-9


class RihaczekCheckResponse(StrictModel):
    max_residual: float
    passed: bool = Field(alias="pass")
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ExperimentRequest(StrictModel):
    kind: Literal["scaling", "khinchin", "star-growth"]
    tuple_name: Optional[str] = None
    m: Optional[int] = None
    p: Optional[str] = None
    q: Optional[str] = None
    pj: Optional[list[str]] = None
    qj: Optional[list[str]] = None
    N: Optional[int] = None
    seed: int = 0
    trials: int = 200
    coefficients: Optional[int] = 64
    lambdas: Optional[list[float]] = None
    sizes: Optional[list[int]] = None
    tolerance: Optional[float] = None


class ExperimentResponse(StrictModel):
    kind: str
    report: dict
    csv: str
