"""Handlers behind the service endpoints; the CLI calls these in-process."""

from __future__ import annotations

import io
import itertools
from fractions import Fraction

import numpy as np

from ..exponents import ExponentTuple, ExtendedExponent
from ..experiments import (DEFAULT_LAMBDAS, DEFAULT_SIZES, khinchin_empirical,
                           local_dilation_family, scaling_ratio_series,
                           star_growth_series)
from ..lattice import Grid, LatticeSignal, default_window, random_signal
from ..norms import (fourier_modulation_norm, make_partition, mixed_norm,
                     modulation_norm, wiener_amalgam_norm)
from ..regions import (RegionKind, bessel_bpwm_verdict, bpwf_verdict,
                       bpwm_verdict, brwf_verdict, brwm_verdict,
                       conv_sharp_verdict, local_brwm_verdict, star_conv_verdict,
                       tau_embed_verdict)
from ..rihaczek import rihaczek, rihaczek_identity_residual
from ..weights import MixedNormSpec, SeparableWeight
from . import models


class InputError(ValueError):
    """Raised for malformed request content; maps to HTTP 422 / CLI exit 2."""


def _ee(text: str | None, field: str) -> ExtendedExponent:
    if text is None:
        raise InputError(f"missing exponent field {field!r}")
    try:
        return ExtendedExponent.from_value(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad exponent for field {field!r}: {text!r} ({exc})") from exc


def _ee_list(items: list[str] | None, field: str, want: int) -> list[ExtendedExponent]:
    if items is None:
        raise InputError(f"missing exponent list {field!r}")
    if len(items) != want:
        raise InputError(f"field {field!r} needs {want} entries, got {len(items)}")
    return [_ee(t, field) for t in items]


def run_check(req: models.CheckRequest) -> models.VerdictResponse:
    try:
        kind = RegionKind(req.kind)
    except ValueError as exc:
        raise InputError(f"unknown region kind {req.kind!r}") from exc
    if kind in (RegionKind.BRWM, RegionKind.BRWF):
        m = req.m or 1
        tup = ExponentTuple(m, _ee(req.p, "p"), _ee(req.q, "q"),
                            tuple(_ee_list(req.pj, "pj", m + 1)),
                            tuple(_ee_list(req.qj, "qj", m + 1)))
        v = brwm_verdict(tup) if kind is RegionKind.BRWM else brwf_verdict(tup)
    elif kind in (RegionKind.CONV, RegionKind.STAR_CONV):
        m = req.m or 1
        qs = _ee_list(req.qj, "qj", m + 1)
        fn = conv_sharp_verdict if kind is RegionKind.CONV else star_conv_verdict
        v = fn(_ee(req.q, "q"), qs)
    elif kind is RegionKind.TAU_EMBED:
        m = req.m or 1
        v = tau_embed_verdict(_ee(req.p, "p"), _ee(req.q, "q"),
                              _ee_list(req.qj, "qj", m + 1))
    elif kind is RegionKind.LOCAL_BRWM:
        m = req.m or 1
        v = local_brwm_verdict(_ee(req.p, "p"), _ee(req.q, "q"),
                               _ee_list(req.pj, "pj", m + 1))
    elif kind is RegionKind.BPWM_LINEAR:
        v = bpwm_verdict(_ee(req.p, "p"), _ee(req.q, "q"), _ee(req.p1, "p1"),
                         _ee(req.q1, "q1"), _ee(req.p2, "p2"), _ee(req.q2, "q2"))
    elif kind is RegionKind.BPWF_LINEAR:
        v = bpwf_verdict(_ee(req.p, "p"), _ee(req.q, "q"), _ee(req.p1, "p1"),
                         _ee(req.q1, "q1"), _ee(req.p2, "p2"), _ee(req.q2, "q2"))
    elif kind is RegionKind.BESSEL_BPWM:
        if req.s is None:
            raise InputError("missing smoothing order field 's'")
        try:
            s = Fraction(req.s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad value for field 's': {req.s!r}") from exc
        v = bessel_bpwm_verdict(s, req.d or 1, _ee(req.p1, "p1"), _ee(req.q1, "q1"),
                                _ee(req.p2, "p2"), _ee(req.q2, "q2"))
    else:  # pragma: no cover
        raise InputError(f"unhandled kind {kind}")
    return models.VerdictResponse(bounded=v.bounded, failed=list(v.failed_conditions),
                                  boundary=v.boundary)


def _sweep_values(spec: models.SweepSpec) -> list[Fraction]:
    try:
        start, stop = Fraction(spec.start), Fraction(spec.stop)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad sweep bounds for {spec.name!r}") from exc
    if spec.count < 1:
        raise InputError("sweep count must be >= 1")
    if start > stop:
        raise InputError(f"reversed sweep range for {spec.name!r}")
    if spec.count == 1:
        if start != stop:
            raise InputError("single-point sweep needs start == stop")
        return [start]
    step = (stop - start) / (spec.count - 1)
    return [start + i * step for i in range(spec.count)]


def _recip_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def run_scan(req: models.ScanRequest) -> models.ScanResponse:
    if not 1 <= len(req.sweeps) <= 2:
        raise InputError("scan requires one or two swept exponents")
    sweep_names = [s.name for s in req.sweeps]
    values = [_sweep_values(s) for s in req.sweeps]
    header = [f"recip_{n}" for n in sweep_names] + ["bounded", "failed", "boundary"]
    rows: list[list[str]] = []
    scalar_fields = ("p", "q", "p1", "q1", "p2", "q2", "s")
    list_fields = ("pj", "qj")
    for combo in itertools.product(*values):
        payload = dict(req.fixed)
        for name, r in zip(sweep_names, combo):
            payload[name] = "inf" if r == 0 else _recip_str(1 / r)
        unknown = set(payload) - set(scalar_fields) - set(list_fields)
        if unknown:
            raise InputError(f"unknown exponent fields {sorted(unknown)}")
        kwargs: dict = {k: payload[k] for k in scalar_fields if k in payload}
        for k in list_fields:
            if k in payload:
                kwargs[k] = payload[k].split(",")
        v = run_check(models.CheckRequest(kind=req.kind, m=req.m, d=req.d, **kwargs))
        rows.append([_recip_str(r) for r in combo]
                    + [str(v.bounded).lower(), ";".join(v.failed),
                       str(v.boundary).lower()])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return models.ScanResponse(header=header, rows=rows, csv=buf.getvalue())


def _signal_from_payload(p: models.SignalPayload) -> LatticeSignal:
    try:
        return LatticeSignal.from_json_dict(p.model_dump())
    except ValueError as exc:
        raise InputError(f"bad signal payload: {exc}") from exc


def run_norm(req: models.NormRequest) -> models.NormResponse:
    f = _signal_from_payload(req.signal)
    weight = SeparableWeight.from_json_dict(req.weight.model_dump()) if req.weight else None
    p, q = _ee(req.p, "p"), _ee(req.q, "q")
    if req.space in ("modulation", "fourier-modulation"):
        window = (_signal_from_payload(req.window) if req.window
                  else default_window(f.grid))
        fn = modulation_norm if req.space == "modulation" else fourier_modulation_norm
        value = fn(f, window, p, q, weight)
    elif req.space == "wiener":
        from ..norms import default_partition_step
        step = req.step or default_partition_step(f.grid)
        part = make_partition(f.grid, step)
        value = wiener_amalgam_norm(f, part, p, q, weight)
    elif req.space == "lp":
        value = f.lp_norm(p)
    else:  # mixed
        inner = req.inner_dims if req.inner_dims is not None else f.grid.d // 2
        spec = MixedNormSpec(p, q, weight, inner, f.grid.d - inner)
        value = mixed_norm(f.values, spec)
    return models.NormResponse(value=value, space=req.space)


def run_rihaczek(req: models.RihaczekRequest):
    if req.mode == "check-identity":
        grid = Grid(req.d, req.N, req.alpha)
        worst = 0.0
        for t in range(req.trials):
            seed = req.seed + 1000 * t
            g = random_signal(grid, seed)
            fs = [random_signal(grid, seed + j + 1) for j in range(req.m)]
            windows = [default_window(grid) for _ in range(req.m + 1)]
            worst = max(worst, rihaczek_identity_residual(g, fs, windows))
        return models.RihaczekCheckResponse(max_residual=worst,
                                            passed=worst < req.tolerance)
    if req.g is None or not req.fs:
        raise InputError("compute mode needs 'g' and at least one entry in 'fs'")
    g = _signal_from_payload(req.g)
    fs = [_signal_from_payload(p) for p in req.fs]
    R = rihaczek(g, fs)
    flat = R.values.reshape(-1)
    return models.PhaseSpacePayload(d=R.grid.d, N=R.grid.N, alpha=R.grid.alpha,
                                    m=R.m, re=flat.real.tolist(),
                                    im=flat.imag.tolist())


EXPERIMENT_TUPLES = {
    # local dilation family: unbounded tuple from the sharpness analysis
    "unbounded-demo": ExponentTuple.build(1, 1, 1, ["2", "2"], ["2", "2"]),
    # stable all-2 tuple
    "bounded-demo": ExponentTuple.build(1, 2, 2, ["2", "2"], ["2", "2"]),
}


def _experiment_tuple(req: models.ExperimentRequest) -> ExponentTuple:
    if req.tuple_name:
        if req.tuple_name not in EXPERIMENT_TUPLES:
            raise InputError(f"unknown tuple preset {req.tuple_name!r}; "
                             f"options: {sorted(EXPERIMENT_TUPLES)}")
        return EXPERIMENT_TUPLES[req.tuple_name]
    m = req.m or 1
    return ExponentTuple(m, _ee(req.p, "p"), _ee(req.q, "q"),
                         tuple(_ee_list(req.pj, "pj", m + 1)),
                         tuple(_ee_list(req.qj, "qj", m + 1)))


def _series_csv(params, ratios) -> str:
    lines = ["parameter,ratio"]
    lines += [f"{p!r},{r!r}" for p, r in zip(params, ratios)]
    return "\n".join(lines) + "\n"


def run_experiment(req: models.ExperimentRequest) -> models.ExperimentResponse:
    if req.kind == "khinchin":
        n = req.coefficients or 64
        result = khinchin_empirical(np.ones(n), req.p or "2", trials=req.trials,
                                    seed=req.seed)
        csv = f"trials,ratio\n{req.trials},{result['ratio']!r}\n"
        return models.ExperimentResponse(kind=req.kind, report=result, csv=csv)
    if req.kind == "star-growth":
        m = req.m or 1
        q = req.q or "2"
        qj = req.qj or ["2"] * (m + 1)
        sizes = tuple(req.sizes) if req.sizes else DEFAULT_SIZES
        rep = star_growth_series(q, qj, sizes=sizes,
                                 tolerance=req.tolerance or 0.1)
        return models.ExperimentResponse(kind=req.kind, report=rep.to_json_dict(),
                                         csv=_series_csv(rep.params, rep.ratios))
    # scaling
    tup = _experiment_tuple(req)
    N = req.N or 1024
    grid = Grid.balanced(1, N)
    lambdas = tuple(req.lambdas) if req.lambdas else DEFAULT_LAMBDAS
    family = local_dilation_family(tup, grid, lambdas)
    rep = scaling_ratio_series(family, tup, tolerance=req.tolerance or 0.2)
    return models.ExperimentResponse(kind=req.kind, report=rep.to_json_dict(),
                                     csv=_series_csv(rep.params, rep.ratios))
