"""Command-line front end.

The CLI is a thin client over the service layer: each subcommand builds the
same request model the HTTP endpoints accept and either executes it in-process
(default) or POSTs it to a running service via ``--server``. All randomized
commands take an explicit ``--seed`` (default 0); identical configuration and
seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import NoReturn

from .service import handlers, models


def _fail(msg: str) -> NoReturn:
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(2)


def _load_config(path: str | None, allowed: set[str]) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        _fail(f"config {path} must hold a JSON object")
    unknown = set(data) - allowed
    if unknown:
        _fail(f"unknown config keys {sorted(unknown)} in {path}")
    return data


def _merge(args: argparse.Namespace, config: dict, keys: list[str]) -> None:
    for key in keys:
        if getattr(args, key, None) in (None, []) and key in config:
            setattr(args, key, config[key])


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=None)


def _post(server: str, route: str, payload: dict) -> dict:
    import httpx

    resp = httpx.post(server.rstrip("/") + route, json=payload, timeout=600.0)
    if resp.status_code != 200:
        _fail(f"server returned {resp.status_code}: {resp.text}")
    return resp.json()


def _read_signal(path: str) -> models.SignalPayload:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return models.SignalPayload(**data)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _fail(f"cannot read signal {path}: {exc}")


def _write_output(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# -- subcommands ----------------------------------------------------------------


def cmd_check(args) -> int:
    config = _load_config(args.config, {"kind", "m", "d", "p", "q", "pj", "qj",
                                        "p1", "q1", "p2", "q2", "s"})
    _merge(args, config, ["kind", "m", "d", "p", "q", "pj", "qj",
                          "p1", "q1", "p2", "q2", "s"])
    if not args.kind:
        _fail("--kind is required")
    req = models.CheckRequest(
        kind=args.kind, m=args.m, d=args.d, p=args.p, q=args.q,
        pj=args.pj.split(",") if isinstance(args.pj, str) else args.pj,
        qj=args.qj.split(",") if isinstance(args.qj, str) else args.qj,
        p1=args.p1, q1=args.q1, p2=args.p2, q2=args.q2, s=args.s)
    if args.server:
        out = _post(args.server, "/check", req.model_dump())
    else:
        out = handlers.run_check(req).model_dump()
    print(_dump_json(out))
    return 0


def _parse_sweep(text: str) -> models.SweepSpec:
    try:
        name, rng = text.split("=", 1)
        start, stop, count = rng.split(":")
        return models.SweepSpec(name=name.strip(), start=start, stop=stop,
                                count=int(count))
    except ValueError:
        _fail(f"bad sweep spec {text!r}; expected name=start:stop:count "
              "(bounds are reciprocals)")


def cmd_scan(args) -> int:
    if not args.sweep:
        _fail("at least one --sweep is required")
    fixed = {}
    for k in ("p", "q", "p1", "q1", "p2", "q2", "s", "pj", "qj"):
        v = getattr(args, k)
        if v is not None:
            fixed[k] = v
    req = models.ScanRequest(kind=args.kind, m=args.m, d=args.d,
                             sweeps=[_parse_sweep(s) for s in args.sweep],
                             fixed=fixed)
    if args.server:
        out = _post(args.server, "/scan", req.model_dump())
        csv_text = out["csv"]
    else:
        csv_text = handlers.run_scan(req).csv
    _write_output(args.output, csv_text)
    return 0


def cmd_norm(args) -> int:
    signal = _read_signal(args.input)
    window = _read_signal(args.window) if args.window else None
    weight = None
    if args.weight:
        try:
            weight = models.WeightPayload(
                **json.loads(Path(args.weight).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            _fail(f"cannot read weight {args.weight}: {exc}")
    req = models.NormRequest(space=args.space, p=args.p, q=args.q, signal=signal,
                             window=window, weight=weight, step=args.step,
                             inner_dims=args.inner_dims)
    if args.server:
        out = _post(args.server, "/norm", req.model_dump())
    else:
        out = handlers.run_norm(req).model_dump()
    text = _dump_json(out)
    if args.output:
        _write_output(args.output, text + "\n")
    else:
        print(text)
    return 0


def cmd_rihaczek(args) -> int:
    if args.check_identity:
        req = models.RihaczekRequest(mode="check-identity", m=args.m, N=args.N,
                                     d=args.d, alpha=args.alpha, seed=args.seed,
                                     trials=args.trials, tolerance=args.tolerance)
        if args.server:
            out = _post(args.server, "/rihaczek", req.model_dump())
        else:
            out = handlers.run_rihaczek(req).model_dump(by_alias=True)
        print(_dump_json(out))
        return 0
    if not args.g or not args.f:
        _fail("compute mode needs --g and at least one --f")
    req = models.RihaczekRequest(
        mode="compute", g=_read_signal(args.g),
        fs=[_read_signal(p) for p in args.f], m=len(args.f))
    if args.server:
        out = _post(args.server, "/rihaczek", req.model_dump())
    else:
        out = handlers.run_rihaczek(req).model_dump()
    _write_output(args.output, _dump_json(out) + "\n")
    return 0


def cmd_experiment(args) -> int:
    req = models.ExperimentRequest(
        kind=args.kind, tuple_name=args.tuple, m=args.m, p=args.p, q=args.q,
        pj=args.pj.split(",") if args.pj else None,
        qj=args.qj.split(",") if args.qj else None,
        N=args.N, seed=args.seed, trials=args.trials,
        coefficients=args.coefficients,
        lambdas=args.lambdas, sizes=args.sizes, tolerance=args.tolerance)
    if args.server:
        out = _post(args.server, "/experiment", req.model_dump())
        report, csv_text = out["report"], out["csv"]
    else:
        resp = handlers.run_experiment(req)
        report, csv_text = resp.report, resp.csv
    if args.output_csv:
        _write_output(args.output_csv, csv_text)
    if args.output_json:
        _write_output(args.output_json, _dump_json(report) + "\n")
    print(_dump_json(report))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tflattice",
        description="Time-frequency lattice toolkit: verdicts, norms, "
                    "phase-space distributions, scaling experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--server", help="base URL of a running service; "
                                        "default executes in-process")

    def add_exponents(p, with_tuple=True, with_linear=True):
        if with_tuple:
            p.add_argument("--m", type=int, default=None)
            p.add_argument("--p")
            p.add_argument("--q")
            p.add_argument("--pj", help="comma-separated, m+1 entries")
            p.add_argument("--qj", help="comma-separated, m+1 entries")
        if with_linear:
            p.add_argument("--p1")
            p.add_argument("--q1")
            p.add_argument("--p2")
            p.add_argument("--q2")
            p.add_argument("--s", help="smoothing order (exact fraction or decimal)")
        p.add_argument("--d", type=int, default=None)

    p_check = sub.add_parser("check", help="evaluate one region verdict")
    p_check.add_argument("--kind", help="brwm|brwf|conv|star-conv|tau-embed|"
                                        "local-brwm|bpwm|bpwf|bessel-bpwm")
    add_exponents(p_check)
    p_check.add_argument("--config", help="JSON file with default flag values")
    add_common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_scan = sub.add_parser("scan", help="sweep exponents and emit a CSV of verdicts")
    p_scan.add_argument("--kind", required=True)
    p_scan.add_argument("--sweep", action="append",
                        help="name=start:stop:count over reciprocals; repeatable")
    add_exponents(p_scan)
    p_scan.add_argument("--output", help="CSV path (stdout if omitted)")
    add_common(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_norm = sub.add_parser("norm", help="compute a space norm of a stored signal")
    p_norm.add_argument("--space", required=True,
                        choices=["modulation", "fourier-modulation", "wiener",
                                 "mixed", "lp"])
    p_norm.add_argument("--p", default="2")
    p_norm.add_argument("--q", default="2")
    p_norm.add_argument("--input", required=True, help="signal JSON path")
    p_norm.add_argument("--window", help="window signal JSON path")
    p_norm.add_argument("--weight", help="weight JSON path ({blocks, s})")
    p_norm.add_argument("--step", type=int, help="partition step for wiener")
    p_norm.add_argument("--inner-dims", type=int, dest="inner_dims")
    p_norm.add_argument("--output", help="write the result JSON here")
    add_common(p_norm)
    p_norm.set_defaults(func=cmd_norm)

    p_rih = sub.add_parser("rihaczek", help="assemble a phase-space distribution "
                                            "or check its transform identity")
    p_rih.add_argument("--check-identity", action="store_true")
    p_rih.add_argument("--m", type=int, default=1)
    p_rih.add_argument("--N", type=int, default=8)
    p_rih.add_argument("--d", type=int, default=1)
    p_rih.add_argument("--alpha", type=float, default=1.0)
    p_rih.add_argument("--seed", type=int, default=0)
    p_rih.add_argument("--trials", type=int, default=1)
    p_rih.add_argument("--tolerance", type=float, default=1e-9)
    p_rih.add_argument("--g", help="signal JSON for the first slot")
    p_rih.add_argument("--f", action="append", help="argument signal JSON; repeatable")
    p_rih.add_argument("--output", help="phase-space JSON output path")
    add_common(p_rih)
    p_rih.set_defaults(func=cmd_rihaczek)

    p_exp = sub.add_parser("experiment", help="run a scaling, sign-average, or "
                                              "sequence-growth experiment")
    p_exp.add_argument("--kind", required=True,
                       choices=["scaling", "khinchin", "star-growth"])
    p_exp.add_argument("--tuple", help="named exponent preset "
                                       "(unbounded-demo | bounded-demo)")
    p_exp.add_argument("--m", type=int, default=None)
    p_exp.add_argument("--p")
    p_exp.add_argument("--q")
    p_exp.add_argument("--pj")
    p_exp.add_argument("--qj")
    p_exp.add_argument("--N", type=int, default=None)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--trials", type=int, default=200)
    p_exp.add_argument("--coefficients", type=int, default=64)
    p_exp.add_argument("--lambdas", type=float, nargs="+", default=None)
    p_exp.add_argument("--sizes", type=int, nargs="+", default=None)
    p_exp.add_argument("--tolerance", type=float, default=None)
    p_exp.add_argument("--output-csv", dest="output_csv")
    p_exp.add_argument("--output-json", dest="output_json")
    add_common(p_exp)
    p_exp.set_defaults(func=cmd_experiment)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except handlers.InputError as exc:
        _fail(str(exc))
    except ValueError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
