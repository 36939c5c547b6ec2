"""Command-line interface: ``haarlab list | norm | analyze | experiment``.

Exit status: 0 when every check passes, 1 on a failed check, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .families import make_function
from .haar import analyze, analyze_shifted, frame_coeffs
from .norms import (bv_norm, dyadic_besov_norm, frame_besov_norm, frame_sobolev_norm, frame_tl_norm,
                    ref_besov_norm, w1p_norm, wavelet_besov_norm, wavelet_tl_norm)
from .splines import cw_analyze

NORM_MODES = ("dyadic", "frame-besov", "frame-tl", "wavelet-besov", "wavelet-tl", "ref-besov",
              "w1p", "bv", "frame-sobolev")
ANALYSIS_KINDS = ("haar", "shifted", "frame", "wavelet")


class UsageError(Exception):
    pass


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _value(v.strip())
    return out


def _function(spec: str, params: dict):
    path = Path(spec)
    if spec.lstrip().startswith("{"):
        obj = json.loads(spec)
    elif path.suffix == ".json" and path.exists():
        obj = json.loads(path.read_text(encoding="utf-8"))
    else:
        obj = {"family": spec}
    obj.update(params)
    try:
        return make_function(obj)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="haarlab", description="Haar frame and dyadic Besov norm toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered experiments")

    pn = sub.add_parser("norm", help="compute a norm of a generated function (JSON to stdout)")
    pn.add_argument("function", help="family name, inline JSON, or a .json function file")
    pn.add_argument("--param", action="append", metavar="K=V", help="family parameter")
    pn.add_argument("--mode", choices=NORM_MODES, default="dyadic")
    pn.add_argument("--s", type=float, default=0.5)
    pn.add_argument("--p", default="2")
    pn.add_argument("--q", default="inf")
    pn.add_argument("-J", "--J", type=int, default=10, dest="J")

    pa = sub.add_parser("analyze", help="coefficient CSV of a generated function")
    pa.add_argument("function")
    pa.add_argument("--param", action="append", metavar="K=V")
    pa.add_argument("-J", "--J", type=int, default=6, dest="J")
    pa.add_argument("--kind", choices=ANALYSIS_KINDS, default="haar")
    pa.add_argument("--all", action="store_true", help="include zero entries")
    pa.add_argument("--out", help="write the CSV here instead of stdout")

    pe = sub.add_parser("experiment", help="run a registered experiment")
    pe.add_argument("name")
    pe.add_argument("--param", action="append", metavar="K=V")
    pe.add_argument("--out", default="haarlab-out", help="output directory")
    pe.add_argument("--seed", type=int)
    pe.add_argument("--json", dest="config", help="JSON file with params and seed")
    pe.add_argument("--plot", action="store_true", help="also write an SVG plot")
    return ap


def _cmd_list(args) -> int:
    width = max(len(n) for n, _ in ex.list_experiments())
    for name, desc in ex.list_experiments():
        print(f"{name:<{width}}  {desc}")
    return 0


def _cmd_norm(args) -> int:
    f = _function(args.function, _params(args.param))
    p, q = _value(args.p), _value(args.q)
    params = {"s": args.s, "p": p, "q": q}
    m = args.mode
    try:
        if m == "dyadic":
            r = dyadic_besov_norm(f, params, args.J)
        elif m == "frame-besov":
            r = frame_besov_norm(f, params, args.J)
        elif m == "frame-tl":
            r = frame_tl_norm(f, params, args.J)
        elif m == "wavelet-besov":
            r = wavelet_besov_norm(f, params, args.J)
        elif m == "wavelet-tl":
            r = wavelet_tl_norm(f, params, args.J)
        elif m == "ref-besov":
            r = ref_besov_norm(f, params, args.J)
        elif m == "w1p":
            r = w1p_norm(f, p)
        elif m == "bv":
            r = bv_norm(f)
        else:
            r = frame_sobolev_norm(f, p, args.J)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None
    print(r.dumps())
    return 0


def _cmd_analyze(args) -> int:
    f = _function(args.function, _params(args.param))
    fn = {"haar": analyze, "shifted": analyze_shifted, "frame": frame_coeffs, "wavelet": cw_analyze}[args.kind]
    try:
        c = fn(f, args.J)
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = c.to_csv(nonzero=not args.all)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_experiment(args) -> int:
    params, seed = {}, 0
    if args.config:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if "params" in cfg or "seed" in cfg:
            params.update(cfg.get("params", {}))
            seed = cfg.get("seed", seed)
        else:
            params.update(cfg)
    params.update(_params(args.param))
    if args.seed is not None:
        seed = args.seed
    try:
        res = ex.run_experiment(args.name, params, seed)
    except ex.ParameterError as e:
        raise UsageError(str(e)) from None
    paths = res.write(args.out, plot=args.plot)
    status = "PASS" if res.passed else "FAIL"
    print(f"{status} {res.name} seed={res.seed}")
    for k in res.failed_checks():
        print(f"  failed: {k}")
    for p in paths:
        print(f"  wrote {p}")
    return 0 if res.passed else 1


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    handler = {"list": _cmd_list, "norm": _cmd_norm, "analyze": _cmd_analyze,
               "experiment": _cmd_experiment}[args.command]
    try:
        return handler(args)
    except UsageError as e:
        print(f"haarlab: error: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"haarlab: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
