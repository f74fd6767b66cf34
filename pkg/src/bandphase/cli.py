"""Command-line driver: ``bandphase <command> [options]``.

Exit codes: 0 ok, 1 verification failure, 2 ambiguous signs,
3 not converging or a required assumption fails, 64 usage or parse error,
74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import io as bio
from .config import WINDOW_MARGIN, RunConfig
from .corpus import random_analytic, random_real, rng_for
from .cwt import measure
from .errors import (AmbiguousSigns, DCObstruction, EdgeLeakage, InvalidParameter, NoFiniteOrder,
                     NotConverging, ProgressiveWaveletNoLimit, QuadratureTooCoarse, Stalled)
from .oracles import wavelet_time
from .retrieval.pipeline import RetrieveOptions, retrieve
from .retrieval.sign import SignOptions
from .signals import evaluate
from .verification import SUITES, run_suite, scale_limit_errors
from .wavelets import from_descriptor, normalization_gain, normalize, probe_moment_order

log = logging.getLogger("bandphase")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_AMBIGUOUS = 2
EXIT_HYPOTHESIS = 3
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned 64-bit seed")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")
    g.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                   help="suppress progress messages")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="bandphase", parents=[common],
                     description="Wavelet sign retrieval for real bandlimited signals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="write a seeded random signal")
    p.add_argument("--kind", choices=("real", "analytic"), default="real")
    p.add_argument("--n-coeffs", type=int, default=None, help="untapered coefficient count")
    p.add_argument("--omega", type=float, default=None)

    p = sub.add_parser("cwt", parents=[common], help="wavelet magnitudes of a signal file")
    p.add_argument("signal")
    p.add_argument("--complex", action="store_true", help="add re, im columns")
    p.add_argument("--wavelet", default=None, help="wavelet descriptor JSON")

    p = sub.add_parser("retrieve", parents=[common], help="reconstruct a signal from magnitudes")
    p.add_argument("measurements")
    p.add_argument("--diagnostics", default=None,
                   help="diagnostics JSON path (default: <out>.diagnostics.json, or stderr)")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")

    p = sub.add_parser("plotdata", parents=[common], help="emit plot-ready CSV columns")
    p.add_argument("what", choices=("fourier", "time", "decay", "overlay"))
    p.add_argument("inputs", nargs="*", help="signal files (decay: one; overlay: any number)")
    p.add_argument("--wavelet", default=None, help="wavelet descriptor JSON")
    p.add_argument("--range", nargs=2, type=float, default=None, metavar=("LO", "HI"))
    p.add_argument("--points", type=int, default=401)

    p = sub.add_parser("probe", parents=[common], help="vanishing-moment probe of a wavelet")
    p.add_argument("--wavelet", default=None, help="wavelet descriptor JSON")
    return parser


# helpers ------------------------------------------------------------------------

def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    return cfg.with_overrides(seed=getattr(args, "seed", None))


def _wavelet(args, cfg):
    desc = cfg.wavelet
    if getattr(args, "wavelet", None):
        try:
            desc = json.loads(args.wavelet)
        except json.JSONDecodeError as e:
            raise InvalidParameter(f"--wavelet is not valid JSON: {e}") from None
    return from_descriptor(desc)


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        bio.atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(format(float(v), ".17g") for v in r) for r in rows]
    return "\n".join(lines) + "\n"


# commands -------------------------------------------------------------------------

def cmd_gen(args, cfg: RunConfig) -> int:
    n = args.n_coeffs if args.n_coeffs is not None else cfg.n_coeffs
    omega = args.omega if args.omega is not None else cfg.omega
    rng = rng_for(cfg.seed)
    if args.kind == "real":
        f = random_real(rng, n, omega)
    else:
        f = random_analytic(rng, n, omega, materialize=True)
    _emit(args, bio.signal_to_json(f))
    log.info("wrote %s signal with %d coefficients", args.kind, len(f.coeffs))
    return EXIT_OK


def cmd_cwt(args, cfg: RunConfig) -> int:
    f = bio.read_signal(args.signal)
    w = _wavelet(args, cfg)
    window = cfg.window or (4 * f.m_min - WINDOW_MARGIN, 4 * f.m_max + WINDOW_MARGIN)
    meas = measure(f, w, window, cfg.scale_array(), cfg.quadrature, cfg.tol("tau_quad"),
                   keep_phase=args.complex)
    _emit(args, bio.measurements_to_csv(meas, complex_values=args.complex))
    log.info("wrote %d x %d magnitudes", *meas.values.shape)
    return EXIT_OK


def cmd_retrieve(args, cfg: RunConfig) -> int:
    meas = bio.read_measurements(args.measurements)
    w = from_descriptor(meas.wavelet) if meas.wavelet else from_descriptor(cfg.wavelet)
    opts = RetrieveOptions(
        convergence_tol=cfg.tol("convergence"),
        sign=SignOptions(eps_zero=cfg.tol("eps_zero"), tau_neg=cfg.tol("tau_neg")),
        tau_dc=cfg.tol("tau_dc"), quadrature=cfg.quadrature)
    report = retrieve(meas, w, opts)
    diag = bio.diagnostics_to_json(report.residual_meas, report.ell_used, report.flags,
                                   report.diagnostics)
    _emit(args, bio.signal_to_json(report.candidate))
    target = args.diagnostics or (args.out + ".diagnostics.json" if getattr(args, "out", None) else None)
    if target:
        bio.atomic_write(target, diag)
    elif not getattr(args, "quiet", False):
        sys.stderr.write(diag)
    log.info("residual_meas %.3e, ell %d", report.residual_meas, report.ell_used)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    checks = run_suite(args.suite, cfg.seed)
    ok = all(c.passed for c in checks)
    doc = {"suite": args.suite, "seed": int(cfg.seed), "passed": ok,
           "checks": [c.to_dict() for c in checks]}
    for c in checks:
        log.info(c.line())
    _emit(args, json.dumps(doc, indent=1) + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_plotdata(args, cfg: RunConfig) -> int:
    if args.points < 2:
        raise InvalidParameter("--points must be at least 2")
    if args.what == "fourier":
        w = _wavelet(args, cfg)
        lo, hi = args.range or (-2.0, 12.0)
        xi = np.linspace(lo, hi, args.points)
        v = w.fourier_at(xi)
        text = _csv(["xi", "re", "im"], zip(xi, v.real, v.imag))
    elif args.what == "time":
        w = _wavelet(args, cfg)
        lo, hi = args.range or (-3.0, 3.0)
        x = np.linspace(lo, hi, args.points)
        v = wavelet_time(w, x, cfg.quadrature)
        text = _csv(["x", "re", "im"], zip(x, v.real, v.imag))
    elif args.what == "decay":
        if len(args.inputs) > 1:
            raise InvalidParameter("decay takes at most one signal file")
        f = bio.read_signal(args.inputs[0]) if args.inputs else random_real(rng_for(cfg.seed), cfg.n_coeffs)
        w = _wavelet(args, cfg)
        prof = probe_moment_order(w)
        scales = cfg.scale_array()
        e = scale_limit_errors(f, normalize(w, prof), prof.ell, scales, cfg.quadrature)
        text = _csv(["a", "E"], zip(scales, e))
    else:
        sigs = [bio.read_signal(p) for p in args.inputs]
        if not sigs:
            text = "x\n"
        else:
            lo, hi = args.range or (min(s.m_min * s.spacing for s in sigs) - 2.0,
                                    max(s.m_max * s.spacing for s in sigs) + 2.0)
            x = np.linspace(lo, hi, args.points)
            cols = [evaluate(s, x).real for s in sigs]
            text = _csv(["x"] + [f"s{i}" for i in range(len(sigs))], zip(x, *cols))
    _emit(args, text)
    return EXIT_OK


def cmd_probe(args, cfg: RunConfig) -> int:
    w = _wavelet(args, cfg)
    prof = probe_moment_order(w)
    gain = normalization_gain(prof)
    doc = {"ell": prof.ell, "c": [prof.c.real, prof.c.imag], "fit_quality": prof.fit_quality,
           "normalization_gain": [gain.real, gain.imag]}
    _emit(args, json.dumps(doc, indent=1) + "\n")
    return EXIT_OK


_COMMANDS = {"gen": cmd_gen, "cwt": cmd_cwt, "retrieve": cmd_retrieve, "verify": cmd_verify,
             "plotdata": cmd_plotdata, "probe": cmd_probe}

# error class -> (exit code, stage label)
_ERRORS = (
    (AmbiguousSigns, EXIT_AMBIGUOUS, "sign retrieval"),
    (ProgressiveWaveletNoLimit, EXIT_HYPOTHESIS, "moment probe"),
    (NoFiniteOrder, EXIT_HYPOTHESIS, "moment probe"),
    (NotConverging, EXIT_HYPOTHESIS, "scale extrapolation"),
    (DCObstruction, EXIT_HYPOTHESIS, "antidifferentiation"),
    (EdgeLeakage, EXIT_HYPOTHESIS, "sign retrieval"),
    (Stalled, EXIT_HYPOTHESIS, "reconstruction"),
    (QuadratureTooCoarse, EXIT_HYPOTHESIS, "quadrature"),
    (bio.FormatError, EXIT_USAGE, "input parsing"),
    (InvalidParameter, EXIT_USAGE, "arguments"),
    (OSError, EXIT_IO, "file access"),
)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"bandphase: {e}\n")
        return EXIT_USAGE
    quiet = getattr(args, "quiet", False)
    logging.basicConfig(level=logging.WARNING if quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr, force=True)
    try:
        cfg = _config(args)
        return _COMMANDS[args.command](args, cfg)
    except Exception as e:  # noqa: BLE001  -- mapped to documented exit codes below
        for cls, code, stage in _ERRORS:
            if isinstance(e, cls):
                sys.stderr.write(f"bandphase {args.command}: {stage} failed: "
                                 f"{type(e).__name__}: {e}\n")
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
