"""Command line front end.

    ptframe4 frames      --builtin line --samples 9
    ptframe4 curvatures  --builtin example1 --range -1:1 --samples 101
    ptframe4 euler       --expr "cos(s), sin(s), s, 0" --range 0:6
    ptframe4 classify    --builtin example2 --samples 257
    ptframe4 synthesize  --profile "1, 0.5, 0" --range 0:5 --step 1e-3
    ptframe4 compare     --builtin helix3 --samples 33 --halvings 4

Exit status is 0 on success, 1 for bad input and 2 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify_curve
from .curvespec import BUILTIN_NAMES, builtin_curve, parse_curve
from .curvegeom import sample_arclength
from .exceptions import FramingError, InputError, NumericalError
from .frenet import FrameSample
from .io import clean_json, ingest_samples, table_to_csv, table_to_json
from .pipeline import analyze, compare_methods
from .ptframe import parse_profile, synthesize_curve
from .validation import check_n_samples, check_positive

COMMANDS = ("frames", "curvatures", "euler", "classify", "synthesize", "compare")
FRAME_COLUMNS = ("s", "T1", "T2", "T3", "T4") + tuple(f"M{i}_{j}" for i in (1, 2, 3) for j in (1, 2, 3, 4))
CURVATURE_COLUMNS = ("s", "k1", "k2", "k3", "kappa", "tau", "sigma")
EULER_COLUMNS = ("s", "theta", "phi", "psi", "gimbal", "r_k1", "r_k2", "r_k3", "r_theta", "r_tau", "r_sigma", "r_constraint")
SYNTH_COLUMNS = ("s", "x1", "x2", "x3", "x4") + FRAME_COLUMNS[1:] + ("k1", "k2", "k3")
COMPARE_COLUMNS = ("samples", "step", "max_angle", "terminal_angle", "order")
# options whose values may start with '-'
_VALUE_FLAGS = ("--range", "--origin", "--expr", "--profile")


@dataclass
class RunConfig:
    command: str
    builtin: str | None = None
    expr: str | None = None
    input: str | None = None
    range: tuple | None = None
    samples: int = 257
    method: str = "rk4"
    init: str = "frenet"
    tol: float = 1e-6
    sphere_tol: float = 1e-6
    out: str | None = None
    format: str = "csv"
    profile: str | None = None
    step: float = 1e-3
    steps: int | None = None
    origin: tuple = (0.0, 0.0, 0.0, 0.0)
    halvings: int = 4

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        sources = [x for x in (self.builtin, self.expr, self.input) if x is not None]
        if self.command == "synthesize":
            if sources:
                raise InputError("synthesize takes --profile, not a curve source")
            if self.profile is None:
                raise InputError("synthesize needs --profile 'k1, k2, k3'")
            check_positive(self.step, "step")
            if self.steps is not None and self.steps < 1:
                raise InputError(f"steps must be at least 1, got {self.steps}")
        elif len(sources) != 1:
            raise InputError("give exactly one of --builtin, --expr, --input")
        if self.builtin is not None and self.builtin not in BUILTIN_NAMES:
            raise InputError(f"unknown builtin {self.builtin!r}; choose from {', '.join(BUILTIN_NAMES)}")
        check_n_samples(self.samples)
        check_positive(self.tol, "tol")
        check_positive(self.sphere_tol, "sphere_tol")
        if self.halvings < 1:
            raise InputError(f"halvings must be at least 1, got {self.halvings}")
        return self


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one-line diagnostic instead of argparse's usage dump and exit(2)
        raise InputError(message)


def _parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"range must look like a:b, got {text!r}")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"range must look like a:b, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InputError(f"range needs finite a < b, got {text!r}")
    return lo, hi


def _parse_origin(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"origin must be four comma-separated numbers, got {text!r}") from None
    if len(values) != 4:
        raise InputError(f"origin must be four comma-separated numbers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("curve source")
    src.add_argument("--builtin", help=f"catalog curve: {', '.join(BUILTIN_NAMES)}")
    src.add_argument("--expr", help="four comma-separated expressions in s")
    src.add_argument("--input", help="CSV file with rows t,x1,x2,x3,x4")
    common.add_argument("--range", help="parameter interval a:b")
    common.add_argument("--samples", type=int, default=257)
    common.add_argument("--method", choices=("rk4", "dr"), default="rk4")
    common.add_argument("--init", choices=("frenet", "pivot"), default="frenet")
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--sphere-tol", type=float, default=1e-6)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = _Parser(prog="ptframe4", description="Frenet and parallel transport framing of curves in E^4.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("frames", "parallel transport frame per sample"),
        ("curvatures", "k1, k2, k3 and kappa, tau, sigma per sample"),
        ("euler", "Euler angles and relation residuals per sample"),
        ("classify", "spherical / normal / rectifying / osculating report (JSON)"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    syn = sub.add_parser("synthesize", parents=[common], help="integrate a curve from k1, k2, k3 profiles")
    syn.add_argument("--profile", help="three comma-separated expressions in s")
    syn.add_argument("--step", type=float, default=1e-3)
    syn.add_argument("--steps", type=int)
    syn.add_argument("--origin", help="starting point x1,x2,x3,x4")
    cmp_ = sub.add_parser("compare", parents=[common], help="rk4 against double reflection under step halving")
    cmp_.add_argument("--halvings", type=int, default=4)
    return parser


def _join_value_flags(argv):
    """Glue ``--range -1:1`` into ``--range=-1:1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(_join_value_flags(list(argv)))
    cfg = RunConfig(
        command=ns.command,
        builtin=ns.builtin,
        expr=ns.expr,
        input=ns.input,
        range=None if ns.range is None else _parse_range(ns.range),
        samples=ns.samples,
        method=ns.method,
        init=ns.init,
        tol=ns.tol,
        sphere_tol=ns.sphere_tol,
        out=ns.out,
        format=ns.format,
    )
    if ns.command == "synthesize":
        cfg.profile, cfg.step, cfg.steps = ns.profile, ns.step, ns.steps
        if ns.origin is not None:
            cfg.origin = _parse_origin(ns.origin)
    if ns.command == "compare":
        cfg.halvings = ns.halvings
    return cfg.validate()


# -- commands ---------------------------------------------------------------


def _spec(cfg: RunConfig):
    if cfg.builtin is not None:
        return builtin_curve(cfg.builtin, cfg.range)
    return parse_curve(cfg.expr, cfg.range or (0.0, 1.0))


def _sampling(cfg: RunConfig, samples: int | None = None):
    if cfg.input is not None:
        return ingest_samples(cfg.input)
    return sample_arclength(_spec(cfg), samples or cfg.samples)


def _table(cfg, columns, rows, meta):
    if cfg.format == "json":
        return table_to_json(columns, rows, meta)
    return table_to_csv(columns, rows)


def _frame_rows(s, vectors):
    return [[sj, *F.ravel()] for sj, F in zip(s, vectors)]


def cmd_frames(cfg):
    a = analyze(_sampling(cfg), cfg.method, cfg.init)
    return _table(cfg, FRAME_COLUMNS, _frame_rows(a.pt.s, a.pt.vectors), {"command": "frames", "curve": a.sampling.label})


def cmd_curvatures(cfg):
    a = analyze(_sampling(cfg), cfg.method, cfg.init)
    fc = a.frenet_curvatures
    tau = np.where(fc.tau_defined, fc.tau, np.nan)
    sigma = np.where(fc.sigma_defined, fc.sigma, np.nan)
    rows = [[a.k.s[j], *a.k.k[j], fc.kappa[j], tau[j], sigma[j]] for j in range(len(a.k.s))]
    return _table(cfg, CURVATURE_COLUMNS, rows, {"command": "curvatures", "curve": a.sampling.label})


def cmd_euler(cfg):
    a = analyze(_sampling(cfg), cfg.method, cfg.init)
    g, r = a.angles, a.residuals
    rows = []
    for j in range(len(g.s)):
        gimbal = bool(g.gimbal[j]) if g.defined[j] else None
        rows.append([g.s[j], g.theta[j], g.phi[j], g.psi[j], gimbal, *(getattr(r, f)[j] for f in r.FIELDS)])
    return _table(cfg, EULER_COLUMNS, rows, {"command": "euler", "curve": a.sampling.label})


def cmd_classify(cfg):
    samp = _sampling(cfg)
    a = analyze(samp, cfg.method, cfg.init)
    report = classify_curve(samp, a.pt, a.k, cfg.tol, cfg.sphere_tol)
    doc = {"command": "classify", "curve": samp.label, "samples": len(samp.params), "method": cfg.method}
    doc.update(report.to_dict())
    return json.dumps(clean_json(doc), indent=1) + "\n"


def cmd_synthesize(cfg):
    domain = cfg.range or (0.0, 10.0)
    profile = parse_profile(cfg.profile, domain)
    steps = cfg.steps
    if steps is None:
        steps = int(math.floor((domain[1] - domain[0]) / cfg.step + 1e-9))
    frame0 = FrameSample(domain[0], np.eye(4))
    samp, frames = synthesize_curve(profile, frame0, cfg.origin, cfg.step, steps)
    k = profile.jets(samp.params)[0].T
    rows = [[frames.s[j], *samp.positions[j], *frames.vectors[j].ravel(), *k[j]] for j in range(len(samp.params))]
    return _table(cfg, SYNTH_COLUMNS, rows, {"command": "synthesize", "profile": cfg.profile})


def cmd_compare(cfg):
    if cfg.input is not None:
        raise InputError("compare needs an analytic curve (--builtin or --expr)")
    rows, prev = [], None
    n = cfg.samples
    for _ in range(cfg.halvings + 1):
        samp = sample_arclength(_spec(cfg), n)
        worst, terminal = compare_methods(samp, cfg.init)
        step = float(samp.arclens[-1] / (n - 1))
        order = math.log2(prev / terminal) if prev and terminal > 0 else None
        rows.append([n, step, worst, terminal, order])
        prev, n = terminal, 2 * n - 1
    return _table(cfg, COMPARE_COLUMNS, rows, {"command": "compare", "curve": samp.label})


HANDLERS = {
    "frames": cmd_frames,
    "curvatures": cmd_curvatures,
    "euler": cmd_euler,
    "classify": cmd_classify,
    "synthesize": cmd_synthesize,
    "compare": cmd_compare,
}


def run(cfg: RunConfig) -> str:
    """Execute a validated configuration and return the emitted text."""
    text = HANDLERS[cfg.command](cfg)
    if cfg.out is not None:
        Path(cfg.out).write_text(text, newline="")
    return text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
        text = run(cfg)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except NumericalError as exc:
        print(f"ptframe4: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError, OSError) as exc:
        print(f"ptframe4: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FramingError as exc:
        print(f"ptframe4: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
