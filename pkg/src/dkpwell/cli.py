"""Command-line front end: ``dkpwell <command> [options]``.

Every artifact starts with ``# key=value`` lines holding the resolved
configuration.  Those lines are valid ``--config`` input, so passing an
artifact back as its own config reproduces it byte for byte.

Exit status: 0 on success, 1 on usage errors, 2 on domain errors (with a
single ``error: <kind>: <message>`` line on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .algebra import build_betas, verify_algebra
from .bound_states import (
    CONDITIONS,
    DEFAULT_GRID,
    NoCoalescenceError,
    find_critical,
    track_spectrum,
)
from .scattering import DEFAULT_OFFSET, PhysicalSetup, sweep, woods_saxon
from .special import Hyp2F1Args, SpecialFunctionError, hyp2f1
from .square_well import SquareWellSetup, bound_energies_square, transmission_square

COMMANDS = ("transmission", "spectrum", "critical", "algebra-check", "hyp2f1-eval",
            "potential-profile")
# options that never change an artifact and so stay out of the header
_NOT_ECHOED = {"command", "config", "output", "jobs"}


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x) + 0.0  # folds -0.0 into 0.0
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not lo <= hi:
        raise argparse.ArgumentTypeError(f"range {text!r} is decreasing")
    return lo, hi


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _physics(p: argparse.ArgumentParser, *, E: bool = True, eV0: bool = True):
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--r", type=float, default=0.0003)
    if eV0:
        p.add_argument("--eV0", "--ev0", dest="eV0", type=float, default=0.0)
    if E:
        p.add_argument("--E", type=float, default=-2.0)
    p.add_argument("--offset", type=float, default=DEFAULT_OFFSET)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dkpwell", description="DKP particles in a Woods-Saxon well")
    parser.add_argument("--version", action="version", version=f"dkpwell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file; flags override its values")
        p.add_argument("-o", "--output", help="write the artifact here instead of stdout")

    p = sub.add_parser("transmission", help="R and T along a sweep of eV0 or E")
    common(p)
    _physics(p)
    p.add_argument("--sweep", choices=("ev0", "E"), default="ev0")
    p.add_argument("--range", type=parse_range, default=(0.0, 10.0))
    p.add_argument("--steps", type=_positive_int, default=1000)
    p.add_argument("--oracle", choices=("none", "square-well"), default="none")
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("spectrum", help="bound energies over a range of depths")
    common(p)
    _physics(p, E=False)
    p.add_argument("--range", type=parse_range, default=None,
                   help="depth range lo:hi; omit for the single depth --eV0")
    p.add_argument("--steps", type=_positive_int, default=1)
    p.add_argument("--grid", type=_positive_int, default=DEFAULT_GRID)
    p.add_argument("--condition", choices=CONDITIONS, default="parity")
    p.add_argument("--oracle", choices=("none", "square-well"), default="none")

    p = sub.add_parser("critical", help="supercritical depth and energy")
    common(p)
    _physics(p, E=False, eV0=False)
    p.add_argument("--bracket", type=parse_range, default=(1.9, 2.1))
    p.add_argument("--reading", choices=("coalescence", "threshold"), default="coalescence")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--depth-steps", type=_positive_int, default=200)
    p.add_argument("--band", type=float, default=0.2)

    p = sub.add_parser("algebra-check", help="verify the DKP algebra exactly")
    common(p)
    p.add_argument("--spin", choices=("0", "1"), default="1")

    p = sub.add_parser("hyp2f1-eval", help="evaluate one Gauss hypergeometric function")
    common(p)
    p.add_argument("--alpha", type=parse_complex, required=True)
    p.add_argument("--beta", type=parse_complex, required=True)
    p.add_argument("--gamma", type=parse_complex, required=True)
    p.add_argument("--z", type=parse_complex, default=None)
    p.add_argument("--log1m-z", type=parse_complex, default=None,
                   help="log(1 - z), for z too close to 1 to represent")

    p = sub.add_parser("potential-profile", help="samples of the well V(z)")
    common(p)
    _physics(p, E=False)
    p.add_argument("--range", type=parse_range, default=(-4.0, 4.0))
    p.add_argument("--steps", type=_positive_int, default=801)
    return parser


def read_config(path: str) -> list[tuple[str, str]]:
    """``key=value`` pairs; a leading ``#`` is ignored and lines without ``=`` skipped."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip().lstrip("#").strip()
            if "=" not in line:
                continue
            key, value = (s.strip() for s in line.split("=", 1))
            if key:
                pairs.append((key, value))
    return pairs


def _config_argv(command: str, pairs, sub: argparse.ArgumentParser) -> list[str]:
    known = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                known[opt[2:]] = opt
                known[action.dest] = known.get(action.dest, opt)
    argv = []
    for key, value in pairs:
        if key == "command":
            if value != command:
                raise UsageError(f"config is for {value!r}, not {command!r}")
            continue
        if key in _NOT_ECHOED:
            continue
        opt = known.get(key) or known.get(key.replace("_", "-"))
        if opt is None:
            raise UsageError(f"unknown config key {key!r} for {command}")
        if value == "":
            continue
        argv.append(f"{opt}={value}")
    return argv


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        try:
            pairs = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        idx = argv.index(args.command)
        # config values first, so explicit flags after them win
        merged = argv[: idx + 1] + _config_argv(args.command, pairs, sub) + argv[idx + 1:]
        args = parser.parse_args(merged)
    return args


def header(args: argparse.Namespace) -> list[str]:
    lines = [f"# command={args.command}"]
    for key, value in sorted(vars(args).items()):
        if key in _NOT_ECHOED:
            continue
        if isinstance(value, tuple):
            value = ":".join(fmt(v) for v in value)
        elif isinstance(value, complex):
            value = repr(value)
        elif isinstance(value, float):
            value = fmt(value)
        elif value is None:
            value = ""
        lines.append(f"# {key.replace('_', '-')}={value}")
    return lines


@dataclass
class Artifact:
    lines: list[str] = field(default_factory=list)

    def add(self, *cells) -> None:
        self.lines.append(",".join(cells))


def _flags(tokens) -> str:
    return ";".join(tokens)


def _square_T(a: float, V: float, m: float, E: float) -> float:
    try:
        return transmission_square(SquareWellSetup(a, V, m), E)
    except (ValueError, ZeroDivisionError):
        return math.nan


def run_transmission(args) -> Artifact:
    variable = "eV0" if args.sweep == "ev0" else "E"
    template = PhysicalSetup(args.a, args.r, args.eV0, args.E, args.m)
    lo, hi = args.range
    if variable == "eV0" and lo < 0:
        raise DomainFailure("domain", "eV0 is a depth; the sweep range must be >= 0")
    rows = sweep(template, variable, lo, hi, args.steps, args.offset, args.jobs)
    out = Artifact()
    cols = ["x", "E", "eV0", "R", "T", "unitarity_residual", "flags"]
    if args.oracle == "square-well":
        cols.insert(-1, "T_square")
    out.add(*cols)
    for row in rows:
        cells = [fmt(row.x), fmt(row.E), fmt(row.eV0), fmt(row.R), fmt(row.T),
                 fmt(row.unitarity_residual)]
        if args.oracle == "square-well":
            T_sq = math.nan if abs(row.E) <= args.m else _square_T(args.a, row.eV0, args.m, row.E)
            cells.append(fmt(T_sq))
        cells.append(_flags(row.flags))
        out.add(*cells)
    return out


def run_spectrum(args) -> Artifact:
    template = PhysicalSetup(args.a, args.r, args.eV0, 0.0, args.m)
    lo, hi = args.range if args.range is not None else (args.eV0, args.eV0)
    if lo < 0:
        raise DomainFailure("domain", "eV0 is a depth; the range must be >= 0")
    steps = args.steps if args.range is not None else 1
    curve = track_spectrum(template, lo, hi, steps, args.grid, args.offset, args.condition)
    out = Artifact()
    cols = ["eV0", "root_index", "E", "residual", "flags"]
    if args.oracle == "square-well":
        cols.insert(-1, "E_square")
    out.add(*cols)
    for V, depth, fl in zip(curve.eV0_grid, curve.roots, curve.flags):
        square = bound_energies_square(SquareWellSetup(args.a, V, args.m)) \
            if args.oracle == "square-well" else []
        for idx, root in enumerate(depth):
            tokens = [root.parity] if root.parity != "-" else []
            tokens += list(fl) + (["nudged"] if root.nudged else [])
            cells = [fmt(V), fmt(idx), fmt(root.E), fmt(root.residual)]
            if args.oracle == "square-well":
                cells.append(fmt(square[idx]) if idx < len(square) else "nan")
            cells.append(_flags(tokens))
            out.add(*cells)
    return out


def _json(record: dict) -> str:
    def clean(v):
        if isinstance(v, float):
            return float(fmt(v)) if math.isfinite(v) else None
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v

    return json.dumps({k: clean(v) for k, v in record.items()}, sort_keys=False)


def run_critical(args) -> Artifact:
    template = PhysicalSetup(args.a, args.r, 0.0, 0.0, args.m)
    try:
        cp = find_critical(template, args.bracket, reading=args.reading, band=args.band,
                           depth_steps=args.depth_steps, tol=args.tol, offset=args.offset)
    except NoCoalescenceError as exc:
        raise DomainFailure("no-coalescence", str(exc)) from None
    return Artifact([_json(cp.record())])


def run_algebra(args) -> Artifact:
    betas = build_betas(args.spin)
    bad = verify_algebra(betas)
    report = {
        "spin": int(args.spin),
        "dim": betas.dim,
        "triples": 64,
        "violations": [[v.mu, v.nu, v.la] for v in bad],
        "pass": not bad,
    }
    return Artifact([json.dumps(report)])


def run_hyp2f1(args) -> Artifact:
    if args.z is None and args.log1m_z is None:
        raise UsageError("give --z or --log1m-z")
    z = args.z if args.z is not None else 1.0
    value = hyp2f1(Hyp2F1Args(args.alpha, args.beta, args.gamma, z, log1m_z=args.log1m_z))
    c = value.to_complex() if value.log_mag < 709 else complex(math.inf, math.inf)
    record = {
        "log_mag": value.log_mag,
        "phase": value.phase,
        "real": c.real,
        "imag": c.imag,
    }
    return Artifact([_json(record)])


def run_profile(args) -> Artifact:
    lo, hi = args.range
    out = Artifact()
    out.add("z", "V")
    z = np.linspace(lo, hi, args.steps)
    for zi, v in zip(z, woods_saxon(z, args.a, args.r, args.eV0) if args.steps > 1
                     else [woods_saxon(z[0], args.a, args.r, args.eV0)]):
        out.add(fmt(zi), fmt(v))
    return out


_RUNNERS = {
    "transmission": run_transmission,
    "spectrum": run_spectrum,
    "critical": run_critical,
    "algebra-check": run_algebra,
    "hyp2f1-eval": run_hyp2f1,
    "potential-profile": run_profile,
}


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        artifact = _RUNNERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainFailure as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return 2
    except (SpecialFunctionError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: domain: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(header(args) + artifact.lines) + "\n"
    try:
        with _sink(args.output) as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
