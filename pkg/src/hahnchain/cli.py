"""Command-line front end.

Exit codes: 0 success, 1 a transport verdict or self-test failed, 2 bad
input (invalid chain, unreadable file, bad flags).

JSON floats use Python's shortest round-trip repr; CSV floats use 17
significant digits. Both are byte-deterministic for fixed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .chain import ChainSpec, Family, JacobiOperator, build, dumps, load_chain, perturb_coupling
from .dynamics import (FR_TOL, PST_TOL, RETURN_TOL, amplitude_matrix, amplitude_sweep, chain_summary,
                       transport_report)
from .errors import (ConvergenceFailure, InvalidParams, InvalidSite, InvalidSpec, NegativeWeight, NotAGrid,
                     ParseError)
from .spectral import SpectralMode, spectral_data

_PI_RE = re.compile(r"^\s*(?:([+-]?\d+)\s*\*\s*)?(-)?pi(?:\s*/\s*(\d+))?\s*$")

_FAMILY_FLAGS = {"asym-dualm1hahn": Family.ASYMMETRIC, "sym-dualm1hahn": Family.SYMMETRIC}


class CLIError(Exception):
    pass


def parse_time(text: str) -> float:
    """Decimal number or an integer multiple of ``pi`` or ``pi/m``: ``3*pi/4``, ``pi``, ``-pi/2``."""
    m = _PI_RE.match(text)
    if m:
        k = int(m.group(1)) if m.group(1) else 1
        if m.group(2):
            k = -k
        den = int(m.group(3)) if m.group(3) else 1
        if den == 0:
            raise argparse.ArgumentTypeError(f"invalid time {text!r}: division by zero")
        return k * (math.pi / den)
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid time {text!r}; use a decimal or k*pi/m") from None
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"time must be finite, got {text!r}")
    return val


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return val


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _add_chain_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("chain source (use --family/--N/--eta or --input)")
    g.add_argument("--family", choices=sorted(_FAMILY_FLAGS))
    g.add_argument("--N", type=int, help="index of the last site; the chain has N+1 sites")
    g.add_argument("--eta", type=float)
    g.add_argument("--input", metavar="PATH", help="chain JSON file")
    g.add_argument("--scale-J", nargs=2, metavar=("N", "FACTOR"),
                   help="scale coupling J_N (1-based) by FACTOR; the result is a custom chain")


def _add_output(p: argparse.ArgumentParser, formats: Sequence[str] = ()) -> None:
    p.add_argument("--output", "-o", metavar="PATH", help="write here instead of standard output")
    if formats:
        p.add_argument("--format", choices=list(formats), default=formats[0])


def _chain_from_args(args) -> JacobiOperator:
    family_flags = args.family is not None or args.N is not None or args.eta is not None
    if args.input is not None and family_flags:
        raise CLIError("give either --input or --family/--N/--eta, not both")
    if args.input is not None:
        try:
            op = load_chain(args.input)
        except OSError as exc:
            raise CLIError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        if args.family is None or args.N is None or args.eta is None:
            raise CLIError("need --family, --N and --eta (or --input)")
        op = build(ChainSpec(_FAMILY_FLAGS[args.family], args.N, args.eta))
    if args.scale_J is not None:
        try:
            n, factor = int(args.scale_J[0]), float(args.scale_J[1])
        except ValueError:
            raise CLIError("--scale-J expects an integer index and a number") from None
        op = perturb_coupling(op, n, factor)
    return op


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_build(args) -> int:
    _emit(dumps(_chain_from_args(args)), args.output)
    return 0


def cmd_spectrum(args) -> int:
    op = _chain_from_args(args)
    sd = spectral_data(op, args.mode)
    if args.format == "json":
        text = _json({
            "chain": chain_summary(op),
            "mode": SpectralMode(args.mode).value,
            "eigenvalues": sd.eigenvalues.tolist(),
            "weights": sd.weights.tolist(),
            "chi_table": sd.chi_table.tolist(),
        })
    else:
        header = ["s", "x", "w"] + [f"chi_{n}" for n in range(sd.n_sites)]
        rows = [[s, _fmt(sd.eigenvalues[s]), _fmt(sd.weights[s])] + [_fmt(c) for c in sd.chi_table[:, s]]
                for s in range(sd.n_sites)]
        text = _csv(header, rows)
    _emit(text, args.output)
    return 0


def cmd_evolve(args) -> int:
    op = _chain_from_args(args)
    am = amplitude_matrix(spectral_data(op, args.mode), args.time)
    a = am.entries
    if args.format == "json":
        text = _json({"chain": chain_summary(op), "time": am.time,
                      "re": a.real.tolist(), "im": a.imag.tolist()})
    else:
        rows = [[l, m, _fmt(a[l, m].real), _fmt(a[l, m].imag), _fmt(abs(a[l, m]) ** 2)]
                for m in range(a.shape[1]) for l in range(a.shape[0])]
        text = _csv(["target", "source", "re", "im", "probability"], rows)
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    op = _chain_from_args(args)
    report = transport_report(op, args.time, pst_tol=args.pst_tol, fr_tol=args.fr_tol,
                              return_tol=args.return_tol, mode=args.mode)
    _emit(_json(report.to_dict()), args.output)
    return 0 if report.ok else 1


def cmd_sweep(args) -> int:
    op = _chain_from_args(args)
    if args.steps < 1:
        raise CLIError("--steps must be at least 1")
    sd = spectral_data(op, args.mode)
    t = np.linspace(args.tmin, args.tmax, args.steps)
    amps = amplitude_sweep(sd, args.source, args.target, t)
    if args.format == "csv":
        text = _csv(["t", "re", "im", "fidelity"],
                    [[_fmt(tt), _fmt(a.real), _fmt(a.imag), _fmt(abs(a) ** 2)] for tt, a in zip(t, amps)])
    else:
        text = _json({"chain": chain_summary(op), "source": args.source, "target": args.target,
                      "t": t.tolist(), "re": amps.real.tolist(), "im": amps.imag.tolist(),
                      "fidelity": (np.abs(amps) ** 2).tolist()})
    _emit(text, args.output)
    return 0


SELFTEST_CHAINS = [
    (Family.ASYMMETRIC, 3, 0), (Family.ASYMMETRIC, 5, 1), (Family.ASYMMETRIC, 7, 2),
    (Family.ASYMMETRIC, 15, 0), (Family.ASYMMETRIC, 31, 3),
    (Family.SYMMETRIC, 5, 1), (Family.SYMMETRIC, 15, 2),
]


def run_selftest() -> list[tuple[str, str, float, float, bool]]:
    """Invariant checks on a fixed set of chains: ``(chain, check, value, tol, passed)`` rows."""
    rng = np.random.default_rng(20240401)
    rows = []
    for family, N, eta in SELFTEST_CHAINS:
        op = build(ChainSpec(family, N, eta))
        label = f"{family.value} N={N} eta={eta}"
        num = spectral_data(op, SpectralMode.NUMERIC)
        ana = spectral_data(op, SpectralMode.ANALYTIC_GRID)

        gram = (num.chi_table * num.weights) @ num.chi_table.T
        orth = float(np.max(np.abs(gram - np.eye(op.n_sites))))
        agree = max(float(np.max(np.abs(num.eigenvalues - ana.eigenvalues))),
                    float(np.max(np.abs(num.weights - ana.weights))),
                    float(np.max(np.abs(num.chi_table - ana.chi_table))))
        unit = max(amplitude_matrix(num, t).unitarity_defect() for t in rng.uniform(0, 8 * np.pi, 10))
        rep = transport_report(op, math.pi / 4)
        rows += [
            (label, "orthonormality", orth, 1e-9, orth <= 1e-9),
            (label, "mode agreement", agree, 1e-8, agree <= 1e-8),
            (label, "unitarity", unit, 1e-9, unit <= 1e-9),
            (label, "transport verdicts", float(not rep.ok), 0.0, rep.ok),
        ]
    return rows


def cmd_selftest(args) -> int:
    rows = run_selftest()
    width = max(len(r[0]) for r in rows)
    lines = [f"{'chain':<{width}}  {'check':<18}  {'value':>10}  {'tol':>8}  result"]
    for label, check, value, tol, ok in rows:
        lines.append(f"{label:<{width}}  {check:<18}  {value:10.3e}  {tol:8.1e}  {'PASS' if ok else 'FAIL'}")
    n_fail = sum(not r[4] for r in rows)
    lines.append(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hahnchain",
        description="Dual -1 Hahn XX chains: spectra, one-excitation dynamics and transport checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a chain JSON file")
    _add_chain_source(p)
    _add_output(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues, weights and orthonormal polynomial table")
    _add_chain_source(p)
    p.add_argument("--mode", choices=[m.value for m in SpectralMode], default="numeric")
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("evolve", help="transition amplitude matrix at one time")
    _add_chain_source(p)
    p.add_argument("--time", type=parse_time, default=math.pi / 4, help="decimal or k*pi/m (default pi/4)")
    p.add_argument("--mode", choices=[m.value for m in SpectralMode], default="numeric")
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="transport report; exit 1 if a claimed property fails")
    _add_chain_source(p)
    p.add_argument("--time", type=parse_time, default=math.pi / 4, help="decimal or k*pi/m (default pi/4)")
    p.add_argument("--pst-tol", type=_positive_float, default=PST_TOL, help="PST passes if |A| >= 1 - tol")
    p.add_argument("--fr-tol", type=_positive_float, default=FR_TOL, help="FR support probability threshold")
    p.add_argument("--return-tol", type=_positive_float, default=RETURN_TOL)
    p.add_argument("--mode", choices=[m.value for m in SpectralMode], default="numeric")
    _add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="amplitude and fidelity between two sites on a time grid")
    _add_chain_source(p)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--tmin", type=parse_time, default=0.0)
    p.add_argument("--tmax", type=parse_time, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of grid points, endpoints included")
    p.add_argument("--mode", choices=[m.value for m in SpectralMode], default="numeric")
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the embedded invariant suite")
    _add_output(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, InvalidSpec, InvalidParams, ParseError, InvalidSite, NotAGrid, NegativeWeight,
            ConvergenceFailure) as exc:
        print(f"hahnchain {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"hahnchain {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
