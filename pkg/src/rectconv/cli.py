"""Command-line front end.

Polynomials are given either as a JSON file ``{"coeffs": ["num/den", ...]}``
(ascending powers) or inline through their roots, e.g. ``--p-roots 1,2,5/2``.
Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import gegenbauer as geg
from .convolution import ConvolutionParams, rect_convolve
from .errors import RectConvError
from .pinching import linear_pinch, quad_pinch
from .poly import (
    cauchy_transform,
    from_roots,
    parse_roots,
    polynomial_from_json,
    polynomial_to_float_json,
    polynomial_to_json,
    to_fraction,
)
from .transforms import basic_theta, phi_report, theta
from .verification import CLAIMS, TrialSpec, run_claim

SCHEMA = 1


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    args: argparse.Namespace

    @property
    def output(self) -> str | None:
        return getattr(self.args, "out", None)


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except RectConvError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> Fraction:
    v = _rational(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _add_poly(parser: argparse.ArgumentParser, name: str, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument(f"--{name}", metavar="FILE", help=f"JSON file holding {name}")
    group.add_argument(f"--{name}-roots", metavar="LIST", help=f"roots of {name}, e.g. 1,2,5/2")
    parser.add_argument(f"--{name}-lead", type=_rational, default=Fraction(1),
                        help=f"leading coefficient used with --{name}-roots")


def _load_poly(args, name: str):
    path = getattr(args, name)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path} is not valid JSON: {exc}") from exc
        try:
            return polynomial_from_json(obj)
        except RectConvError as exc:
            raise UsageError(f"{path}: {exc}") from exc
    roots = getattr(args, f"{name}_roots")
    if roots is None:
        raise UsageError(f"polynomial {name} is required (--{name} FILE or --{name}-roots LIST)")
    try:
        return from_roots(parse_roots(roots), getattr(args, f"{name}_lead"))
    except RectConvError as exc:
        raise UsageError(f"--{name}-roots: {exc}") from exc


def _parse_range(text: str, kind=float) -> list:
    """``a:b`` (integers, inclusive), ``a:b:N`` (N evenly spaced points) or ``v1,v2,...``."""
    text = text.strip()
    if not text:
        raise UsageError("empty range")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                lo, hi = int(parts[0]), int(parts[1])
                vals = list(range(lo, hi + 1))
            elif len(parts) == 3:
                lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
                vals = [lo] if num == 1 else [lo + (hi - lo) * i / (num - 1) for i in range(num)]
            else:
                raise ValueError(text)
        else:
            vals = [kind(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc
    if not vals:
        raise UsageError(f"range {text!r} is empty")
    return [kind(v) for v in vals]


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_convolve(args) -> tuple[dict, int]:
    p, q = _load_poly(args, "p"), _load_poly(args, "q")
    r = rect_convolve(p, q, ConvolutionParams(args.d, args.k))
    return {"d": args.d, "k": args.k, "result": polynomial_to_json(r),
            "result_float": polynomial_to_float_json(r)}, 0


def _cmd_theta(args) -> tuple[dict, int]:
    rep = theta(_load_poly(args, "p"), args.n, args.alpha)
    return rep.to_dict(), 0


def _cmd_phi(args) -> tuple[dict, int]:
    rep = phi_report(_load_poly(args, "p"), _load_poly(args, "q"), args.n, args.k, args.d, args.alpha)
    return rep.to_dict(), 0


def _cmd_gegenbauer(args) -> tuple[dict, int]:
    if (args.alpha is None) == (args.theta is None):
        raise UsageError("give exactly one of --alpha or --theta")
    alpha = args.alpha if args.alpha is not None else 1 + args.theta * args.d
    c = geg.geg_coeffs(args.d, alpha)
    out = {"d": args.d, "alpha": str(alpha), "coeffs": polynomial_to_json(c)}
    if args.d >= 1:
        out["maxroot"] = geg.geg_maxroot(args.d, alpha)
        out["cauchy_at_one"] = str(geg.geg_cauchy_at_one(args.d, alpha))
    if args.x is not None:
        out["x"] = args.x
        out["value"] = geg.geg_eval(args.d, alpha, args.x)
        if args.d >= 1:
            out["cauchy"] = cauchy_transform(c, args.x)
    if args.theta is not None:
        out["theta"] = str(args.theta)
        out["gamma_theta"] = geg.gamma_theta(args.theta)
    return out, 0


def _cmd_pinch(args) -> tuple[dict, int]:
    p = _load_poly(args, "p")
    if args.zeta is not None:
        dec = linear_pinch(p, args.n, args.zeta)
        mode = "linear"
    else:
        if args.alpha is None:
            raise UsageError("pinch needs --alpha (or --zeta for the linearised pinch)")
        dec = quad_pinch(p, args.n, args.alpha)
        mode = "w"
    return {"mode": mode, "n": args.n, **dec.to_dict()}, 0


def _cmd_verify(args) -> tuple[dict, int]:
    spec = TrialSpec(seed=args.seed, trials=args.trials, d_max=args.d_max, n_max=args.n_max,
                     alpha_range=(0.0, float(args.alpha_max)))
    rep = run_claim(args.claim, spec)
    print(rep.summary(), file=sys.stderr)
    return rep.to_dict(include_runtime=args.include_runtime), 0 if rep.ok else 1


SWEEP_COLUMNS = {
    "geg-maxroot": ("theta", "d", "maxroot", "gamma_theta"),
    "cauchy-bound": ("n", "d", "x", "cauchy", "bound"),
    "phi-alpha": ("alpha", "phi"),
    "theta-alpha": ("alpha", "theta", "closed_form"),
}


def _sweep_rows(args) -> list[tuple]:
    rows = []
    if args.kind == "geg-maxroot":
        for th in _parse_range(args.theta, Fraction):
            for d in _parse_range(args.d, int):
                rows.append((th, d, geg.coupled_maxroot(d, th), geg.gamma_theta(th)))
    elif args.kind == "cauchy-bound":
        for n in _parse_range(args.n, int):
            for d in _parse_range(args.d, int):
                c = geg.geg_coeffs(d, n + 1)
                for x in _parse_range(args.x, float):
                    rows.append((n, d, x, cauchy_transform(c, x), geg.cauchy_upper_bound(n, d, x)))
    elif args.kind == "phi-alpha":
        p, q = _load_poly(args, "p"), _load_poly(args, "q")
        n, k, d = int(args.n), int(args.k), int(args.d)
        for a in _parse_range(args.alpha, float):
            rows.append((a, phi_report(p, q, n, k, d, a).phi))
    elif args.kind == "theta-alpha":
        lam, j, n = to_fraction(args.lam), int(args.j), int(args.n)
        p = from_roots([lam] * j)
        for a in _parse_range(args.alpha, float):
            rows.append((a, theta(p, n, a).theta, basic_theta(lam, j, n, a)))
    return rows


def _fmt_cell(v) -> str:
    if isinstance(v, (float, Fraction)) and not isinstance(v, bool):
        return f"{float(v):.17g}"
    return str(v)


def _cmd_sweep(args) -> tuple[str, int]:
    rows = _sweep_rows(args)
    buf = io.StringIO()
    cols = SWEEP_COLUMNS[args.kind]
    buf.write(f"# sweep {args.kind}; columns: {', '.join(cols)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue(), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rectconv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        return sp

    sp = add("convolve", "rectangular additive convolution")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=_nonneg_int, default=0)
    _add_poly(sp, "p")
    _add_poly(sp, "q")

    sp = add("theta", "W largest root and Theta")
    sp.add_argument("--n", type=_nonneg_int, required=True)
    sp.add_argument("--alpha", type=_positive, required=True)
    _add_poly(sp, "p")

    sp = add("phi", "slack of the main inequality")
    for flag in ("n", "k"):
        sp.add_argument(f"--{flag}", type=_nonneg_int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", type=_positive, required=True)
    _add_poly(sp, "p")
    _add_poly(sp, "q")

    sp = add("gegenbauer", "Gegenbauer coefficients, largest root, Cauchy transform")
    sp.add_argument("--d", type=_nonneg_int, required=True)
    sp.add_argument("--alpha", type=_positive)
    sp.add_argument("--theta", type=_rational, help="use alpha = 1 + theta d")
    sp.add_argument("--x", type=float)

    sp = add("pinch", "pinch decomposition")
    sp.add_argument("--n", type=_nonneg_int, required=True)
    sp.add_argument("--alpha", type=_positive)
    sp.add_argument("--zeta", type=_positive, help="linearised pinch at this zeta")
    _add_poly(sp, "p")

    sp = add("verify", "run a verification claim")
    sp.add_argument("--claim", choices=sorted(CLAIMS), required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--d-max", type=int, default=8)
    sp.add_argument("--n-max", type=_nonneg_int, default=5)
    sp.add_argument("--alpha-max", type=_positive, default=Fraction(2))
    sp.add_argument("--report", dest="out", metavar="PATH", help="write the JSON report here")
    sp.add_argument("--include-runtime", action="store_true",
                    help="add wall time to the report (makes it run-dependent)")

    sp = add("sweep", "CSV sweeps over parameter ranges")
    sp.add_argument("kind", choices=sorted(SWEEP_COLUMNS))
    sp.add_argument("--theta", default="1")
    sp.add_argument("--d", default="1:40")
    sp.add_argument("--n", default="0")
    sp.add_argument("--k", default="0")
    sp.add_argument("--x", default="1:3:21")
    sp.add_argument("--alpha", default="0.1:2:20")
    sp.add_argument("--lam", default="1")
    sp.add_argument("--j", default="1")
    _add_poly(sp, "p", required=False)
    _add_poly(sp, "q", required=False)
    return parser


HANDLERS = {
    "convolve": _cmd_convolve,
    "theta": _cmd_theta,
    "phi": _cmd_phi,
    "gegenbauer": _cmd_gegenbauer,
    "pinch": _cmd_pinch,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = CliConfig(args.command, args)
    try:
        payload, code = HANDLERS[cfg.subcommand](args)
    except (UsageError, RectConvError) as exc:
        print(f"rectconv {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(payload, str):
        _emit(payload, cfg.output)
    else:
        payload = {"schema": SCHEMA, **payload}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.output)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
