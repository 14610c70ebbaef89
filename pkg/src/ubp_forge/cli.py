"""Command-line front end: ``ubp-forge {hump,dual,series,fourier,prop1}``.

Exit codes:
    0   success, every certificate claim passes
    1   a certificate claim failed (or an unexpected numerical failure)
    2   the input family or set is bounded at the requested depth
    3   term budget exhausted (series)
    4   pointwise comparison hypothesis violated (series q3cert)
    64  bad usage or malformed input file
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import dual as dual_mod
from . import fourier as fourier_mod
from . import hump as hump_mod
from . import series as series_mod
from .core import DEFAULT_DIM, Diagonal, Matrix, SeqVector, euclidean_norm
from .errors import (
    FamilyUniformlyBounded,
    HorizonExceeded,
    HypothesisViolated,
    NotConvergent,
    UBPError,
)

EXIT_OK, EXIT_FAIL, EXIT_BOUNDED, EXIT_HORIZON, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 3, 4, 64
BUDGET_ENV = "UBP_FORGE_BUDGET"
FORMATS = ("json", "csv", "pretty")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    dim: int = DEFAULT_DIM
    depth: int = hump_mod.DEFAULT_DEPTH
    tol: float = 1e-10
    budget: int = series_mod.DEFAULT_BUDGET
    seed: int = 0
    fmt: str = "json"

    def __post_init__(self):
        if self.dim < 1 or self.depth < 1 or self.budget < 1 or self.seed < 0:
            raise UsageError("dim, depth and budget must be positive; seed nonnegative")
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")

    @classmethod
    def from_args(cls, args, depth_default: int = hump_mod.DEFAULT_DEPTH) -> RunConfig:
        budget = args.budget
        env = os.environ.get(BUDGET_ENV)
        if env:
            try:
                budget = int(float(env))
            except ValueError:
                raise UsageError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
        depth = args.depth if getattr(args, "depth", None) is not None else depth_default
        return cls(args.dim, depth, args.tol, budget, args.seed, args.format)


# -- presets -------------------------------------------------------------------

RANK1_U = (1.0, 2.0, 0.0, -1.0)
RANK1_V = (0.5, -1.0, 1.0, 2.0)


def _chain_norms(depth: int) -> list[float]:
    a = [1.0]
    for n in range(1, depth):
        a.append(hump_mod.growth_factor(n) * a[-1])
    return a


def hump_preset(name: str, depth: int) -> hump_mod.FamilySpec:
    if name == "diagonal-growth":
        ops = [Diagonal(SeqVector.basis(n, a)) for n, a in enumerate(_chain_norms(depth), start=1)]
        return hump_mod.FamilySpec(tuple(ops), tuple(f"diag{n}" for n in range(1, depth + 1)))
    if name == "rank1-growth":
        # |c u v^T|_op = c |u| |v|; normalizing keeps the norms on the chain exactly
        scale = 1.0 / (euclidean_norm(RANK1_U) * euclidean_norm(RANK1_V))
        ops = []
        # a hair above the chain so power-iteration rounding cannot drop a link
        for n, c in enumerate(_chain_norms(depth)):
            c *= (1.0 + 2.0**-20) ** n
            rows = [SeqVector.from_array([c * scale * ui * vj for vj in RANK1_V]) for ui in RANK1_U]
            ops.append(Matrix(tuple(rows), len(RANK1_V)))
        return hump_mod.FamilySpec(tuple(ops), tuple(f"rank1_{n}" for n in range(1, depth + 1)))
    if name == "constant-norms":
        ops = [Diagonal(SeqVector.basis(n, 1.0)) for n in range(1, 9)]
        return hump_mod.FamilySpec(tuple(ops))
    raise UsageError(f"unknown hump preset {name!r}")


def dual_preset(name: str, dim: int) -> dual_mod.SetSample:
    if name == "sqrt-n-diagonal":
        return dual_mod.SetSample.diagonal([math.sqrt(n) for n in range(1, dim + 1)])
    if name == "k2-on-k4":
        ks = [k for k in range(1, dim + 1) if k**4 <= dim]
        return dual_mod.SetSample(tuple(SeqVector.basis(k**4, float(k * k)) for k in ks))
    if name == "bounded":
        return dual_mod.SetSample(tuple(SeqVector.basis(n, 1.0) for n in range(1, 17)))
    raise UsageError(f"unknown dual preset {name!r}")


PROP1_PRESETS = {
    "axis-ramp": [[float(k), 0.0] for k in range(1, 101)],
    "three-four": [[3.0, 0.0], [0.0, 4.0]],
}


# -- helpers -------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _check_dim(vectors, dim: int):
    for v in vectors:
        if v.max_index > dim:
            raise UsageError(f"index {v.max_index} exceeds truncation dimension {dim}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _err(kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")


def _progress(event: dict) -> None:
    sys.stderr.write(json.dumps({"progress": event}) + "\n")
    sys.stderr.flush()


def _pretty_certificate(cert) -> list[str]:
    lines = [f"certificate kind={cert.kind} digest={cert.inputs_digest} "
             f"{'PASS' if cert.passed else 'FAIL'} ({len(cert.claims)} claims)"]
    for c in cert.claims:
        lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.description}: "
                     f"{c.lhs:.12g} {c.relation} {c.rhs:.12g}")
    return lines


# -- commands ------------------------------------------------------------------

def cmd_hump(args, out) -> int:
    cfg = RunConfig.from_args(args)
    if args.file:
        try:
            family = hump_mod.FamilySpec.from_json(_load_json(args.file))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise UsageError(f"malformed family file: {exc}") from None
        for T in family.operators:
            if isinstance(T, Matrix):
                vecs = T.rows
            else:
                vecs = [T.coeffs if isinstance(T, Diagonal) else T.rep]
            _check_dim(vecs, cfg.dim)
    elif args.preset == "from-json-file":
        raise UsageError("--preset from-json-file needs --file")
    else:
        family = hump_preset(args.preset, cfg.depth)
    witness, cert = hump_mod.build_witness(family, cfg.depth, cfg.tol, seed=cfg.seed)

    if cfg.fmt == "json":
        out.write(_dump({
            "command": "hump",
            "passed": cert.passed,
            "certificate": cert.to_json(),
            "witness": witness.to_json(),
        }))
    elif cfg.fmt == "csv":
        out.write(_csv(
            ["n", "index", "sign", "op_norm", "image_norm", "lower_bound"],
            [[r.position, r.family_index, s, repr(r.op_norm), repr(r.image_norm), repr(r.lower_bound)]
             for r, s in zip(witness.ledger, witness.signs)],
        ))
    else:
        lines = [f"gliding hump witness, depth {witness.depth}, |x| = {_l2(witness.point):.6g}"]
        for r, s in zip(witness.ledger, witness.signs):
            lines.append(f"  n={r.position} T#{r.family_index} sign={s:+d} |T|={r.op_norm:.6g} "
                         f"|Tx|={r.image_norm:.6g} >= {r.lower_bound:.6g}")
        out.write("\n".join(lines + _pretty_certificate(cert)) + "\n")
    return EXIT_OK if cert.passed else EXIT_FAIL


def _l2(v: SeqVector) -> float:
    return euclidean_norm(v.values())


def cmd_dual(args, out) -> int:
    cfg = RunConfig.from_args(args, depth_default=2)
    diagonal_values = None
    if args.file:
        try:
            sample = dual_mod.SetSample.from_json(_load_json(args.file))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise UsageError(f"malformed set sample file: {exc}") from None
        _check_dim(sample.elements, cfg.dim)
    elif args.preset == "from-json-file":
        raise UsageError("--preset from-json-file needs --file")
    elif args.preset == "sqrt-n-diagonal" and args.count is not None:
        diagonal_values = [math.sqrt(n) for n in range(1, args.length + 1)]
    else:
        sample = dual_preset(args.preset, cfg.dim)

    if diagonal_values is not None:
        witness = dual_mod.diagonal_dual_witness(diagonal_values, args.count)
        cert = dual_mod.diagonal_certificate(diagonal_values, witness)
        route = "diagonal"
    else:
        witness, cert = dual_mod.dual_witness(sample, cfg.depth, cfg.tol, seed=cfg.seed)
        route = "hump"

    if cfg.fmt == "json":
        out.write(_dump({
            "command": "dual",
            "route": route,
            "passed": cert.passed,
            "rep_norm_squared": witness.rep_norm**2,
            "witness": witness.to_json(),
            "certificate": cert.to_json(),
        }))
    elif cfg.fmt == "csv":
        out.write(_csv(
            ["k", "index", "value", "norm", "rep"],
            [[k, i, repr(v), repr(s), repr(witness.rep[i])]
             for k, (i, v, s) in enumerate(zip(witness.subsequence, witness.values, witness.norms), 1)],
        ))
    else:
        lines = [f"dual witness ({route}), |y|^2 = {witness.rep_norm**2:.12g}"]
        for k, (i, v, s) in enumerate(zip(witness.subsequence, witness.values, witness.norms), 1):
            lines.append(f"  k={k} n_k={i} |phi(s)|={v:.12g} |s|={s:.12g}")
        out.write("\n".join(lines + _pretty_certificate(cert)) + "\n")
    return EXIT_OK if cert.passed else EXIT_FAIL


def _series_from_args(args) -> series_mod.SeriesSpec:
    if args.terms:
        try:
            return series_mod.SeriesSpec.explicit([float(t) for t in args.terms.split(",")])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not args.gen:
        raise UsageError("give --gen or --terms")
    try:
        return series_mod.SeriesSpec.parse(args.gen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_series(args, out) -> int:
    cfg = RunConfig.from_args(args)
    progress = _progress if args.progress else None
    if args.action == "accelerate":
        spec = _series_from_args(args)
        try:
            res = series_mod.accelerate_convergent(spec, args.horizon)
        except (NotConvergent, ValueError) as exc:
            raise UsageError(str(exc)) from None
        cert = res.certificate
        if cfg.fmt == "csv":
            xs = spec.term_array(1, args.horizon + 1)
            out.write(_csv(
                ["n", "x", "y", "x_times_y", "partial_sum", "telescoped_bound"],
                [[n, repr(float(x)), repr(float(y)), repr(float(t)), repr(float(p)), repr(float(b))]
                 for n, (x, y, t, p, b) in enumerate(
                     zip(xs, res.y, res.weighted, res.partial_sums, res.telescoped), 1)],
            ))
        else:
            body = {
                "command": "series accelerate",
                "series": spec.label(),
                "horizon": args.horizon,
                "tail_bound": res.bound,
                "final_partial_sum": float(res.partial_sums[-1]),
                "max_partial_sum": float(res.partial_sums.max()),
                "y_first": float(res.y[0]),
                "y_last": float(res.y[-1]),
                "passed": cert.passed,
                "certificate": cert.to_json(),
            }
            out.write(_dump(body) if cfg.fmt == "json" else _pretty_series(body, cert))
        return EXIT_OK if cert.passed else EXIT_FAIL

    if args.action == "decelerate":
        spec = _series_from_args(args)
        try:
            res = series_mod.decelerate_divergent(spec, args.target, cfg.budget, progress)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        dc = res.certificate
        label, y_last = spec.label(), float(res.y[-1])
    else:
        try:
            dc = series_mod.q3_divergence_certificate(args.y, args.c, args.n0, args.target,
                                                      cfg.budget, progress)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        label, y_last = args.y, None

    cert = dc.to_certificate()
    if cfg.fmt == "csv":
        out.write(_csv(["target", "index", "partial_sum", "previous_partial_sum", "min_ratio"],
                       [[repr(dc.target), dc.index, repr(dc.partial_sum),
                         repr(dc.previous_partial_sum), "" if dc.min_ratio is None else repr(dc.min_ratio)]]))
    else:
        body = {
            "command": f"series {args.action}",
            "series": label,
            "index": dc.index,
            "partial_sum": dc.partial_sum,
            "passed": cert.passed,
            "divergence_certificate": dc.to_json(),
            "certificate": cert.to_json(),
        }
        if y_last is not None:
            body["y_last"] = y_last
        out.write(_dump(body) if cfg.fmt == "json" else _pretty_series(body, cert))
    return EXIT_OK if cert.passed else EXIT_FAIL


def _pretty_series(body: dict, cert) -> str:
    lines = [body["command"] + ":"]
    lines += [f"  {k}: {v}" for k, v in body.items()
              if k not in ("command", "certificate", "divergence_certificate")]
    return "\n".join(lines + _pretty_certificate(cert)) + "\n"


def cmd_fourier(args, out) -> int:
    cfg = RunConfig.from_args(args)
    try:
        f = fourier_mod.builtin(args.fn)
        prof = fourier_mod.decay_profile(f, args.k, args.N, cfg.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = prof.summary()
    if args.riemann_lebesgue:
        summary["riemann_lebesgue_bands"] = [
            {"lo": b.lo, "hi": b.hi, "max_abs": b.max_abs}
            for b in fourier_mod.riemann_lebesgue_check(f, args.N, cfg.tol)
        ]
    if cfg.fmt == "csv":
        out.write(prof.to_csv())
        if args.summary_out:
            with open(args.summary_out, "w", encoding="utf-8") as fh:
                fh.write(_dump(summary))
    elif cfg.fmt == "json":
        out.write(_dump({"command": "fourier", **summary, "partial_sums": list(prof.partial_sums)}))
    else:
        lines = [f"{k}: {v}" for k, v in summary.items()]
        step = max(1, args.N // 8)
        lines += [f"  m={m} partial={prof.partial_sums[m - 1]:.10g}"
                  for m in range(step, args.N + 1, step)]
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_prop1(args, out) -> int:
    cfg = RunConfig.from_args(args)
    if args.file:
        data = _load_json(args.file)
        points = data.get("points") if isinstance(data, dict) else data
    else:
        points = PROP1_PRESETS[args.preset]
    try:
        res = dual_mod.coordinate_unbounded_direction(points)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed points: {exc}") from None
    max_norm = max(euclidean_norm(p) for p in points)
    ok = max_norm <= res.norm_bound
    body = {
        "command": "prop1",
        "index": res.index,
        "bounds": list(res.bounds),
        "norm_bound": res.norm_bound,
        "max_sample_norm": max_norm,
        "dominates": ok,
    }
    if cfg.fmt == "csv":
        out.write(_csv(["coordinate", "bound"], [[i, repr(m)] for i, m in enumerate(res.bounds, 1)]))
    elif cfg.fmt == "json":
        out.write(_dump(body))
    else:
        out.write("\n".join(f"{k}: {v}" for k, v in body.items()) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--dim", type=_positive_int, default=DEFAULT_DIM,
                        help="truncation dimension (default %(default)s)")
    common.add_argument("--tol", type=_positive_float, default=1e-10)
    common.add_argument("--budget", type=_positive_int, default=series_mod.DEFAULT_BUDGET,
                        help=f"term budget for scans; {BUDGET_ENV} overrides")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="ubp-forge", description="Gliding-hump witnesses, dual functionals, "
                "series boundary certificates and Fourier decay profiles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("hump", parents=[common], help="build and certify a gliding-hump witness")
    h.add_argument("--preset", choices=("diagonal-growth", "rank1-growth", "constant-norms",
                                        "from-json-file"), default="diagonal-growth")
    h.add_argument("--file", help="operator family JSON")
    h.add_argument("--depth", type=_positive_int, default=hump_mod.DEFAULT_DEPTH)

    d = sub.add_parser("dual", parents=[common], help="functional witnessing an unbounded set")
    d.add_argument("--preset", choices=("sqrt-n-diagonal", "k2-on-k4", "bounded", "from-json-file"),
                   default="sqrt-n-diagonal")
    d.add_argument("--file", help="set sample JSON")
    d.add_argument("--depth", type=_positive_int, default=None,
                   help="chain depth for the hump route (default 2)")
    d.add_argument("--count", type=_positive_int, default=None,
                   help="with sqrt-n-diagonal: explicit 1/k representer with this many picks")
    d.add_argument("--length", type=_positive_int, default=10_000,
                   help="sample length for the explicit diagonal route (default %(default)s)")

    s = sub.add_parser("series", parents=[common], help="convergence/divergence boundary")
    s.add_argument("action", choices=("accelerate", "decelerate", "q3cert"))
    s.add_argument("--gen", help="geometric:R | constant[:C] | one-over-n | one-over-sqrt-n | one-over-n-squared")
    s.add_argument("--terms", help="explicit comma-separated positive terms")
    s.add_argument("--horizon", type=_positive_int, default=50)
    s.add_argument("--target", type=float, default=10.0)
    s.add_argument("--y", default="one-over-sqrt-n",
                   help="one-over-sqrt-n | one-over-n | sqrt-log-over-n | power:A")
    s.add_argument("--c", type=_positive_float, default=1.0)
    s.add_argument("--n0", type=_positive_int, default=1)
    s.add_argument("--no-progress", dest="progress", action="store_false",
                   help="suppress JSON-lines progress on stderr")

    f = sub.add_parser("fourier", parents=[common], help="weighted coefficient decay profile")
    f.add_argument("--fn", default="sawtooth",
                   help="sawtooth | triangle | smooth | bandlimited:K | trig:F")
    f.add_argument("--k", type=int, default=0)
    f.add_argument("--N", type=int, default=64)
    f.add_argument("--riemann-lebesgue", action="store_true",
                   help="also report dyadic band maxima of |f^(n)|")
    f.add_argument("--summary-out", help="with --format csv: write the JSON summary here")

    q = sub.add_parser("prop1", parents=[common], help="coordinate projection bound for a finite sample")
    q.add_argument("--file", help="JSON list of points (or {\"points\": [...]})")
    q.add_argument("--preset", choices=sorted(PROP1_PRESETS), default="three-four")
    return p


COMMANDS = {
    "hump": cmd_hump,
    "dual": cmd_dual,
    "series": cmd_series,
    "fourier": cmd_fourier,
    "prop1": cmd_prop1,
}


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        _err("usage", str(exc))
        return EXIT_USAGE
    except FamilyUniformlyBounded as exc:
        _err("FamilyUniformlyBounded", str(exc), depth_reached=exc.depth_reached)
        return EXIT_BOUNDED
    except HorizonExceeded as exc:
        _err("HorizonExceeded", str(exc), budget=exc.budget, progress=exc.progress)
        return EXIT_HORIZON
    except HypothesisViolated as exc:
        _err("HypothesisViolated", str(exc), n=exc.n)
        return EXIT_HYPOTHESIS
    except UBPError as exc:
        _err(type(exc).__name__, str(exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
