"""Command-line front end.

Vectors are read from file paths, from stdin (``-``), or inline; the format
is auto-detected from the first non-space byte: ``[`` means a JSON array of
numbers, anything else plain whitespace-separated decimals. All probabilities
are printed with 12 significant digits. Exit codes: 0 success, 1 validation
or internal error (the machine-readable error code goes to stderr), 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from .errors import Empty, MecoupleError, ValidationError
from .lattice import glb
from .multiway import DENSE_CELL_CAP, k_min_entropy_coupling
from .oracle import DEFAULT_SIZE_CAP, exact_min_entropy
from .pairwise import bounds, distance_interval, min_entropy_coupling
from .probvec import DEFAULT_TOL, ProbVec, Tolerances, entropy, make_probvec

ENV_TOLERANCE_SUM = "MECOUPLE_TOLERANCE_SUM"
ENV_TOLERANCE_ZERO = "MECOUPLE_TOLERANCE_ZERO"


class _UsageError(Exception):
    pass


def _sig(x: float) -> float:
    """Round to 12 significant digits for stable, diffable output."""
    return float(f"{float(x):.12g}")


def _read_vector(source: str) -> list[float]:
    if source == "-":
        text = sys.stdin.read()
    elif os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    stripped = text.strip()
    if not stripped:
        raise Empty("empty vector input")
    if stripped[0] == "[":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"unparseable JSON vector: {exc}") from exc
        if not isinstance(data, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in data
        ):
            raise ValidationError("JSON vector must be an array of numbers")
        return [float(v) for v in data]
    try:
        return [float(tok) for tok in stripped.split()]
    except ValueError as exc:
        raise ValidationError(f"unparseable numeric token: {exc}") from exc


def _load(source: str, tol: Tolerances) -> tuple[ProbVec, int]:
    raw = _read_vector(source)
    return make_probvec(raw, tol), len(raw)


def _tolerance_flag(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1): {text!r}")
    return value


def _resolve_tolerances(args: argparse.Namespace) -> Tolerances:
    def pick(flag_value, env_name, default):
        if flag_value is not None:
            return flag_value
        env = os.environ.get(env_name)
        if env is None:
            return default
        try:
            value = float(env)
        except ValueError as exc:
            raise _UsageError(f"{env_name} is not a number: {env!r}") from exc
        if not 0.0 < value < 1.0:
            raise _UsageError(f"{env_name} must lie in (0, 1): {env!r}")
        return value

    eps_sum = pick(args.tolerance_sum, ENV_TOLERANCE_SUM, DEFAULT_TOL.eps_sum)
    eps_zero = pick(args.tolerance_zero, ENV_TOLERANCE_ZERO, DEFAULT_TOL.eps_zero)
    try:
        return Tolerances(eps_sum=eps_sum, eps_zero=eps_zero)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _scale(args: argparse.Namespace) -> float:
    return 1.0 if args.base == "bits" else math.log(2.0)


def _matrix_doc(mat: np.ndarray) -> list[list[float]]:
    return [[_sig(v) for v in row] for row in mat]


def _cmd_glb(args, tol) -> dict:
    p, _ = _load(args.p, tol)
    q, _ = _load(args.q, tol)
    u = _scale(args)
    z = glb(p, q, tol).meet
    return {
        "glb": [_sig(v) for v in z.values],
        "entropy": _sig(entropy(z) * u),
        "unit": args.base,
    }


def _cmd_couple(args, tol) -> dict:
    p, np_raw = _load(args.p, tol)
    q, nq_raw = _load(args.q, tol)
    u = _scale(args)
    cm = min_entropy_coupling(p, q, tol)
    full = cm.matrix if args.sorted else cm.in_original_order()
    trimmed = full[:np_raw, :nq_raw]
    h_m = cm.entropy()
    h_z = entropy(glb(p, q, tol).meet)
    return {
        "order": "sorted" if args.sorted else "original",
        "rows": np_raw,
        "cols": nq_raw,
        "matrix": _matrix_doc(trimmed),
        "joint_entropy": _sig(h_m * u),
        "glb_entropy": _sig(h_z * u),
        "gap": _sig((h_m - h_z) * u),
        "nnz": cm.nnz,
        "unit": args.base,
    }


def _cmd_couple_k(args, tol) -> dict:
    loaded = [_load(src, tol) for src in args.marginals]
    ps = [p for p, _ in loaded]
    u = _scale(args)
    joint = k_min_entropy_coupling(ps, tol)
    meet = ps[0]
    for other in ps[1:]:
        meet = glb(meet, other, tol).meet
    h_meet = entropy(meet)
    ceil_log_k = (joint.k - 1).bit_length()
    doc = {
        "k": joint.k,
        "dims": list(joint.dims),
        "entries": [
            {"value": _sig(v), "indices": list(c)} for v, c in joint.entries
        ],
        "joint_entropy": _sig(joint.entropy() * u),
        "glb_entropy": _sig(h_meet * u),
        "bound": _sig((h_meet + ceil_log_k) * u),
        "unit": args.base,
    }
    if args.dense:
        doc["dense"] = np.vectorize(_sig)(joint.to_dense(cap=args.dense_cap)).tolist()
    return doc


def _cmd_bounds(args, tol) -> dict:
    p, _ = _load(args.p, tol)
    q, _ = _load(args.q, tol)
    u = _scale(args)
    rep = bounds(p, q, tol)
    return {
        "h_p": _sig(rep.h_p * u),
        "h_q": _sig(rep.h_q * u),
        "h_glb": _sig(rep.h_glb * u),
        "mi_upper_improved": _sig(rep.mi_upper_improved * u),
        "mi_upper_classic": _sig(rep.mi_upper_classic * u),
        "joint_lower_classic": _sig(rep.joint_lower_classic * u),
        "unit": args.base,
    }


def _cmd_distance(args, tol) -> dict:
    p, _ = _load(args.p, tol)
    q, _ = _load(args.q, tol)
    u = _scale(args)
    interval = distance_interval(p, q, tol)
    return {
        "lower": _sig(interval.lower * u),
        "upper": _sig(interval.upper * u),
        "estimate": _sig(interval.estimate * u),
        "unit": args.base,
    }


def _cmd_oracle(args, tol) -> dict:
    p, _ = _load(args.p, tol)
    q, _ = _load(args.q, tol)
    u = _scale(args)
    opt, vc = exact_min_entropy(p, q, tol, cap=args.cap)
    if args.sorted:
        mat = vc.matrix
    else:
        mat = np.zeros_like(vc.matrix)
        mat[np.ix_(list(p.perm), list(q.perm))] = vc.matrix
    return {
        "opt_entropy": _sig(opt * u),
        "order": "sorted" if args.sorted else "original",
        "matrix": _matrix_doc(mat),
        "support_size": vc.support_size,
        "unit": args.base,
    }


def _emit_text(doc: dict, out) -> None:
    def fmt(v):
        return f"{v:.12g}" if isinstance(v, float) else str(v)

    for key, value in doc.items():
        if key == "dense":
            out.write(f"dense: {json.dumps(value)}\n")
        elif key == "matrix":
            out.write("matrix:\n")
            for row in value:
                out.write("  " + " ".join(fmt(v) for v in row) + "\n")
        elif key == "entries":
            out.write("entries:\n")
            for e in value:
                joined = ",".join(str(i) for i in e["indices"])
                out.write(f"  {fmt(e['value'])} @ ({joined})\n")
        elif isinstance(value, list):
            out.write(f"{key}: " + " ".join(fmt(v) for v in value) + "\n")
        else:
            out.write(f"{key}: {fmt(value)}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mecouple",
        description="Minimum-entropy couplings, majorization bounds, and an exact oracle.",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--base", choices=("bits", "nats"), default="bits",
                        help="display unit for entropies (guarantees are stated in bits)")
    parser.add_argument("--tolerance-sum", type=_tolerance_flag, default=None,
                        help=f"mass-total tolerance (env {ENV_TOLERANCE_SUM})")
    parser.add_argument("--tolerance-zero", type=_tolerance_flag, default=None,
                        help=f"zero-clamp tolerance (env {ENV_TOLERANCE_ZERO})")
    sub = parser.add_subparsers(dest="command", required=True)

    def vec_args(sp):
        sp.add_argument("p", help="vector: file path, '-' for stdin, or inline")
        sp.add_argument("q", help="vector: file path, '-' for stdin, or inline")

    sp = sub.add_parser("glb", help="greatest lower bound in the majorization order")
    vec_args(sp)
    sp.set_defaults(fn=_cmd_glb)

    sp = sub.add_parser("couple", help="two-marginal coupling within 1 bit of minimum entropy")
    vec_args(sp)
    sp.add_argument("--sorted", action="store_true",
                    help="report the matrix in sorted (non-increasing marginal) order")
    sp.set_defaults(fn=_cmd_couple)

    sp = sub.add_parser("couple-k", help="k-marginal coupling within ceil(log2 k) bits")
    sp.add_argument("marginals", nargs="+", help="two or more vectors")
    sp.add_argument("--dense", action="store_true", help="also emit the dense tensor")
    sp.add_argument("--dense-cap", type=int, default=DENSE_CELL_CAP,
                    help="max dense tensor cells")
    sp.set_defaults(fn=_cmd_couple_k)

    sp = sub.add_parser("bounds", help="entropy and mutual-information bounds from marginals")
    vec_args(sp)
    sp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("distance", help="certified interval for 2W - H(p) - H(q)")
    vec_args(sp)
    sp.set_defaults(fn=_cmd_distance)

    sp = sub.add_parser("oracle", help="exact minimum-entropy coupling (small instances)")
    vec_args(sp)
    sp.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP,
                    help="max n+m accepted by the exhaustive search")
    sp.add_argument("--sorted", action="store_true")
    sp.set_defaults(fn=_cmd_oracle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _resolve_tolerances(args)
        doc = args.fn(args, tol)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except MecoupleError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        json.dump(doc, sys.stdout, separators=(",", ":"))
        sys.stdout.write("\n")
    else:
        _emit_text(doc, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
