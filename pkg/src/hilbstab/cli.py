"""Command-line surface: trees, matrix, verify, walls.  JSON to stdout or a
file; exit codes: 0 ok, 2 usage/cap/parse, 3 wall or non-generic input,
4 numerical residual.
"""

from __future__ import annotations

import argparse
import json
import sys

from .envelope import (ResidualPoleError, restriction_matrix, s_ell_spec,
                       w_ell_spec)
from .limits import (Slope, WallSlopeError, coh_matrix, kth_matrix, walls)
from .partitions import (ParseError, box_table, matrix_max_n, max_n,
                         parse_partition)
from .thetafun import GenericityError, make_context
from .trees import l_shapes, skeleton, tree_weights, tree_to_json, upsilon_trees
from .verify import run_suite, validate_matrix_file

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONGENERIC = 3
EXIT_RESIDUAL = 4


def _complex_arg(text: str) -> complex:
    try:
        re_, im_ = text.split(",")
        return complex(float(re_), float(im_))
    except Exception:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def _add_config(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--theta-tol", type=float, default=1e-14)
    p.add_argument("--jet-order", type=int, default=None)
    p.add_argument("--q", type=_complex_arg, default=None)
    p.add_argument("--a", type=_complex_arg, default=None)
    p.add_argument("--hbar-half", type=_complex_arg, default=None)
    p.add_argument("--z", type=_complex_arg, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--pretty", action="store_true")


def _config_dict(args) -> dict:
    cfg = {"seed": args.seed, "tol": args.tol, "theta_tol": args.theta_tol}
    if args.jet_order:
        cfg["jet_order"] = args.jet_order
    overrides = {}
    for flag, gen in (("q", "q"), ("a", "a"), ("hbar_half", "hbar_half"), ("z", "z")):
        v = getattr(args, flag)
        if v is not None:
            overrides[gen] = v
            cfg.setdefault("overrides", {})[gen] = [v.real, v.imag]
    return cfg


def _overrides(args) -> dict:
    out = {}
    for flag in ("q", "a", "hbar_half", "z"):
        v = getattr(args, flag)
        if v is not None:
            out[flag] = v
    return out


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2 if args.pretty else None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _render_factorlist(spec) -> str:
    bits = [] if spec.sign == 1 else ["-1"]
    bits += [f"theta({m})" for m in spec.numerator]
    bits += [f"theta({m})^-1" for m in spec.denominator]
    bits += [f"theta({u * k})/theta({k})" for u, k in spec.kaehler_pairs]
    return " * ".join(bits) if bits else "1"


def cmd_trees(args) -> int:
    try:
        lam = parse_partition(args.partition)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if lam.n > max_n():
        print(f"error: n={lam.n} exceeds cap {max_n()}", file=sys.stderr)
        return EXIT_USAGE
    bt = box_table(lam)
    trees = upsilon_trees(lam, bt)
    payload = {
        "partition": str(lam),
        "box_table": bt.to_json(),
        "skeleton": skeleton(lam, bt).to_json(bt),
        "l_shapes": [[list(s.delta1[0]), list(s.delta1[1]), list(s.delta2[1])]
                     for s in l_shapes(lam, bt)],
        "trees": [tree_to_json(bt, t, tree_weights(lam, t, bt)) for t in trees],
        "config": _config_dict(args),
    }
    if args.pretty:
        payload["rendered"] = {
            "s_ell": _render_factorlist(s_ell_spec(lam, bt)),
            "w_ell": [_render_factorlist(w_ell_spec(lam, t, "single_z", bt))
                      for t in trees],
        }
    _emit(payload, args)
    return EXIT_OK


def cmd_matrix(args) -> int:
    cap = matrix_max_n()
    if not 1 <= args.n <= cap:
        print(f"error: n={args.n} exceeds cap {cap}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ctx = make_context(args.n, args.seed, _overrides(args),
                           theta_tol=args.theta_tol, jet_order=args.jet_order)
    except (GenericityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    try:
        if args.kind == "ell":
            mat = restriction_matrix(ctx, args.n)
        elif args.kind == "kth":
            if args.slope is None:
                print("error: --slope required for kth", file=sys.stderr)
                return EXIT_USAGE
            mat = kth_matrix(ctx, args.n, Slope(args.slope, args.n))
        else:
            mat = coh_matrix(ctx, args.n)
    except WallSlopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except ResidualPoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESIDUAL
    payload = mat.to_json()
    payload["config"] = _config_dict(args)
    _emit(payload, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.from_file:
        with open(args.from_file) as fh:
            data = json.load(fh)
        report = validate_matrix_file(data, args.tol)
        _emit(report, args)
        return EXIT_OK if report["pass"] else 1
    if not 1 <= args.n <= max_n():
        print(f"error: n={args.n} exceeds cap {max_n()}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_suite(args.suite, args.n, args.seed, args.tol)
    except (GenericityError, WallSlopeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except ResidualPoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESIDUAL
    report["config"] = _config_dict(args)
    _emit(report, args)
    return EXIT_OK if report["pass"] else 1


def cmd_walls(args) -> int:
    if not args.lo < args.hi:
        print("error: need lo < hi", file=sys.stderr)
        return EXIT_USAGE
    payload = walls(args.n, args.lo, args.hi).to_json()
    payload["config"] = _config_dict(args)
    _emit(payload, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hilbstab",
        description="Stable envelopes of fixed points on the Hilbert scheme "
                    "of points in the plane (elliptic / K-theory / cohomology).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help="box table, skeleton, L-shapes and trees")
    p.add_argument("partition", help="comma-separated parts, e.g. 4,2,1")
    _add_config(p)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("matrix", help="restriction matrix")
    p.add_argument("kind", choices=("ell", "kth", "coh"))
    p.add_argument("n", type=int)
    p.add_argument("--slope", type=float, default=None)
    _add_config(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=("elliptic", "limits", "all"), nargs="?",
                   default="all")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--from-file", default=None,
                   help="re-validate an emitted matrix JSON file")
    _add_config(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("walls", help="wall arrangement in a window")
    p.add_argument("n", type=int)
    p.add_argument("lo", type=float)
    p.add_argument("hi", type=float)
    _add_config(p)
    p.set_defaults(func=cmd_walls)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
